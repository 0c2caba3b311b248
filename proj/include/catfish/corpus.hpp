#pragma once

// Profile data model and JSONL corpus ingestion.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace catfish {

enum class Gender { Male, Female, Other };
enum class Interest { Men, Women, Both, Unspecified };
enum class RelationshipStatus { Single, InRelationship, Unspecified };

std::string_view to_string(Gender g);
std::string_view to_string(Interest i);
std::string_view to_string(RelationshipStatus s);
std::optional<Gender> parse_gender(std::string_view s);

inline constexpr int kMinAge = 18;
inline constexpr int kMaxAge = 60;

struct Comment {
  std::string text;
  bool operator==(const Comment&) const = default;
};

struct Profile {
  std::string id;
  bool verified = false;
  Gender reported_gender = Gender::Other;
  std::optional<int> reported_age;
  Interest interested_in = Interest::Unspecified;
  std::string country;
  RelationshipStatus relationship_status = RelationshipStatus::Unspecified;
  std::uint64_t videos_watched = 0;
  std::uint64_t videos_posted = 0;
  std::uint64_t profile_views = 0;
  std::uint64_t friend_count = 0;
  std::uint64_t subscriber_count = 0;
  std::uint64_t subscription_count = 0;
  std::optional<double> pct_male_friends;
  std::optional<double> pct_female_friends;
  std::optional<double> pct_male_subscribers;
  std::optional<double> pct_female_subscribers;
  std::vector<Comment> comments;

  bool operator==(const Profile&) const = default;
};

struct Corpus {
  std::vector<Profile> profiles;
  std::string source;

  std::size_t size() const { return profiles.size(); }
  bool empty() const { return profiles.empty(); }
  bool operator==(const Corpus&) const = default;
};

// Caps ages above 60 at 60. Throws ValidationError below 18.
int normalize_age(int age);

// Checks every type invariant of a single profile; `line` is attached to errors.
void validate_profile(const Profile& p, std::optional<std::size_t> line = std::nullopt);

// Reads one JSON object per line. Malformed lines, invariant violations and
// duplicate ids throw ValidationError naming the line. Records with an age
// below 18 are skipped and described in `rejected` when provided.
Corpus read_corpus(std::istream& in, std::string source,
                   std::vector<std::string>* rejected = nullptr);
Corpus load_corpus(const std::filesystem::path& path,
                   std::vector<std::string>* rejected = nullptr);

std::string profile_to_json_line(const Profile& p);
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

// Profiles with at least `min_comments` comments, order preserved.
Corpus eligible_subset(const Corpus& corpus, std::size_t min_comments);

struct GenderSummary {
  std::size_t count = 0;
  std::size_t verified = 0;
  std::optional<double> mean_age;
  std::optional<double> mean_friends;
  std::optional<double> mean_subscribers;
};

struct CorpusSummary {
  std::size_t total = 0;
  std::size_t verified = 0;
  std::optional<double> verified_fraction;
  std::map<Gender, GenderSummary> by_gender;  // always holds all three genders
};

CorpusSummary corpus_summary(const Corpus& corpus);

}  // namespace catfish
