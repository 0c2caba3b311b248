#include "catfish/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "catfish/error.hpp"
#include "json.hpp"

namespace catfish {

using nlohmann::json;

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Other: return "other";
  }
  return "other";
}

std::string_view to_string(Interest i) {
  switch (i) {
    case Interest::Men: return "men";
    case Interest::Women: return "women";
    case Interest::Both: return "both";
    case Interest::Unspecified: return "unspecified";
  }
  return "unspecified";
}

std::string_view to_string(RelationshipStatus s) {
  switch (s) {
    case RelationshipStatus::Single: return "single";
    case RelationshipStatus::InRelationship: return "relationship";
    case RelationshipStatus::Unspecified: return "unspecified";
  }
  return "unspecified";
}

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "male") return Gender::Male;
  if (s == "female") return Gender::Female;
  if (s == "other") return Gender::Other;
  return std::nullopt;
}

int normalize_age(int age) {
  if (age < kMinAge) {
    throw ValidationError("age " + std::to_string(age) + " is below the minimum of 18", std::nullopt,
                          "age");
  }
  return std::min(age, kMaxAge);
}

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); });
}

void check_fraction(const std::optional<double>& v, const char* field,
                    std::optional<std::size_t> line) {
  if (v && !(std::isfinite(*v) && *v >= 0.0 && *v <= 1.0)) {
    throw ValidationError(std::string(field) + " must lie in [0,1]", line, field);
  }
}

void check_pair(const std::optional<double>& a, const std::optional<double>& b,
                const char* field, std::optional<std::size_t> line) {
  // A small allowance for decimal round-off in exported percentages.
  if (a && b && *a + *b > 1.0 + 1e-9) {
    throw ValidationError(std::string(field) + " male+female fractions exceed 1", line, field);
  }
}

const json& require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing key '") + key + "'", line, key);
  return *it;
}

std::uint64_t read_count(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_number_integer()) throw ValidationError(std::string(key) + " must be an integer", line, key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw ValidationError(std::string(key) + " must be >= 0 (got " + std::to_string(s) + ")", line, key);
  return static_cast<std::uint64_t>(s);
}

std::optional<double> read_fraction(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ValidationError(std::string(key) + " must be a number or null", line, key);
  return v.get<double>();
}

std::string read_string(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) throw ValidationError(std::string(key) + " must be a string", line, key);
  return v.get<std::string>();
}

const std::unordered_set<std::string>& known_keys() {
  static const std::unordered_set<std::string> keys = {
      "id", "verified", "gender", "age", "interested_in", "country", "status",
      "videos_watched", "videos_posted", "profile_views", "friends", "subscribers",
      "subscriptions", "pct_male_friends", "pct_female_friends", "pct_male_subscribers",
      "pct_female_subscribers", "comments"};
  return keys;
}

struct BelowAgeFloor {
  std::string id;
  long long age;
};

Profile profile_from_json(const json& obj, std::size_t line) {
  if (!obj.is_object()) throw ValidationError("expected a JSON object", line);
  for (const auto& [key, _] : obj.items()) {
    if (!known_keys().contains(key)) throw ValidationError("unknown key '" + key + "'", line, key);
  }
  Profile p;
  p.id = read_string(obj, "id", line);
  const json& verified = require(obj, "verified", line);
  if (!verified.is_boolean()) throw ValidationError("verified must be a boolean", line, "verified");
  p.verified = verified.get<bool>();

  const auto gender = parse_gender(read_string(obj, "gender", line));
  if (!gender) throw ValidationError("gender must be male, female or other", line, "gender");
  p.reported_gender = *gender;

  const json& age = require(obj, "age", line);
  if (!age.is_null()) {
    if (!age.is_number_integer()) throw ValidationError("age must be an integer or null", line, "age");
    const auto a = age.get<long long>();
    if (a < kMinAge) throw BelowAgeFloor{p.id, a};
    p.reported_age = normalize_age(static_cast<int>(std::min<long long>(a, 1000)));
  }

  const json& interest = require(obj, "interested_in", line);
  if (interest.is_null()) {
    p.interested_in = Interest::Unspecified;
  } else if (interest == "men") {
    p.interested_in = Interest::Men;
  } else if (interest == "women") {
    p.interested_in = Interest::Women;
  } else if (interest == "both") {
    p.interested_in = Interest::Both;
  } else {
    throw ValidationError("interested_in must be men, women, both or null", line, "interested_in");
  }

  p.country = read_string(obj, "country", line);

  const json& status = require(obj, "status", line);
  if (status.is_null()) {
    p.relationship_status = RelationshipStatus::Unspecified;
  } else if (status == "single") {
    p.relationship_status = RelationshipStatus::Single;
  } else if (status == "relationship") {
    p.relationship_status = RelationshipStatus::InRelationship;
  } else {
    throw ValidationError("status must be single, relationship or null", line, "status");
  }

  p.videos_watched = read_count(obj, "videos_watched", line);
  p.videos_posted = read_count(obj, "videos_posted", line);
  p.profile_views = read_count(obj, "profile_views", line);
  p.friend_count = read_count(obj, "friends", line);
  p.subscriber_count = read_count(obj, "subscribers", line);
  p.subscription_count = read_count(obj, "subscriptions", line);
  p.pct_male_friends = read_fraction(obj, "pct_male_friends", line);
  p.pct_female_friends = read_fraction(obj, "pct_female_friends", line);
  p.pct_male_subscribers = read_fraction(obj, "pct_male_subscribers", line);
  p.pct_female_subscribers = read_fraction(obj, "pct_female_subscribers", line);

  const json& comments = require(obj, "comments", line);
  if (!comments.is_array()) throw ValidationError("comments must be an array", line, "comments");
  p.comments.reserve(comments.size());
  for (const auto& c : comments) {
    if (!c.is_string()) throw ValidationError("comments must hold strings", line, "comments");
    p.comments.push_back(Comment{c.get<std::string>()});
  }
  validate_profile(p, line);
  return p;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void validate_profile(const Profile& p, std::optional<std::size_t> line) {
  if (p.id.empty()) throw ValidationError("id must be non-empty", line, "id");
  if (p.reported_age && (*p.reported_age < kMinAge || *p.reported_age > kMaxAge)) {
    throw ValidationError("age must lie in [18, 60] after normalization", line, "age");
  }
  check_fraction(p.pct_male_friends, "pct_male_friends", line);
  check_fraction(p.pct_female_friends, "pct_female_friends", line);
  check_fraction(p.pct_male_subscribers, "pct_male_subscribers", line);
  check_fraction(p.pct_female_subscribers, "pct_female_subscribers", line);
  check_pair(p.pct_male_friends, p.pct_female_friends, "pct_*_friends", line);
  check_pair(p.pct_male_subscribers, p.pct_female_subscribers, "pct_*_subscribers", line);
  for (const auto& c : p.comments) {
    if (blank(c.text)) throw ValidationError("comment text is empty", line, "comments");
  }
}

Corpus read_corpus(std::istream& in, std::string source, std::vector<std::string>* rejected) {
  Corpus corpus;
  corpus.source = std::move(source);
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("malformed JSON: ") + e.what(), line);
    }
    try {
      Profile p = profile_from_json(obj, line);
      if (!seen.insert(p.id).second) throw ValidationError("duplicate id '" + p.id + "'", line, "id");
      corpus.profiles.push_back(std::move(p));
    } catch (const BelowAgeFloor& b) {
      if (rejected) {
        rejected->push_back("line " + std::to_string(line) + ": rejected '" + b.id + "', age " +
                            std::to_string(b.age) + " is below 18");
      }
    }
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, std::vector<std::string>* rejected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open corpus file " + path.string());
  return read_corpus(in, path.string(), rejected);
}

std::string profile_to_json_line(const Profile& p) {
  json obj = json::object();
  obj["id"] = p.id;
  obj["verified"] = p.verified;
  obj["gender"] = std::string(to_string(p.reported_gender));
  obj["age"] = p.reported_age ? json(*p.reported_age) : json(nullptr);
  obj["interested_in"] = p.interested_in == Interest::Unspecified
                             ? json(nullptr)
                             : json(std::string(to_string(p.interested_in)));
  obj["country"] = p.country;
  obj["status"] = p.relationship_status == RelationshipStatus::Unspecified
                      ? json(nullptr)
                      : json(std::string(to_string(p.relationship_status)));
  obj["videos_watched"] = p.videos_watched;
  obj["videos_posted"] = p.videos_posted;
  obj["profile_views"] = p.profile_views;
  obj["friends"] = p.friend_count;
  obj["subscribers"] = p.subscriber_count;
  obj["subscriptions"] = p.subscription_count;
  obj["pct_male_friends"] = optional_number(p.pct_male_friends);
  obj["pct_female_friends"] = optional_number(p.pct_female_friends);
  obj["pct_male_subscribers"] = optional_number(p.pct_male_subscribers);
  obj["pct_female_subscribers"] = optional_number(p.pct_female_subscribers);
  json comments = json::array();
  for (const auto& c : p.comments) comments.push_back(c.text);
  obj["comments"] = std::move(comments);
  return obj.dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& p : corpus.profiles) out << profile_to_json_line(p) << '\n';
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_corpus(out, corpus);
}

Corpus eligible_subset(const Corpus& corpus, std::size_t min_comments) {
  Corpus out;
  out.source = corpus.source;
  for (const auto& p : corpus.profiles) {
    if (p.comments.size() >= min_comments) out.profiles.push_back(p);
  }
  return out;
}

CorpusSummary corpus_summary(const Corpus& corpus) {
  CorpusSummary s;
  struct Acc {
    std::size_t ages = 0;
    double age_sum = 0, friends = 0, subscribers = 0;
  };
  std::map<Gender, Acc> acc;
  for (Gender g : {Gender::Male, Gender::Female, Gender::Other}) {
    s.by_gender[g] = {};
    acc[g] = {};
  }
  for (const auto& p : corpus.profiles) {
    ++s.total;
    auto& g = s.by_gender[p.reported_gender];
    auto& a = acc[p.reported_gender];
    ++g.count;
    if (p.verified) {
      ++s.verified;
      ++g.verified;
    }
    if (p.reported_age) {
      ++a.ages;
      a.age_sum += *p.reported_age;
    }
    a.friends += static_cast<double>(p.friend_count);
    a.subscribers += static_cast<double>(p.subscriber_count);
  }
  if (s.total > 0) s.verified_fraction = static_cast<double>(s.verified) / static_cast<double>(s.total);
  for (auto& [gender, g] : s.by_gender) {
    const auto& a = acc[gender];
    if (a.ages > 0) g.mean_age = a.age_sum / static_cast<double>(a.ages);
    if (g.count > 0) {
      g.mean_friends = a.friends / static_cast<double>(g.count);
      g.mean_subscribers = a.subscribers / static_cast<double>(g.count);
    }
  }
  return s;
}

}  // namespace catfish
