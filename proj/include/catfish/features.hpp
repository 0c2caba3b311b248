#pragma once

// Network feature group (profile, activity, graph) and assembly of full
// feature vectors under a spec fitted on a training split.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/textfeat.hpp"
#include "json.hpp"

namespace catfish {

struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;  // ascending index, nonzero values
  std::size_t dimension = 0;

  double value(std::uint32_t index) const;
  std::vector<double> dense() const;
  bool operator==(const FeatureVector&) const = default;
};

struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  std::size_t dimension = 0;

  std::size_t size() const { return rows.size(); }
  // Builds a matrix from dense rows; zeros are dropped.
  static FeatureMatrix from_dense(const std::vector<std::vector<double>>& rows);
};

enum class FeatureGroups { Content, Network, All };
std::string_view to_string(FeatureGroups g);
FeatureGroups parse_feature_groups(std::string_view s);  // throws ConfigError

inline bool has_content(FeatureGroups g) { return g != FeatureGroups::Network; }
inline bool has_network(FeatureGroups g) { return g != FeatureGroups::Content; }

// log1p of videos watched and posted.
std::array<double, 2> activity_features(const Profile& p);

struct GraphFeatures {
  std::array<double, 3> log_counts{};  // friends, subscribers, subscriptions
  std::array<double, 4> percentages{};  // male/female friends, male/female subscribers
  std::array<double, 4> present{};      // 1 when the matching percentage is known
};
GraphFeatures graph_features(const Profile& p);

class FeatureSpec {
 public:
  FeatureSpec() = default;  // unfitted

  // Fits vocabulary, categorical encodings and standardization statistics on
  // the training profiles only.
  static FeatureSpec fit(std::span<const Profile* const> training, FeatureGroups groups,
                         const LexiconSet& lexicon, std::size_t min_df = kDefaultMinDf);

  bool fitted() const { return fitted_; }
  FeatureGroups groups() const { return groups_; }
  std::size_t dimension() const { return dimension_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const LexiconSet& lexicon() const { return lexicon_; }
  const std::vector<std::string>& countries() const { return countries_; }
  const std::vector<double>& means() const { return mean_; }
  const std::vector<double>& scales() const { return scale_; }
  std::vector<std::string> column_names() const;

  // One-hot country (training countries + "other"), status and interest.
  std::vector<double> profile_features(const Profile& p) const;

  // Throws ConfigError on an unfitted spec.
  FeatureVector assemble(const Profile& p) const;
  FeatureMatrix assemble(std::span<const Profile* const> profiles) const;

  nlohmann::json to_json() const;
  static FeatureSpec from_json(const nlohmann::json& j);
  std::uint64_t fingerprint() const;

 private:
  // Raw dense numeric block (content numeric dims, then network numeric dims),
  // before standardization. Binary one-hots and presence bits are not included.
  std::vector<double> raw_numeric(const Profile& p, const std::vector<std::string>& tokens) const;
  void compute_layout();

  bool fitted_ = false;
  FeatureGroups groups_ = FeatureGroups::All;
  Vocabulary vocab_;
  LexiconSet lexicon_;
  std::vector<std::string> countries_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::size_t dimension_ = 0;
  // Layout offsets.
  std::size_t content_numeric_ = 0;  // lexicon + 3 counts + informality
  std::size_t network_numeric_ = 0;  // 2 activity + 3 graph logs + 4 percentages
};

inline constexpr const char* kCompositionCaveat =
    "friend/subscriber gender composition partly reflects how others react to the reported gender";

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace catfish
