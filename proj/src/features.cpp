#include "catfish/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "catfish/error.hpp"

namespace catfish {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double FeatureVector::value(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::uint32_t i) { return e.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

std::vector<double> FeatureVector::dense() const {
  std::vector<double> out(dimension, 0.0);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

FeatureMatrix FeatureMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m;
  m.dimension = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m.dimension) throw DimensionError("ragged dense rows");
    FeatureVector v;
    v.dimension = m.dimension;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] != 0.0) v.entries.emplace_back(static_cast<std::uint32_t>(i), r[i]);
    }
    m.rows.push_back(std::move(v));
  }
  return m;
}

std::string_view to_string(FeatureGroups g) {
  switch (g) {
    case FeatureGroups::Content: return "content";
    case FeatureGroups::Network: return "network";
    case FeatureGroups::All: return "all";
  }
  return "all";
}

FeatureGroups parse_feature_groups(std::string_view s) {
  if (s == "content") return FeatureGroups::Content;
  if (s == "network") return FeatureGroups::Network;
  if (s == "all") return FeatureGroups::All;
  throw ConfigError("unknown feature group '" + std::string(s) + "'");
}

std::array<double, 2> activity_features(const Profile& p) {
  return {std::log1p(static_cast<double>(p.videos_watched)),
          std::log1p(static_cast<double>(p.videos_posted))};
}

GraphFeatures graph_features(const Profile& p) {
  GraphFeatures g;
  g.log_counts = {std::log1p(static_cast<double>(p.friend_count)),
                  std::log1p(static_cast<double>(p.subscriber_count)),
                  std::log1p(static_cast<double>(p.subscription_count))};
  const std::array<const std::optional<double>*, 4> pcts = {
      &p.pct_male_friends, &p.pct_female_friends, &p.pct_male_subscribers,
      &p.pct_female_subscribers};
  for (std::size_t i = 0; i < 4; ++i) {
    if (*pcts[i]) {
      g.percentages[i] = **pcts[i];
      g.present[i] = 1.0;
    }
  }
  return g;
}

namespace {

constexpr std::size_t kCountDims = 3;
constexpr std::size_t kStatusDims = 2;
constexpr std::size_t kInterestDims = 3;
constexpr std::size_t kNetworkNumeric = 2 + 3 + 4;
constexpr std::size_t kPresenceDims = 4;
constexpr int kFormatVersion = 1;

}  // namespace

void FeatureSpec::compute_layout() {
  content_numeric_ = has_content(groups_) ? lexicon_.category_count() + kCountDims + 1 : 0;
  network_numeric_ = has_network(groups_) ? kNetworkNumeric : 0;
  dimension_ = 0;
  if (has_content(groups_)) dimension_ += vocab_.size() + content_numeric_;
  if (has_network(groups_)) {
    dimension_ += (countries_.size() + 1) + kStatusDims + kInterestDims + network_numeric_ +
                  kPresenceDims;
  }
}

std::vector<double> FeatureSpec::raw_numeric(const Profile& p,
                                             const std::vector<std::string>& tokens) const {
  std::vector<double> out;
  out.reserve(content_numeric_ + network_numeric_);
  if (has_content(groups_)) {
    // Mirrors content_features() without re-tokenizing.
    for (const auto& cat : lexicon_.categories) {
      std::size_t hits = 0;
      for (const auto& t : tokens) hits += cat.matches(t) ? 1 : 0;
      out.push_back(tokens.empty() ? 0.0
                                   : static_cast<double>(hits) / static_cast<double>(tokens.size()));
    }
    const CountFeatures c = count_features(p);
    out.push_back(c.comment_count);
    out.push_back(c.pct_unique_comments);
    out.push_back(c.vocabulary_variety);
    const auto f = formality_counts(tokens, lexicon_);
    out.push_back(f.total == 0 ? 0.0 : static_cast<double>(f.informal) / static_cast<double>(f.total));
  }
  if (has_network(groups_)) {
    const auto a = activity_features(p);
    out.insert(out.end(), a.begin(), a.end());
    const auto g = graph_features(p);
    out.insert(out.end(), g.log_counts.begin(), g.log_counts.end());
    out.insert(out.end(), g.percentages.begin(), g.percentages.end());
  }
  return out;
}

FeatureSpec FeatureSpec::fit(std::span<const Profile* const> training, FeatureGroups groups,
                             const LexiconSet& lexicon, std::size_t min_df) {
  if (training.empty()) throw ConfigError("cannot fit a feature spec on zero profiles");
  FeatureSpec spec;
  spec.groups_ = groups;
  if (has_content(groups)) {
    if (!lexicon.has_all_dictionaries()) {
      throw ConfigError("content features need the en, fr and de dictionaries");
    }
    spec.lexicon_ = lexicon;
    spec.vocab_ = build_vocabulary(training, min_df, "training split");
  }
  if (has_network(groups)) {
    std::set<std::string> countries;
    for (const Profile* p : training) countries.insert(p->country);
    spec.countries_.assign(countries.begin(), countries.end());
  }
  spec.compute_layout();

  const std::size_t numeric = spec.content_numeric_ + spec.network_numeric_;
  std::vector<double> sum(numeric, 0.0);
  std::vector<std::vector<double>> raw;
  raw.reserve(training.size());
  for (const Profile* p : training) {
    raw.push_back(spec.raw_numeric(*p, has_content(groups) ? profile_tokens(*p)
                                                            : std::vector<std::string>{}));
    for (std::size_t k = 0; k < numeric; ++k) sum[k] += raw.back()[k];
  }
  const double n = static_cast<double>(training.size());
  spec.mean_.assign(numeric, 0.0);
  spec.scale_.assign(numeric, 1.0);
  for (std::size_t k = 0; k < numeric; ++k) spec.mean_[k] = sum[k] / n;
  for (std::size_t k = 0; k < numeric; ++k) {
    double ss = 0.0;
    for (const auto& r : raw) ss += (r[k] - spec.mean_[k]) * (r[k] - spec.mean_[k]);
    const double sd = std::sqrt(ss / n);
    spec.scale_[k] = sd > 1e-12 ? sd : 1.0;
  }
  spec.fitted_ = true;
  return spec;
}

std::vector<double> FeatureSpec::profile_features(const Profile& p) const {
  std::vector<double> out(countries_.size() + 1 + kStatusDims + kInterestDims, 0.0);
  auto it = std::lower_bound(countries_.begin(), countries_.end(), p.country);
  const std::size_t country =
      (it != countries_.end() && *it == p.country) ? static_cast<std::size_t>(it - countries_.begin())
                                                   : countries_.size();
  out[country] = 1.0;
  const std::size_t status = countries_.size() + 1;
  if (p.relationship_status == RelationshipStatus::Single) out[status] = 1.0;
  if (p.relationship_status == RelationshipStatus::InRelationship) out[status + 1] = 1.0;
  const std::size_t interest = status + kStatusDims;
  if (p.interested_in == Interest::Men) out[interest] = 1.0;
  if (p.interested_in == Interest::Women) out[interest + 1] = 1.0;
  if (p.interested_in == Interest::Both) out[interest + 2] = 1.0;
  return out;
}

FeatureVector FeatureSpec::assemble(const Profile& p) const {
  if (!fitted_) throw ConfigError("feature spec is not fitted");
  FeatureVector v;
  v.dimension = dimension_;
  const auto tokens = has_content(groups_) ? profile_tokens(p) : std::vector<std::string>{};
  const auto numeric = raw_numeric(p, tokens);
  std::uint32_t col = 0;
  auto push = [&](double x) {
    if (x != 0.0) v.entries.emplace_back(col, x);
    ++col;
  };
  std::size_t k = 0;
  if (has_content(groups_)) {
    std::vector<std::uint32_t> bow;
    for (const auto& t : tokens) {
      if (auto idx = vocab_.find(t)) bow.push_back(static_cast<std::uint32_t>(*idx));
    }
    std::sort(bow.begin(), bow.end());
    bow.erase(std::unique(bow.begin(), bow.end()), bow.end());
    for (auto idx : bow) v.entries.emplace_back(idx, 1.0);
    col = static_cast<std::uint32_t>(vocab_.size());
    for (std::size_t j = 0; j < content_numeric_; ++j, ++k) push((numeric[k] - mean_[k]) / scale_[k]);
  }
  if (has_network(groups_)) {
    for (double x : profile_features(p)) push(x);
    for (std::size_t j = 0; j < network_numeric_; ++j, ++k) push((numeric[k] - mean_[k]) / scale_[k]);
    for (double x : graph_features(p).present) push(x);
  }
  return v;
}

FeatureMatrix FeatureSpec::assemble(std::span<const Profile* const> profiles) const {
  FeatureMatrix m;
  m.dimension = dimension_;
  m.rows.reserve(profiles.size());
  for (const Profile* p : profiles) m.rows.push_back(assemble(*p));
  return m;
}

std::vector<std::string> FeatureSpec::column_names() const {
  std::vector<std::string> names;
  names.reserve(dimension_);
  if (has_content(groups_)) {
    for (const auto& t : vocab_.terms()) names.push_back("bow:" + t);
    for (const auto& c : lexicon_.categories) names.push_back("lex:" + c.name);
    names.insert(names.end(), {"comment_count", "pct_unique_comments", "vocabulary_variety",
                               "informality"});
  }
  if (has_network(groups_)) {
    for (const auto& c : countries_) names.push_back("country:" + c);
    names.insert(names.end(), {"country:other", "status:single", "status:relationship",
                               "interest:men", "interest:women", "interest:both",
                               "log_videos_watched", "log_videos_posted", "log_friends",
                               "log_subscribers", "log_subscriptions", "pct_male_friends",
                               "pct_female_friends", "pct_male_subscribers",
                               "pct_female_subscribers", "has_pct_male_friends",
                               "has_pct_female_friends", "has_pct_male_subscribers",
                               "has_pct_female_subscribers"});
  }
  return names;
}

json FeatureSpec::to_json() const {
  if (!fitted_) throw ConfigError("feature spec is not fitted");
  json j;
  j["format_version"] = kFormatVersion;
  j["groups"] = std::string(to_string(groups_));
  j["dimension"] = dimension_;
  j["min_df"] = vocab_.min_document_frequency();
  j["vocabulary"] = vocab_.terms();
  j["countries"] = countries_;
  j["mean"] = mean_;
  j["scale"] = scale_;
  j["lexicon"] = has_content(groups_) ? json(lexicon_to_string(lexicon_)) : json(nullptr);
  return j;
}

FeatureSpec FeatureSpec::from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError("unsupported feature spec format_version");
    }
    FeatureSpec spec;
    spec.groups_ = parse_feature_groups(j.at("groups").get<std::string>());
    spec.vocab_ = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>(),
                             j.at("min_df").get<std::size_t>(), "model file");
    spec.countries_ = j.at("countries").get<std::vector<std::string>>();
    if (!std::is_sorted(spec.countries_.begin(), spec.countries_.end())) {
      throw ValidationError("feature spec countries must be sorted");
    }
    spec.mean_ = j.at("mean").get<std::vector<double>>();
    spec.scale_ = j.at("scale").get<std::vector<double>>();
    if (!j.at("lexicon").is_null()) {
      std::istringstream in(j.at("lexicon").get<std::string>());
      spec.lexicon_ = parse_lexicon(in);
    }
    spec.compute_layout();
    if (spec.dimension_ != j.at("dimension").get<std::size_t>() ||
        spec.mean_.size() != spec.content_numeric_ + spec.network_numeric_ ||
        spec.scale_.size() != spec.mean_.size()) {
      throw ValidationError("feature spec layout does not match its stored dimension");
    }
    spec.fitted_ = true;
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed feature spec: ") + e.what());
  }
}

std::uint64_t FeatureSpec::fingerprint() const { return fnv1a64(to_json().dump()); }

}  // namespace catfish
