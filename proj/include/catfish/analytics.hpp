#pragma once

// Population characterization and catfish-benefit reports, emitted as CSV.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/detector.hpp"

namespace catfish {

enum class BinValue { Count, Density, Mean };
std::string_view to_string(BinValue v);

struct BinnedSeries {
  std::string name;       // e.g. "age_histogram"
  std::string dimension;  // binned quantity
  std::string group;      // grouping key, e.g. "female" or "male/both/flagged"
  BinValue kind = BinValue::Count;
  std::vector<double> edges;         // bins are [edges[i], edges[i+1])
  std::vector<std::size_t> counts;   // contributing items per bin
  std::vector<double> values;        // count, density or mean per bin

  std::size_t bins() const { return counts.size(); }
  std::size_t total() const;
};

// Contiguous bins of `width` covering [lo, hi).
std::vector<double> make_edges(double lo, double hi, double width);
// Values outside the edges are dropped.
BinnedSeries histogram(std::string name, std::string dimension, std::string group,
                       const std::vector<double>& values, std::vector<double> edges,
                       bool density = false);

struct GroupMeans {
  std::size_t count = 0;
  std::optional<double> mean_age;
  std::optional<double> mean_friends;
  std::optional<double> mean_subscribers;
  std::optional<double> mean_subscriptions;
  std::optional<double> mean_views;
};

struct DemographicReport {
  std::map<Gender, BinnedSeries> age_histogram;  // 1-year bins, reported age
  std::map<Gender, std::map<Interest, std::size_t>> interest_counts;
  std::map<Gender, GroupMeans> means;
};
DemographicReport demographic_report(const Corpus& corpus);

struct PopularityGroup {
  Gender predicted_gender = Gender::Other;
  bool gender_flag = false;
  std::size_t count = 0;
  std::optional<double> mean_views;
  std::optional<double> mean_friends;
};

struct PopularityPoint {
  std::string id;
  Gender predicted_gender = Gender::Other;
  bool gender_flag = false;
  std::uint64_t friends = 0;
  std::uint64_t views = 0;
};

struct PopularityReport {
  std::vector<PopularityGroup> groups;  // female/male x honest/flagged, always four
  std::vector<PopularityPoint> points;
  const PopularityGroup* find(Gender predicted, bool flagged) const;
};
// Throws ConfigError when verdicts are empty or name ids absent from the corpus.
PopularityReport popularity_report(const Corpus& corpus, const std::vector<CatfishVerdict>& verdicts);

struct InterestShares {
  std::size_t specified = 0;
  std::map<Interest, std::size_t> counts;  // men, women, both
  std::map<Interest, double> shares;
};

struct InterestGainReport {
  // Mean friends per 5-year reported-age band, keyed "predicted/interest/honest|flagged".
  std::vector<BinnedSeries> friends_by_age;
  std::map<Gender, InterestShares> shares;  // by reported gender, whole corpus
};
InterestGainReport interest_gain_report(const Corpus& corpus,
                                        const std::vector<CatfishVerdict>& verdicts);

struct AgeDiffReport {
  std::map<Gender, BinnedSeries> delta_density;         // signed predicted - reported, 1-year bins
  std::map<Gender, BinnedSeries> flagged_reported_age;  // age-flagged accounts, 1-year bins
  std::map<Gender, std::optional<double>> mean_flagged_reported_age;
};
AgeDiffReport age_diff_report(const std::vector<CatfishVerdict>& verdicts);

void write_series_csv(std::ostream& out, const std::vector<const BinnedSeries*>& series);
void write_demographic_csv(std::ostream& series_out, std::ostream& table_out,
                           const DemographicReport& r);
void write_popularity_csv(std::ostream& groups_out, std::ostream& points_out,
                          const PopularityReport& r);
void write_interest_gain_csv(std::ostream& series_out, std::ostream& shares_out,
                             const InterestGainReport& r);
void write_age_diff_csv(std::ostream& out, const AgeDiffReport& r);

}  // namespace catfish
