#pragma once

// Flags unverified profiles whose reported gender or age disagrees with the
// trained predictors.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/pipeline.hpp"

namespace catfish {

struct DetectorConfig {
  double age_threshold = 5.581;  // years
  std::size_t min_comments = kDefaultMinComments;

  void validate() const;  // throws ConfigError
};

struct CatfishVerdict {
  std::string id;
  bool eligible = false;
  Gender reported_gender = Gender::Other;
  std::optional<Gender> predicted_gender;
  bool gender_flag = false;
  std::optional<int> reported_age;
  std::optional<double> predicted_age;  // unrounded
  std::optional<double> age_delta;      // predicted - reported
  bool age_flag = false;

  bool flagged() const { return gender_flag || age_flag; }
  bool operator==(const CatfishVerdict&) const = default;
};

// Throws ConfigError when a predictor's model was not trained under its spec.
CatfishVerdict flag_profile(const Profile& p, const GenderPredictor& gender,
                            const AgePredictor& age, const DetectorConfig& config);
// Both models share one spec.
CatfishVerdict flag_profile(const Profile& p, const ClassifierModel& gender,
                            const RegressorModel& age, const FeatureSpec& spec,
                            const DetectorConfig& config);

struct GenderRates {
  std::size_t scanned = 0;
  std::size_t flagged = 0;
  std::size_t gender_flagged = 0;
  std::size_t age_flagged = 0;
  double rate = 0;                              // flagged / scanned
  std::optional<double> mean_flagged_reported_age;
};

struct DeltaStats {
  std::size_t count = 0;
  double mean = 0;
  double sd = 0;  // population
  double mean_abs = 0;
  double min = 0;
  double max = 0;
};

struct DetectionSummary {
  std::size_t scanned = 0;
  std::size_t flagged = 0;
  std::map<Gender, GenderRates> by_reported_gender;
  DeltaStats age_delta;
};

struct ScanResult {
  std::vector<CatfishVerdict> verdicts;  // eligible unverified profiles, corpus order
  DetectionSummary summary;
  std::vector<std::string> warnings;
};

ScanResult scan_corpus(const Corpus& corpus, const GenderPredictor& gender,
                       const AgePredictor& age, const DetectorConfig& config);

DetectionSummary summarize(const std::vector<CatfishVerdict>& verdicts);

void write_verdicts_csv(std::ostream& out, const std::vector<CatfishVerdict>& verdicts);
// Throws ValidationError on a malformed file.
std::vector<CatfishVerdict> read_verdicts_csv(std::istream& in);
std::vector<CatfishVerdict> load_verdicts(const std::filesystem::path& path);

void write_summary_csv(std::ostream& out, const DetectionSummary& s);

}  // namespace catfish
