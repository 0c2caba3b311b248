#pragma once

// Seeded synthetic corpora with planted catfish ground truth.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/detector.hpp"
#include "catfish/textfeat.hpp"

namespace catfish {

struct SynthConfig {
  std::size_t n_profiles = 2000;
  double verified_fraction = 0.055;
  double catfish_fraction = 0.2;
  double male_share = 820.0 / 1119.0;
  // Chance that each age-threshold token below the latent age is emitted.
  double age_signal = 0.95;
  // Chance that a comment carries a gender-marked token.
  double gender_signal = 0.7;
  // Standard deviation, in years, between true age and the age the text reflects.
  double age_noise = 1.5;
  double comment_median = 22;
  double comment_sigma = 0.7;  // log scale
  double duplicate_rate = 0.15;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

enum class LieKind { Gender, Age, Both };
std::string_view to_string(LieKind k);
std::optional<LieKind> parse_lie_kind(std::string_view s);

struct TruthRecord {
  std::string id;
  Gender true_gender = Gender::Male;
  int true_age = kMinAge;
  bool catfish = false;
  std::optional<LieKind> kind;

  bool operator==(const TruthRecord&) const = default;
};

struct GroundTruth {
  std::vector<TruthRecord> records;  // corpus order

  const TruthRecord* find(const std::string& id) const;
  std::size_t planted() const;
  bool operator==(const GroundTruth&) const = default;
};

struct SynthOutput {
  Corpus corpus;
  GroundTruth truth;
};

SynthOutput generate(const SynthConfig& config);

// Categories of the demo lexicon plus dictionaries covering every formal
// token the generator emits.
LexiconSet synthetic_lexicon();

void write_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_truth(std::istream& in);
void save_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth load_truth(const std::filesystem::path& path);

struct DetectionScore {
  std::size_t planted = 0;
  std::size_t flagged = 0;
  std::size_t hits = 0;
  double precision = 0;  // 0 without flags
  double recall = 0;     // 0 without planted
};

struct OracleReport {
  std::size_t covered = 0;             // verdicts scored
  std::size_t planted_uncovered = 0;   // planted profiles without an eligible verdict
  DetectionScore overall;              // any flag vs any lie
  DetectionScore gender;               // gender flag vs gender component (gender or both)
  DetectionScore age;                  // age flag vs age component (age or both)
  std::map<LieKind, DetectionScore> by_kind;  // any flag vs lies of exactly this kind
};

// Scores eligible verdicts against the planted truth. Throws ValidationError
// when a verdict names an id missing from the corpus or the truth.
OracleReport oracle_eval(const Corpus& corpus, const GroundTruth& truth,
                         const std::vector<CatfishVerdict>& verdicts);

void write_oracle_csv(std::ostream& out, const OracleReport& r);

}  // namespace catfish
