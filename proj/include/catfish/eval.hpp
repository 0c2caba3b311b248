#pragma once

// Cross-validation and evaluation metrics.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/pipeline.hpp"

namespace catfish {

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // item index -> fold id
  bool stratified = false;
  std::vector<std::string> warnings;

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

// Throws ConfigError when k < 2 or k > n.
FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed);
// Per-class shuffles dealt round robin. Falls back to kfold() with a warning
// when some class has fewer than k members.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed);

struct ClassMetrics {
  Gender label = Gender::Other;
  std::size_t support = 0;    // true members
  std::size_t predicted = 0;  // predicted members
  std::size_t true_positives = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct ClassificationMetrics {
  std::vector<ClassMetrics> classes;  // female, male, other order; only classes seen
  double macro_f1 = 0;
  double accuracy = 0;
  std::size_t n = 0;

  const ClassMetrics* find(Gender g) const;
};

// Zero denominators give 0. Throws DimensionError on length mismatch or empty input.
ClassificationMetrics classification_metrics(std::span<const Gender> truth,
                                             std::span<const Gender> predicted);

double f1_score(double precision, double recall);
// sum_c recall_c * n_c / sum_c n_c
double accuracy_from_recalls(std::span<const double> recalls, std::span<const double> sizes);

double mae(std::span<const double> truth, std::span<const double> predicted);
// Sample Pearson correlation. Throws UndefinedMetricError when either side
// has zero variance, DimensionError on length mismatch or n < 2.
double pearson(std::span<const double> truth, std::span<const double> predicted);

struct FoldResult {
  std::string scope;  // fold number, "pooled" or "mean"
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::optional<ClassificationMetrics> classification;
  std::optional<double> mae;
  std::optional<double> pearson;
};

struct EvalReport {
  Task task = Task::Gender;
  FeatureGroups groups = FeatureGroups::All;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t population = 0;
  bool stratified = false;
  std::vector<std::string> warnings;
  std::vector<FoldResult> folds;
  FoldResult pooled;  // metrics over all held-out predictions together
  FoldResult mean;    // average of the per-fold values that are defined
};

// Verified, eligible, labeled profiles; each fold fits the feature spec and
// the model on its training split only. Throws ConfigError when fewer than k
// profiles qualify.
EvalReport cross_validate(const Corpus& corpus, Task task, const PipelineOptions& options,
                          std::size_t k = 10, std::uint64_t seed = 0);

void write_report_csv(std::ostream& out, const EvalReport& report);
void print_report_table(std::ostream& out, const EvalReport& report);

}  // namespace catfish
