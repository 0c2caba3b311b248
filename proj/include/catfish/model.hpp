#pragma once

// Linear demographic predictors: a hinge-loss classifier for gender and an
// epsilon-insensitive regressor for age, both with an unregularized bias.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/features.hpp"
#include "json.hpp"

namespace catfish {

struct TrainConfig {
  double C = 1.0;
  double epsilon = 1.0;  // regression tube half-width, years
  double tolerance = 1e-6;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
  bool balanced = false;  // classifier only: reweight C by inverse class frequency

  void validate() const;  // throws ConfigError
  bool operator==(const TrainConfig&) const = default;
};

struct TrainingInfo {
  bool converged = false;
  std::size_t epochs = 0;
  std::size_t iterations = 0;
  double max_violation = 0.0;
  std::vector<double> objective_history;  // not serialized
};

struct ClassifierModel {
  std::vector<double> weights;
  double bias = 0.0;
  Gender positive_class = Gender::Male;  // label +1
  Gender negative_class = Gender::Female;
  Gender majority_class = Gender::Male;  // decides exact-zero scores
  TrainConfig config;
  std::uint64_t spec_fingerprint = 0;
  TrainingInfo training;
};

struct RegressorModel {
  std::vector<double> weights;
  double bias = 0.0;
  TrainConfig config;
  std::uint64_t spec_fingerprint = 0;
  TrainingInfo training;
};

// y holds +1 (positive_class) or -1. Throws ConfigError for a single class
// or zero-dimensional features.
ClassifierModel train_classifier(const FeatureMatrix& x, std::span<const int> y,
                                 const TrainConfig& config, Gender positive = Gender::Male,
                                 Gender negative = Gender::Female);

// Ages in [18, 60]. Throws ConfigError for fewer than two rows.
RegressorModel train_regressor(const FeatureMatrix& x, std::span<const double> y,
                               const TrainConfig& config);

// w.x + b; throws DimensionError when dimensions differ.
double decision_value(const ClassifierModel& m, const FeatureVector& x);
double decision_value(const RegressorModel& m, const FeatureVector& x);

// Sign rule; an exact zero goes to the majority training class.
Gender predict_gender(const ClassifierModel& m, const FeatureVector& x);
Gender predict_gender_from_score(const ClassifierModel& m, double score);

// Raw score clamped to [18, 60], unrounded.
double predict_age(const RegressorModel& m, const FeatureVector& x);
double clamp_age(double raw);

// Training objectives evaluated at the model's (w, b).
double objective(const ClassifierModel& m, const FeatureMatrix& x, std::span<const int> y);
double objective(const RegressorModel& m, const FeatureMatrix& x, std::span<const double> y);

// Same objectives at an arbitrary (w, b).
double classifier_objective(std::span<const double> w, double b, const FeatureMatrix& x,
                            std::span<const int> y, const TrainConfig& config);
double regressor_objective(std::span<const double> w, double b, const FeatureMatrix& x,
                           std::span<const double> y, const TrainConfig& config);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};
// Gradient of the regressor objective; exact wherever no residual sits on a
// tube edge (a subgradient there).
Gradient regressor_gradient(std::span<const double> w, double b, const FeatureMatrix& x,
                            std::span<const double> y, const TrainConfig& config);

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClassifierModel& m);
nlohmann::json to_json(const RegressorModel& m);
ClassifierModel classifier_from_json(const nlohmann::json& j);
RegressorModel regressor_from_json(const nlohmann::json& j);

}  // namespace catfish
