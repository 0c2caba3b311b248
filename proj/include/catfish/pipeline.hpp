#pragma once

// Predictors bundle a fitted feature spec with a trained model, and are what
// model files hold.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/features.hpp"
#include "catfish/model.hpp"
#include "catfish/textfeat.hpp"

namespace catfish {

enum class Task { Gender, Age };
std::string_view to_string(Task t);
Task parse_task(std::string_view s);  // throws ConfigError

inline constexpr std::size_t kDefaultMinComments = 10;

struct PipelineOptions {
  FeatureGroups groups = FeatureGroups::All;
  std::size_t min_comments = kDefaultMinComments;
  std::size_t min_df = kDefaultMinDf;
  TrainConfig train;
  LexiconSet lexicon;
};

// +1 for male, -1 for female; other genders carry no label.
int gender_label(Gender g);

// Verified profiles with enough comments and a label for the task.
std::vector<const Profile*> training_population(const Corpus& corpus, Task task,
                                                std::size_t min_comments);

struct GenderPredictor {
  FeatureSpec spec;
  ClassifierModel model;

  double score(const Profile& p) const;
  Gender predict(const Profile& p) const;
};

struct AgePredictor {
  FeatureSpec spec;
  RegressorModel model;

  double predict(const Profile& p) const;  // clamped to [18, 60]
};

GenderPredictor fit_gender(std::span<const Profile* const> training, const PipelineOptions& options);
AgePredictor fit_age(std::span<const Profile* const> training, const PipelineOptions& options);

// Model documents: {format_version, kind, model, feature_spec}.
std::string serialize(const GenderPredictor& p);
std::string serialize(const AgePredictor& p);
GenderPredictor parse_gender_predictor(const std::string& text);
AgePredictor parse_age_predictor(const std::string& text);

void save_model(const std::filesystem::path& path, const GenderPredictor& p);
void save_model(const std::filesystem::path& path, const AgePredictor& p);
GenderPredictor load_gender_predictor(const std::filesystem::path& path);
AgePredictor load_age_predictor(const std::filesystem::path& path);

// Throws ConfigError unless the model was trained under this spec.
void check_fingerprint(const FeatureSpec& spec, std::uint64_t model_fingerprint);

}  // namespace catfish
