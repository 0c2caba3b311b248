#include "catfish/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "catfish/error.hpp"

namespace catfish {

using nlohmann::json;

namespace {

constexpr int kModelFormatVersion = 1;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

json parse_document(const std::string& text, const char* kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("kind")) {
    throw ValidationError("model file lacks format_version/kind");
  }
  if (doc["format_version"] != kModelFormatVersion) {
    throw ValidationError("unsupported model format_version");
  }
  if (doc["kind"] != kind) {
    throw ValidationError("model file holds a " + doc["kind"].dump() + ", expected " + kind);
  }
  return doc;
}

}  // namespace

std::string_view to_string(Task t) { return t == Task::Gender ? "gender" : "age"; }

Task parse_task(std::string_view s) {
  if (s == "gender") return Task::Gender;
  if (s == "age") return Task::Age;
  throw ConfigError("unknown task '" + std::string(s) + "'");
}

int gender_label(Gender g) {
  if (g == Gender::Male) return 1;
  if (g == Gender::Female) return -1;
  return 0;
}

std::vector<const Profile*> training_population(const Corpus& corpus, Task task,
                                                std::size_t min_comments) {
  std::vector<const Profile*> out;
  for (const auto& p : corpus.profiles) {
    if (!p.verified || p.comments.size() < min_comments) continue;
    if (task == Task::Gender && gender_label(p.reported_gender) == 0) continue;
    if (task == Task::Age && !p.reported_age) continue;
    out.push_back(&p);
  }
  return out;
}

double GenderPredictor::score(const Profile& p) const {
  return decision_value(model, spec.assemble(p));
}

Gender GenderPredictor::predict(const Profile& p) const {
  return predict_gender_from_score(model, score(p));
}

double AgePredictor::predict(const Profile& p) const { return predict_age(model, spec.assemble(p)); }

GenderPredictor fit_gender(std::span<const Profile* const> training, const PipelineOptions& options) {
  GenderPredictor out;
  out.spec = FeatureSpec::fit(training, options.groups, options.lexicon, options.min_df);
  const FeatureMatrix x = out.spec.assemble(training);
  std::vector<int> y;
  y.reserve(training.size());
  for (const Profile* p : training) {
    const int label = gender_label(p->reported_gender);
    if (label == 0) throw ConfigError("gender training profile '" + p->id + "' has no male/female label");
    y.push_back(label);
  }
  out.model = train_classifier(x, y, options.train, Gender::Male, Gender::Female);
  out.model.spec_fingerprint = out.spec.fingerprint();
  return out;
}

AgePredictor fit_age(std::span<const Profile* const> training, const PipelineOptions& options) {
  AgePredictor out;
  out.spec = FeatureSpec::fit(training, options.groups, options.lexicon, options.min_df);
  const FeatureMatrix x = out.spec.assemble(training);
  std::vector<double> y;
  y.reserve(training.size());
  for (const Profile* p : training) {
    if (!p->reported_age) throw ConfigError("age training profile '" + p->id + "' has no age");
    y.push_back(*p->reported_age);
  }
  out.model = train_regressor(x, y, options.train);
  out.model.spec_fingerprint = out.spec.fingerprint();
  return out;
}

std::string serialize(const GenderPredictor& p) {
  json doc{{"format_version", kModelFormatVersion},
           {"kind", "gender_classifier"},
           {"model", to_json(p.model)},
           {"feature_spec", p.spec.to_json()}};
  return doc.dump(1) + "\n";
}

std::string serialize(const AgePredictor& p) {
  json doc{{"format_version", kModelFormatVersion},
           {"kind", "age_regressor"},
           {"model", to_json(p.model)},
           {"feature_spec", p.spec.to_json()}};
  return doc.dump(1) + "\n";
}

void check_fingerprint(const FeatureSpec& spec, std::uint64_t model_fingerprint) {
  if (spec.fingerprint() != model_fingerprint) {
    throw ConfigError("model was trained under a different feature spec (fingerprint mismatch)");
  }
}

GenderPredictor parse_gender_predictor(const std::string& text) {
  const json doc = parse_document(text, "gender_classifier");
  GenderPredictor p;
  p.spec = FeatureSpec::from_json(doc.at("feature_spec"));
  p.model = classifier_from_json(doc.at("model"));
  check_fingerprint(p.spec, p.model.spec_fingerprint);
  if (p.model.weights.size() != p.spec.dimension()) throw ValidationError("model/spec dimension mismatch");
  return p;
}

AgePredictor parse_age_predictor(const std::string& text) {
  const json doc = parse_document(text, "age_regressor");
  AgePredictor p;
  p.spec = FeatureSpec::from_json(doc.at("feature_spec"));
  p.model = regressor_from_json(doc.at("model"));
  check_fingerprint(p.spec, p.model.spec_fingerprint);
  if (p.model.weights.size() != p.spec.dimension()) throw ValidationError("model/spec dimension mismatch");
  return p;
}

void save_model(const std::filesystem::path& path, const GenderPredictor& p) {
  write_file(path, serialize(p));
}

void save_model(const std::filesystem::path& path, const AgePredictor& p) {
  write_file(path, serialize(p));
}

GenderPredictor load_gender_predictor(const std::filesystem::path& path) {
  return parse_gender_predictor(read_file(path));
}

AgePredictor load_age_predictor(const std::filesystem::path& path) {
  return parse_age_predictor(read_file(path));
}

}  // namespace catfish
