#include "catfish/model.hpp"

#include <algorithm>
#include <cmath>

#include "catfish/error.hpp"
#include "catfish/solver.hpp"

namespace catfish {

using nlohmann::json;

void TrainConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("C must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be >= 0");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
}

namespace {

void check_rows(const FeatureMatrix& x) {
  if (x.dimension == 0) throw ConfigError("features have zero dimensions");
  for (const auto& r : x.rows) {
    if (r.dimension != x.dimension) throw DimensionError("row dimension differs from matrix");
    for (const auto& [k, v] : r.entries) {
      if (!std::isfinite(v)) throw ConfigError("non-finite feature value");
      if (k >= x.dimension) throw DimensionError("feature index out of range");
    }
  }
}

std::vector<solver::Ramp> hinge_ramps(std::span<const int> y, const std::vector<double>& weight) {
  std::vector<solver::Ramp> ramps;
  ramps.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto row = static_cast<std::uint32_t>(i);
    if (y[i] > 0) {
      ramps.push_back({row, -1.0, 1.0, weight[i]});
    } else {
      ramps.push_back({row, 1.0, -1.0, weight[i]});
    }
  }
  return ramps;
}

std::vector<double> class_weights(std::span<const int> y, const TrainConfig& c) {
  std::size_t pos = 0;
  for (int v : y) pos += v > 0 ? 1 : 0;
  const std::size_t neg = y.size() - pos;
  std::vector<double> w(y.size(), c.C);
  if (c.balanced && pos > 0 && neg > 0) {
    const double n = static_cast<double>(y.size());
    const double cp = c.C * n / (2.0 * static_cast<double>(pos));
    const double cn = c.C * n / (2.0 * static_cast<double>(neg));
    for (std::size_t i = 0; i < y.size(); ++i) w[i] = y[i] > 0 ? cp : cn;
  }
  return w;
}

std::vector<solver::Ramp> tube_ramps(std::span<const double> y, const TrainConfig& c) {
  std::vector<solver::Ramp> ramps;
  ramps.reserve(2 * y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto row = static_cast<std::uint32_t>(i);
    const solver::Ramp below{row, -1.0, y[i] - c.epsilon, c.C};
    const solver::Ramp above{row, 1.0, y[i] + c.epsilon, c.C};
    // Order by sign so that negating y permutes nothing (see train_regressor).
    if (std::signbit(y[i])) {
      ramps.push_back(above);
      ramps.push_back(below);
    } else {
      ramps.push_back(below);
      ramps.push_back(above);
    }
  }
  return ramps;
}

solver::Options solver_options(const TrainConfig& c) {
  solver::Options o;
  o.tolerance = c.tolerance;
  o.max_epochs = c.max_epochs;
  o.seed = c.seed;
  return o;
}

TrainingInfo info_of(solver::Solution& s) {
  TrainingInfo t;
  t.converged = s.converged;
  t.epochs = s.epochs;
  t.iterations = s.iterations;
  t.max_violation = s.max_violation;
  t.objective_history = std::move(s.objective_history);
  return t;
}

void check_dim(std::size_t weights, const FeatureVector& x) {
  if (x.dimension != weights) {
    throw DimensionError("feature dimension " + std::to_string(x.dimension) +
                         " does not match model dimension " + std::to_string(weights));
  }
}

json sparse_weights(const std::vector<double>& w) {
  json idx = json::array(), val = json::array();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != 0.0) {
      idx.push_back(k);
      val.push_back(w[k]);
    }
  }
  return json{{"dimension", w.size()}, {"index", idx}, {"value", val}};
}

std::vector<double> dense_weights(const json& j) {
  std::vector<double> w(j.at("dimension").get<std::size_t>(), 0.0);
  const auto& idx = j.at("index");
  const auto& val = j.at("value");
  if (idx.size() != val.size()) throw ValidationError("weight index/value length mismatch");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto i = idx[k].get<std::size_t>();
    if (i >= w.size()) throw ValidationError("weight index out of range");
    w[i] = val[k].get<double>();
    if (!std::isfinite(w[i])) throw ValidationError("non-finite weight");
  }
  return w;
}

json info_json(const TrainingInfo& t) {
  return json{{"converged", t.converged},
              {"epochs", t.epochs},
              {"iterations", t.iterations},
              {"max_violation", t.max_violation}};
}

TrainingInfo info_from_json(const json& j) {
  TrainingInfo t;
  t.converged = j.at("converged").get<bool>();
  t.epochs = j.at("epochs").get<std::size_t>();
  t.iterations = j.at("iterations").get<std::size_t>();
  t.max_violation = j.at("max_violation").get<double>();
  return t;
}

Gender gender_from(const json& j) {
  auto g = parse_gender(j.get<std::string>());
  if (!g) throw ValidationError("bad gender label in model");
  return *g;
}

}  // namespace

ClassifierModel train_classifier(const FeatureMatrix& x, std::span<const int> y,
                                 const TrainConfig& config, Gender positive, Gender negative) {
  config.validate();
  check_rows(x);
  if (y.size() != x.size()) throw DimensionError("label count differs from row count");
  std::size_t pos = 0;
  for (int v : y) {
    if (v != 1 && v != -1) throw ConfigError("classifier labels must be +1 or -1");
    pos += v > 0 ? 1 : 0;
  }
  if (pos == 0 || pos == y.size()) throw ConfigError("classifier needs both classes");

  const auto weight = class_weights(y, config);
  solver::Problem prob;
  prob.x = &x;
  const std::size_t n = x.size();
  prob.var_row.resize(n);
  prob.linear.resize(n);
  prob.lower.resize(n);
  prob.upper.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prob.var_row[i] = static_cast<std::uint32_t>(i);
    prob.linear[i] = -static_cast<double>(y[i]);
    prob.lower[i] = y[i] > 0 ? 0.0 : -weight[i];
    prob.upper[i] = y[i] > 0 ? weight[i] : 0.0;
  }
  prob.ramps = hinge_ramps(y, weight);
  auto sol = solver::solve(prob, solver_options(config));

  ClassifierModel m;
  m.weights = std::move(sol.weights);
  m.bias = sol.bias;
  m.positive_class = positive;
  m.negative_class = negative;
  m.majority_class = 2 * pos >= y.size() ? positive : negative;
  m.config = config;
  m.training = info_of(sol);
  return m;
}

RegressorModel train_regressor(const FeatureMatrix& x, std::span<const double> y,
                               const TrainConfig& config) {
  config.validate();
  if (x.size() < 2) throw ConfigError("regressor needs at least two rows");
  check_rows(x);
  if (y.size() != x.size()) throw DimensionError("label count differs from row count");
  for (double v : y) {
    if (!std::isfinite(v)) throw ConfigError("non-finite regression target");
  }
  solver::Problem prob;
  prob.x = &x;
  const std::size_t n = x.size();
  prob.var_row.resize(2 * n);
  prob.linear.resize(2 * n);
  prob.lower.resize(2 * n);
  prob.upper.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::uint32_t>(i);
    // Under y -> -y the two multipliers of a row trade places; keying slot
    // order on the sign bit (so -0.0 differs from 0.0) maps every variable
    // onto its own slot and keeps the solve exactly sign-equivariant.
    const bool neg = std::signbit(y[i]);
    const std::size_t up = neg ? n + i : i, lo = neg ? i : n + i;
    prob.var_row[up] = row;
    prob.linear[up] = -y[i] + config.epsilon;
    prob.lower[up] = 0.0;
    prob.upper[up] = config.C;
    prob.var_row[lo] = row;
    prob.linear[lo] = -y[i] - config.epsilon;
    prob.lower[lo] = -config.C;
    prob.upper[lo] = 0.0;
  }
  prob.ramps = tube_ramps(y, config);
  auto sol = solver::solve(prob, solver_options(config));

  RegressorModel m;
  m.weights = std::move(sol.weights);
  m.bias = sol.bias;
  m.config = config;
  m.training = info_of(sol);
  return m;
}

double decision_value(const ClassifierModel& m, const FeatureVector& x) {
  check_dim(m.weights.size(), x);
  return solver::dot(x, m.weights) + m.bias;
}

double decision_value(const RegressorModel& m, const FeatureVector& x) {
  check_dim(m.weights.size(), x);
  return solver::dot(x, m.weights) + m.bias;
}

Gender predict_gender_from_score(const ClassifierModel& m, double score) {
  if (score > 0.0) return m.positive_class;
  if (score < 0.0) return m.negative_class;
  return m.majority_class;
}

Gender predict_gender(const ClassifierModel& m, const FeatureVector& x) {
  return predict_gender_from_score(m, decision_value(m, x));
}

double clamp_age(double raw) {
  return std::clamp(raw, static_cast<double>(kMinAge), static_cast<double>(kMaxAge));
}

double predict_age(const RegressorModel& m, const FeatureVector& x) {
  return clamp_age(decision_value(m, x));
}

double classifier_objective(std::span<const double> w, double b, const FeatureMatrix& x,
                            std::span<const int> y, const TrainConfig& config) {
  if (y.size() != x.size()) throw DimensionError("label count differs from row count");
  const auto ramps = hinge_ramps(y, class_weights(y, config));
  return solver::primal_objective(x, ramps, w, b);
}

double regressor_objective(std::span<const double> w, double b, const FeatureMatrix& x,
                           std::span<const double> y, const TrainConfig& config) {
  if (y.size() != x.size()) throw DimensionError("label count differs from row count");
  const auto ramps = tube_ramps(y, config);
  return solver::primal_objective(x, ramps, w, b);
}

double objective(const ClassifierModel& m, const FeatureMatrix& x, std::span<const int> y) {
  return classifier_objective(m.weights, m.bias, x, y, m.config);
}

double objective(const RegressorModel& m, const FeatureMatrix& x, std::span<const double> y) {
  return regressor_objective(m.weights, m.bias, x, y, m.config);
}

Gradient regressor_gradient(std::span<const double> w, double b, const FeatureMatrix& x,
                            std::span<const double> y, const TrainConfig& config) {
  if (w.size() != x.dimension) throw DimensionError("weight dimension does not match features");
  if (y.size() != x.size()) throw DimensionError("label count differs from row count");
  Gradient g;
  g.weights.assign(w.begin(), w.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = solver::dot(x.rows[i], w) + b - y[i];
    double s = 0.0;
    if (r > config.epsilon) s = config.C;
    if (r < -config.epsilon) s = -config.C;
    if (s == 0.0) continue;
    for (const auto& [k, v] : x.rows[i].entries) g.weights[k] += s * v;
    g.bias += s;
  }
  return g;
}

json to_json(const TrainConfig& c) {
  return json{{"C", c.C},
              {"epsilon", c.epsilon},
              {"tolerance", c.tolerance},
              {"max_epochs", c.max_epochs},
              {"seed", c.seed},
              {"balanced", c.balanced}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  c.C = j.at("C").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.tolerance = j.at("tolerance").get<double>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.balanced = j.at("balanced").get<bool>();
  c.validate();
  return c;
}

json to_json(const ClassifierModel& m) {
  return json{{"kind", "gender_classifier"},
              {"weights", sparse_weights(m.weights)},
              {"bias", m.bias},
              {"positive_class", std::string(to_string(m.positive_class))},
              {"negative_class", std::string(to_string(m.negative_class))},
              {"majority_class", std::string(to_string(m.majority_class))},
              {"config", to_json(m.config)},
              {"spec_fingerprint", m.spec_fingerprint},
              {"training", info_json(m.training)}};
}

json to_json(const RegressorModel& m) {
  return json{{"kind", "age_regressor"},
              {"weights", sparse_weights(m.weights)},
              {"bias", m.bias},
              {"config", to_json(m.config)},
              {"spec_fingerprint", m.spec_fingerprint},
              {"training", info_json(m.training)}};
}

ClassifierModel classifier_from_json(const json& j) {
  try {
    if (j.at("kind") != "gender_classifier") throw ValidationError("not a gender classifier");
    ClassifierModel m;
    m.weights = dense_weights(j.at("weights"));
    m.bias = j.at("bias").get<double>();
    m.positive_class = gender_from(j.at("positive_class"));
    m.negative_class = gender_from(j.at("negative_class"));
    m.majority_class = gender_from(j.at("majority_class"));
    m.config = train_config_from_json(j.at("config"));
    m.spec_fingerprint = j.at("spec_fingerprint").get<std::uint64_t>();
    m.training = info_from_json(j.at("training"));
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed classifier: ") + e.what());
  }
}

RegressorModel regressor_from_json(const json& j) {
  try {
    if (j.at("kind") != "age_regressor") throw ValidationError("not an age regressor");
    RegressorModel m;
    m.weights = dense_weights(j.at("weights"));
    m.bias = j.at("bias").get<double>();
    m.config = train_config_from_json(j.at("config"));
    m.spec_fingerprint = j.at("spec_fingerprint").get<std::uint64_t>();
    m.training = info_from_json(j.at("training"));
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed regressor: ") + e.what());
  }
}

}  // namespace catfish
