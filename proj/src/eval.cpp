#include "catfish/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "catfish/csv.hpp"
#include "catfish/error.hpp"
#include "catfish/rng.hpp"

namespace catfish {

namespace {

void check_k(std::size_t n, std::size_t k) {
  if (k < 2) throw ConfigError("k must be at least 2");
  if (k > n) {
    throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                      " available items");
  }
}

constexpr std::uint64_t kFoldStream = 0x6b666f6c64ULL;

}  // namespace

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto f : assignment) ++sizes[f];
  return sizes;
}

FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_k(n, k);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, kFoldStream));
  rng.shuffle(order);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) plan.assignment[order[pos]] = pos % k;
  return plan;
}

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  const std::size_t n = labels.size();
  check_k(n, k);
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
  for (const auto& [label, idx] : members) {
    if (idx.size() < k) {
      FoldPlan plan = kfold(n, k, seed);
      plan.warnings.push_back("class " + std::to_string(label) + " has " +
                              std::to_string(idx.size()) + " members, fewer than k = " +
                              std::to_string(k) + "; folds are not stratified");
      return plan;
    }
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = true;
  plan.assignment.assign(n, 0);
  // Continuing the deal across classes keeps total fold sizes within one.
  std::size_t pos = 0;
  for (auto& [label, idx] : members) {
    Rng rng(derive_seed(seed, kFoldStream + 1 + static_cast<std::uint64_t>(label + (1 << 20))));
    rng.shuffle(idx);
    for (auto i : idx) plan.assignment[i] = pos++ % k;
  }
  return plan;
}

const ClassMetrics* ClassificationMetrics::find(Gender g) const {
  for (const auto& c : classes)
    if (c.label == g) return &c;
  return nullptr;
}

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0 ? 2.0 * precision * recall / s : 0.0;
}

double accuracy_from_recalls(std::span<const double> recalls, std::span<const double> sizes) {
  if (recalls.size() != sizes.size()) throw DimensionError("recalls and sizes differ in length");
  double hit = 0, total = 0;
  for (std::size_t i = 0; i < recalls.size(); ++i) {
    hit += recalls[i] * sizes[i];
    total += sizes[i];
  }
  return total > 0 ? hit / total : 0.0;
}

ClassificationMetrics classification_metrics(std::span<const Gender> truth,
                                             std::span<const Gender> predicted) {
  if (truth.size() != predicted.size()) {
    throw DimensionError("label vectors differ in length: " + std::to_string(truth.size()) +
                         " vs " + std::to_string(predicted.size()));
  }
  if (truth.empty()) throw DimensionError("no labels to score");
  ClassificationMetrics m;
  m.n = truth.size();
  std::size_t correct = 0;
  for (Gender g : {Gender::Female, Gender::Male, Gender::Other}) {
    ClassMetrics c;
    c.label = g;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool t = truth[i] == g, p = predicted[i] == g;
      c.support += t;
      c.predicted += p;
      c.true_positives += t && p;
    }
    if (c.support == 0 && c.predicted == 0) continue;
    c.precision = c.predicted ? double(c.true_positives) / double(c.predicted) : 0.0;
    c.recall = c.support ? double(c.true_positives) / double(c.support) : 0.0;
    c.f1 = f1_score(c.precision, c.recall);
    correct += c.true_positives;
    m.classes.push_back(c);
  }
  double f1_sum = 0;
  for (const auto& c : m.classes) f1_sum += c.f1;
  m.macro_f1 = f1_sum / double(m.classes.size());
  m.accuracy = double(correct) / double(m.n);
  return m;
}

double mae(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size()) throw DimensionError("vectors differ in length");
  if (truth.empty()) throw DimensionError("mae of empty vectors");
  double s = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) s += std::abs(predicted[i] - truth[i]);
  return s / double(truth.size());
}

double pearson(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size()) throw DimensionError("vectors differ in length");
  const std::size_t n = truth.size();
  if (n < 2) throw DimensionError("pearson needs at least two pairs");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += truth[i];
    my += predicted[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = truth[i] - mx, dy = predicted[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw UndefinedMetricError("pearson undefined: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

namespace {

void score_fold(FoldResult& r, Task task, std::span<const Gender> gt, std::span<const Gender> gp,
                std::span<const double> at, std::span<const double> ap) {
  if (task == Task::Gender) {
    r.classification = classification_metrics(gt, gp);
  } else {
    r.mae = mae(at, ap);
    try {
      r.pearson = pearson(at, ap);
    } catch (const UndefinedMetricError&) {
    } catch (const DimensionError&) {
    }
  }
}

std::optional<double> average(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace

EvalReport cross_validate(const Corpus& corpus, Task task, const PipelineOptions& options,
                          std::size_t k, std::uint64_t seed) {
  const auto population = training_population(corpus, task, options.min_comments);
  if (population.size() < k) {
    throw ConfigError("only " + std::to_string(population.size()) +
                      " eligible labeled verified profiles for k = " + std::to_string(k));
  }
  EvalReport report;
  report.task = task;
  report.groups = options.groups;
  report.k = k;
  report.seed = seed;
  report.population = population.size();

  FoldPlan plan;
  if (task == Task::Gender) {
    std::vector<int> labels;
    for (const auto* p : population) labels.push_back(gender_label(p->reported_gender));
    plan = stratified_kfold(labels, k, seed);
  } else {
    plan = kfold(population.size(), k, seed);
  }
  report.stratified = plan.stratified;
  report.warnings = plan.warnings;

  const std::size_t n = population.size();
  std::vector<Gender> pooled_gt(n), pooled_gp(n);
  std::vector<double> pooled_at(n), pooled_ap(n);
  std::vector<std::size_t> tested;

  for (std::size_t f = 0; f < k; ++f) {
    const auto train_idx = plan.train_indices(f);
    const auto test_idx = plan.test_indices(f);
    std::vector<const Profile*> train;
    for (auto i : train_idx) train.push_back(population[i]);

    FoldResult r;
    r.scope = std::to_string(f + 1);
    r.n_train = train.size();
    r.n_test = test_idx.size();
    std::vector<Gender> gt, gp;
    std::vector<double> at, ap;
    if (task == Task::Gender) {
      const auto predictor = fit_gender(train, options);
      for (auto i : test_idx) {
        gt.push_back(population[i]->reported_gender);
        gp.push_back(predictor.predict(*population[i]));
        pooled_gt[i] = gt.back();
        pooled_gp[i] = gp.back();
      }
    } else {
      const auto predictor = fit_age(train, options);
      for (auto i : test_idx) {
        at.push_back(double(*population[i]->reported_age));
        ap.push_back(predictor.predict(*population[i]));
        pooled_at[i] = at.back();
        pooled_ap[i] = ap.back();
      }
    }
    score_fold(r, task, gt, gp, at, ap);
    report.folds.push_back(std::move(r));
  }

  report.pooled.scope = "pooled";
  report.pooled.n_train = n;
  report.pooled.n_test = n;
  score_fold(report.pooled, task, pooled_gt, pooled_gp, pooled_at, pooled_ap);

  // Fold means of each defined value.
  report.mean.scope = "mean";
  std::vector<double> acc, mf1, m, r;
  std::map<Gender, std::vector<double>> prec, rec, f1;
  for (const auto& fr : report.folds) {
    if (fr.classification) {
      acc.push_back(fr.classification->accuracy);
      mf1.push_back(fr.classification->macro_f1);
      for (const auto& c : fr.classification->classes) {
        prec[c.label].push_back(c.precision);
        rec[c.label].push_back(c.recall);
        f1[c.label].push_back(c.f1);
      }
    }
    if (fr.mae) m.push_back(*fr.mae);
    if (fr.pearson) r.push_back(*fr.pearson);
  }
  if (task == Task::Gender) {
    ClassificationMetrics cm;
    cm.n = n;
    cm.accuracy = *average(acc);
    cm.macro_f1 = *average(mf1);
    for (Gender g : {Gender::Female, Gender::Male, Gender::Other}) {
      if (!prec.count(g)) continue;
      ClassMetrics c;
      c.label = g;
      c.precision = *average(prec[g]);
      c.recall = *average(rec[g]);
      c.f1 = *average(f1[g]);
      if (const auto* pc = report.pooled.classification->find(g)) {
        c.support = pc->support;
        c.predicted = pc->predicted;
        c.true_positives = pc->true_positives;
      }
      cm.classes.push_back(c);
    }
    report.mean.classification = cm;
  } else {
    report.mean.mae = average(m);
    report.mean.pearson = average(r);
  }
  report.mean.n_train = n;
  report.mean.n_test = n;
  return report;
}

namespace {

std::vector<std::string> report_header() {
  return {"scope",            "task",          "features",      "n_train",     "n_test",
          "accuracy",         "macro_f1",      "female_precision", "female_recall", "female_f1",
          "male_precision",   "male_recall",   "male_f1",       "mae",         "pearson_r"};
}

std::vector<std::string> report_row(const EvalReport& rep, const FoldResult& r) {
  std::vector<std::string> row{r.scope, std::string(to_string(rep.task)),
                               std::string(to_string(rep.groups)), std::to_string(r.n_train),
                               std::to_string(r.n_test)};
  if (r.classification) {
    row.push_back(csv::number(r.classification->accuracy));
    row.push_back(csv::number(r.classification->macro_f1));
    for (Gender g : {Gender::Female, Gender::Male}) {
      const auto* c = r.classification->find(g);
      row.push_back(c ? csv::number(c->precision) : "");
      row.push_back(c ? csv::number(c->recall) : "");
      row.push_back(c ? csv::number(c->f1) : "");
    }
  } else {
    row.insert(row.end(), 8, "");
  }
  row.push_back(csv::number(r.mae));
  row.push_back(csv::number(r.pearson));
  return row;
}

std::string fixed(const std::optional<double>& v, int digits = 3) {
  if (!v) return "-";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << *v;
  return ss.str();
}

}  // namespace

void write_report_csv(std::ostream& out, const EvalReport& report) {
  csv::write_row(out, report_header());
  for (const auto& f : report.folds) csv::write_row(out, report_row(report, f));
  csv::write_row(out, report_row(report, report.pooled));
  csv::write_row(out, report_row(report, report.mean));
}

void print_report_table(std::ostream& out, const EvalReport& report) {
  out << "task=" << to_string(report.task) << " features=" << to_string(report.groups)
      << " k=" << report.k << " seed=" << report.seed << " population=" << report.population
      << (report.stratified ? " stratified" : "") << "\n";
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  auto line = [&](const FoldResult& r) {
    out << std::left << std::setw(8) << r.scope << std::right << " n_test=" << std::setw(5)
        << r.n_test;
    if (r.classification) {
      const auto& c = *r.classification;
      out << "  acc=" << fixed(c.accuracy) << "  macroF1=" << fixed(c.macro_f1);
      for (Gender g : {Gender::Female, Gender::Male}) {
        const auto* m = c.find(g);
        out << "  " << to_string(g) << " P/R/F1=";
        if (m) {
          out << fixed(m->precision) << "/" << fixed(m->recall) << "/" << fixed(m->f1);
        } else {
          out << "-";
        }
      }
    } else {
      out << "  MAE=" << fixed(r.mae) << "  r=" << fixed(r.pearson);
    }
    out << "\n";
  };
  for (const auto& f : report.folds) line(f);
  line(report.pooled);
  line(report.mean);
}

}  // namespace catfish
