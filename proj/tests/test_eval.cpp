#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "catfish/error.hpp"
#include "catfish/eval.hpp"
#include "catfish/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace catfish;

TEST(Folds, SizesDifferByAtMostOne) {
  const auto plan = kfold(1119, 10, 4);
  for (auto s : plan.fold_sizes()) {
    EXPECT_GE(s, 111u);
    EXPECT_LE(s, 112u);
  }
  for (auto s : kfold(10, 10, 0).fold_sizes()) EXPECT_EQ(s, 1u);
}

TEST(Folds, StratifiedPerClassCounts) {
  std::vector<int> labels(820, 1);
  labels.insert(labels.end(), 299, -1);
  const auto plan = stratified_kfold(labels, 10, 7);
  EXPECT_TRUE(plan.stratified);
  EXPECT_TRUE(plan.warnings.empty());
  std::map<int, std::vector<std::size_t>> per(
      {{1, std::vector<std::size_t>(10)}, {-1, std::vector<std::size_t>(10)}});
  for (std::size_t i = 0; i < labels.size(); ++i) ++per[labels[i]][plan.assignment[i]];
  for (auto c : per[1]) EXPECT_TRUE(c == 82u);
  for (auto c : per[-1]) EXPECT_TRUE(c == 29u || c == 30u);
  const auto sizes = plan.fold_sizes();
  EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1u);
}

TEST(Folds, DeterministicAndSeedSensitive) {
  std::vector<int> labels(100);
  for (std::size_t i = 0; i < 100; ++i) labels[i] = i % 3 ? 1 : -1;
  EXPECT_EQ(stratified_kfold(labels, 5, 1).assignment, stratified_kfold(labels, 5, 1).assignment);
  EXPECT_NE(stratified_kfold(labels, 5, 1).assignment, stratified_kfold(labels, 5, 2).assignment);
}

TEST(Folds, FallbackAndErrors) {
  std::vector<int> labels(20, 1);
  labels[0] = -1;
  labels[1] = -1;
  const auto plan = stratified_kfold(labels, 5, 0);
  EXPECT_FALSE(plan.stratified);
  EXPECT_EQ(plan.warnings.size(), 1u);
  EXPECT_THROW(kfold(5, 6, 0), ConfigError);
  EXPECT_THROW(kfold(5, 1, 0), ConfigError);
}

TEST(Folds, TrainAndTestPartition) {
  const auto plan = kfold(23, 4, 9);
  for (std::size_t f = 0; f < 4; ++f) {
    auto tr = plan.train_indices(f), te = plan.test_indices(f);
    std::set<std::size_t> all(tr.begin(), tr.end());
    for (auto i : te) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), 23u);
  }
}

TEST(Metrics, ConfusionIdentities) {
  EXPECT_NEAR(f1_score(0.920, 0.769), 0.838, 0.001);
  const std::vector<double> recalls{0.769, 0.976}, sizes{299, 820};
  EXPECT_NEAR(accuracy_from_recalls(recalls, sizes), 0.920, 0.001);
  EXPECT_NEAR((0.838 + 0.947) / 2, 0.893, 0.001);
  EXPECT_DOUBLE_EQ(f1_score(0, 0), 0.0);
}

TEST(Metrics, PerfectAndDegenerate) {
  const std::vector<Gender> t{Gender::Male, Gender::Female, Gender::Male};
  const auto m = classification_metrics(t, t);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.macro_f1, 1.0);
  for (const auto& c : m.classes) {
    EXPECT_DOUBLE_EQ(c.precision, 1.0);
    EXPECT_DOUBLE_EQ(c.recall, 1.0);
  }
  const std::vector<Gender> all_male(3, Gender::Male);
  const auto d = classification_metrics(t, all_male);
  ASSERT_NE(d.find(Gender::Female), nullptr);
  EXPECT_DOUBLE_EQ(d.find(Gender::Female)->precision, 0.0);
  EXPECT_DOUBLE_EQ(d.find(Gender::Female)->f1, 0.0);
  EXPECT_THROW(classification_metrics(t, std::vector<Gender>{Gender::Male}), DimensionError);
}

TEST(Metrics, MacroAndAccuracyIdentitiesOnRandomLabels) {
  std::mt19937_64 g(13);
  for (int t = 0; t < 50; ++t) {
    std::vector<Gender> a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a[i] = g() % 3 ? Gender::Male : Gender::Female;
      b[i] = g() % 4 ? a[i] : (a[i] == Gender::Male ? Gender::Female : Gender::Male);
    }
    const auto m = classification_metrics(a, b);
    double f1 = 0, hit = 0;
    std::vector<double> rec, size;
    for (const auto& c : m.classes) {
      f1 += c.f1;
      rec.push_back(c.recall);
      size.push_back(double(c.support));
    }
    for (std::size_t i = 0; i < 40; ++i) hit += a[i] == b[i];
    EXPECT_NEAR(m.macro_f1, f1 / double(m.classes.size()), 1e-15);
    EXPECT_NEAR(m.accuracy, hit / 40, 1e-15);
    EXPECT_NEAR(accuracy_from_recalls(rec, size), m.accuracy, 1e-12);
  }
}

TEST(Metrics, MaeExamples) {
  EXPECT_DOUBLE_EQ(mae(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(mae(std::vector<double>{20, 30}, std::vector<double>{25, 28}), 3.5);
  EXPECT_NEAR(mae(std::vector<double>{40}, std::vector<double>{34.419}), 5.581, 1e-12);
  EXPECT_THROW(mae(std::vector<double>{}, std::vector<double>{}), DimensionError);
}

TEST(Metrics, PearsonExamplesAndInvariance) {
  const std::vector<double> y{20, 25, 31, 44, 52};
  EXPECT_NEAR(pearson(y, y), 1.0, 1e-15);
  std::vector<double> neg;
  for (double v : y) neg.push_back(100 - v);
  EXPECT_NEAR(pearson(y, neg), -1.0, 1e-15);
  std::mt19937_64 g(3);
  std::normal_distribution<double> nd;
  std::vector<double> a(50), b(50), c(50);
  for (std::size_t i = 0; i < 50; ++i) {
    a[i] = nd(g);
    b[i] = a[i] + nd(g);
    c[i] = 3.5 * b[i] + 17;
  }
  EXPECT_NEAR(pearson(a, b), pearson(a, c), 1e-12);
  EXPECT_NEAR(pearson(a, b), oracle::pearson(a, b), 1e-12);
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), UndefinedMetricError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), DimensionError);
}

namespace {

SynthOutput eval_corpus() {
  SynthConfig sc;
  sc.n_profiles = 600;
  sc.verified_fraction = 0.2;
  sc.seed = 17;
  return generate(sc);
}

PipelineOptions eval_options() {
  PipelineOptions o;
  o.lexicon = synthetic_lexicon();
  return o;
}

}  // namespace

TEST(CrossValidate, GenderReportIsConsistentAndDeterministic) {
  const auto s = eval_corpus();
  const auto a = cross_validate(s.corpus, Task::Gender, eval_options(), 5, 3);
  const auto b = cross_validate(s.corpus, Task::Gender, eval_options(), 5, 3);
  std::ostringstream ca, cb;
  write_report_csv(ca, a);
  write_report_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(a.folds.size(), 5u);
  EXPECT_TRUE(a.stratified);
  ASSERT_TRUE(a.pooled.classification);
  EXPECT_EQ(a.pooled.classification->n, a.population);
  std::size_t tested = 0;
  for (const auto& f : a.folds) tested += f.n_test;
  EXPECT_EQ(tested, a.population);
  EXPECT_GE(a.pooled.classification->accuracy, 0.0);
  EXPECT_LE(a.pooled.classification->accuracy, 1.0);
}

TEST(CrossValidate, AgeReportFields) {
  const auto s = eval_corpus();
  auto o = eval_options();
  o.groups = FeatureGroups::Content;
  const auto r = cross_validate(s.corpus, Task::Age, o, 4, 1);
  EXPECT_FALSE(r.stratified);
  ASSERT_TRUE(r.pooled.mae && r.pooled.pearson);
  EXPECT_GE(*r.pooled.mae, 0.0);
  EXPECT_LE(std::abs(*r.pooled.pearson), 1.0);
}

TEST(CrossValidate, TooFewProfiles) {
  Corpus c;
  c.profiles.push_back(fixture::profile("a", Gender::Male, 30, fixture::repeat("x y", 10)));
  EXPECT_THROW(cross_validate(c, Task::Gender, eval_options(), 10, 0), ConfigError);
}

TEST(CrossValidate, NoLeakageFromHeldOutLabels) {
  const auto s = eval_corpus();
  const auto o = eval_options();
  auto pop = training_population(s.corpus, Task::Gender, o.min_comments);
  std::vector<int> labels;
  for (const auto* p : pop) labels.push_back(gender_label(p->reported_gender));
  const auto plan = stratified_kfold(labels, 5, 0);
  std::vector<const Profile*> train;
  for (auto i : plan.train_indices(0)) train.push_back(pop[i]);
  const auto before = serialize(fit_gender(train, o));

  Corpus mutated = s.corpus;
  auto mpop = training_population(mutated, Task::Gender, o.min_comments);
  for (auto i : plan.test_indices(0)) {
    auto* p = const_cast<Profile*>(mpop[i]);
    p->reported_gender = p->reported_gender == Gender::Male ? Gender::Female : Gender::Male;
    p->reported_age = 59;
    p->comments.push_back({"leak leak leak"});
  }
  std::vector<const Profile*> mtrain;
  for (auto i : plan.train_indices(0)) mtrain.push_back(mpop[i]);
  const auto after = fit_gender(mtrain, o);
  EXPECT_EQ(serialize(after), before);
}
