#include <gtest/gtest.h>

#include <sstream>

#include "catfish/detector.hpp"
#include "catfish/error.hpp"
#include "catfish/synth.hpp"
#include "fixtures.hpp"

using namespace catfish;

namespace {

// Predictors whose outputs are fixed by the bias alone.
struct Fixed {
  Corpus corpus;
  GenderPredictor gender;
  AgePredictor age;

  Fixed(double gender_score, double age_value) {
    for (int i = 0; i < 4; ++i)
      corpus.profiles.push_back(fixture::profile("t" + std::to_string(i), Gender::Male, 30,
                                                 fixture::repeat("alpha beta", 10)));
    const auto spec = FeatureSpec::fit(fixture::pointers(corpus), FeatureGroups::All,
                                       demo_lexicon(), 1);
    gender.spec = spec;
    gender.model.weights.assign(spec.dimension(), 0.0);
    gender.model.bias = gender_score;
    gender.model.spec_fingerprint = spec.fingerprint();
    age.spec = spec;
    age.model.weights.assign(spec.dimension(), 0.0);
    age.model.bias = age_value;
    age.model.spec_fingerprint = spec.fingerprint();
  }
};

Profile target(Gender g, std::optional<int> age, std::size_t comments = 10) {
  auto p = fixture::profile("x", g, 30, fixture::repeat("alpha", comments), false);
  p.reported_age = age;
  return p;
}

}  // namespace

TEST(Detector, GenderRule) {
  Fixed f(1.0, 30.0);  // predicts male
  const DetectorConfig c;
  EXPECT_TRUE(flag_profile(target(Gender::Female, 30), f.gender, f.age, c).gender_flag);
  EXPECT_FALSE(flag_profile(target(Gender::Male, 30), f.gender, f.age, c).gender_flag);
  EXPECT_FALSE(flag_profile(target(Gender::Other, 30), f.gender, f.age, c).gender_flag);
}

TEST(Detector, AgeRule) {
  const DetectorConfig c;
  Fixed over(1.0, 31.0);
  const auto v = flag_profile(target(Gender::Male, 25), over.gender, over.age, c);
  EXPECT_TRUE(v.age_flag);
  EXPECT_DOUBLE_EQ(*v.age_delta, 6.0);
  Fixed under(1.0, 30.0);
  EXPECT_FALSE(flag_profile(target(Gender::Male, 25), under.gender, under.age, c).age_flag);
  Fixed below(1.0, 19.0);
  EXPECT_TRUE(flag_profile(target(Gender::Male, 25), below.gender, below.age, c).age_flag);
  const auto missing = flag_profile(target(Gender::Male, std::nullopt), over.gender, over.age, c);
  EXPECT_FALSE(missing.age_flag);
  EXPECT_FALSE(missing.age_delta.has_value());
}

TEST(Detector, IneligibleHasNoFlags) {
  Fixed f(-1.0, 50.0);
  const auto v = flag_profile(target(Gender::Male, 20, 9), f.gender, f.age, DetectorConfig{});
  EXPECT_FALSE(v.eligible);
  EXPECT_FALSE(v.gender_flag || v.age_flag);
  EXPECT_FALSE(v.predicted_gender.has_value());
}

TEST(Detector, FlagIndependence) {
  const DetectorConfig c;
  Fixed age_only(1.0, 45.0);
  const auto a = flag_profile(target(Gender::Male, 25), age_only.gender, age_only.age, c);
  EXPECT_TRUE(a.age_flag);
  EXPECT_FALSE(a.gender_flag);
  Fixed gender_only(-1.0, 25.0);
  const auto g = flag_profile(target(Gender::Male, 25), gender_only.gender, gender_only.age, c);
  EXPECT_TRUE(g.gender_flag);
  EXPECT_FALSE(g.age_flag);
}

TEST(Detector, FingerprintMismatch) {
  Fixed f(1.0, 30.0);
  f.age.model.spec_fingerprint ^= 1;
  EXPECT_THROW(flag_profile(target(Gender::Male, 25), f.gender, f.age, DetectorConfig{}), ConfigError);
  DetectorConfig bad;
  bad.age_threshold = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Detector, SharedSpecOverload) {
  Fixed f(-2.0, 40.0);
  const auto v = flag_profile(target(Gender::Male, 25), f.gender.model, f.age.model, f.gender.spec,
                              DetectorConfig{});
  EXPECT_TRUE(v.gender_flag);
  EXPECT_TRUE(v.age_flag);
}

namespace {

struct Trained {
  SynthOutput synth;
  GenderPredictor gender;
  AgePredictor age;
};

const Trained& trained() {
  static const Trained t = [] {
    SynthConfig sc;
    sc.n_profiles = 800;
    sc.verified_fraction = 0.15;
    sc.seed = 23;
    Trained r{generate(sc), {}, {}};
    PipelineOptions o;
    o.lexicon = synthetic_lexicon();
    r.gender = fit_gender(training_population(r.synth.corpus, Task::Gender, 10), o);
    o.groups = FeatureGroups::Content;
    r.age = fit_age(training_population(r.synth.corpus, Task::Age, 10), o);
    return r;
  }();
  return t;
}

}  // namespace

TEST(Scan, TargetsEligibleUnverifiedOnly) {
  const auto& t = trained();
  const auto r = scan_corpus(t.synth.corpus, t.gender, t.age, DetectorConfig{});
  std::size_t expected = 0;
  for (const auto& p : t.synth.corpus.profiles) expected += !p.verified && p.comments.size() >= 10;
  EXPECT_EQ(r.verdicts.size(), expected);
  EXPECT_EQ(r.summary.scanned, expected);
  for (const auto& v : r.verdicts) {
    EXPECT_TRUE(v.eligible);
    if (v.age_flag) EXPECT_GT(std::abs(*v.age_delta), 5.581);
  }
  const auto again = scan_corpus(t.synth.corpus, t.gender, t.age, DetectorConfig{});
  EXPECT_EQ(again.verdicts, r.verdicts);

  Corpus verified_only;
  for (const auto& p : t.synth.corpus.profiles)
    if (p.verified) verified_only.profiles.push_back(p);
  const auto none = scan_corpus(verified_only, t.gender, t.age, DetectorConfig{});
  EXPECT_TRUE(none.verdicts.empty());
  EXPECT_EQ(none.warnings.size(), 1u);
}

TEST(Scan, ThresholdMonotonicity) {
  const auto& t = trained();
  std::size_t prev = SIZE_MAX;
  for (double th : {1.0, 2.0, 3.0, 5.581, 8.0, 12.0, 30.0}) {
    DetectorConfig c;
    c.age_threshold = th;
    const auto r = scan_corpus(t.synth.corpus, t.gender, t.age, c);
    EXPECT_LE(r.summary.flagged, prev);
    prev = r.summary.flagged;
  }
}

TEST(Scan, SummaryMatchesVerdicts) {
  const auto& t = trained();
  const auto r = scan_corpus(t.synth.corpus, t.gender, t.age, DetectorConfig{});
  for (Gender g : {Gender::Male, Gender::Female}) {
    std::size_t n = 0, f = 0;
    double age = 0;
    for (const auto& v : r.verdicts) {
      if (v.reported_gender != g) continue;
      ++n;
      if (v.flagged()) {
        ++f;
        age += *v.reported_age;
      }
    }
    const auto& s = r.summary.by_reported_gender.at(g);
    EXPECT_EQ(s.scanned, n);
    EXPECT_EQ(s.flagged, f);
    if (f) EXPECT_NEAR(*s.mean_flagged_reported_age, age / double(f), 1e-9);
  }
}

TEST(Verdicts, CsvRoundTrip) {
  const auto& t = trained();
  auto r = scan_corpus(t.synth.corpus, t.gender, t.age, DetectorConfig{});
  CatfishVerdict odd;
  odd.id = "weird,\"id\"";
  odd.reported_gender = Gender::Other;
  r.verdicts.push_back(odd);
  std::ostringstream out;
  write_verdicts_csv(out, r.verdicts);
  std::istringstream in(out.str());
  EXPECT_EQ(read_verdicts_csv(in), r.verdicts);
  std::istringstream bad("id,eligible\n");
  EXPECT_THROW(read_verdicts_csv(bad), ValidationError);
}
