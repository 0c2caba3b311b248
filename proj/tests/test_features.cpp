#include <gtest/gtest.h>

#include <cmath>

#include "catfish/error.hpp"
#include "catfish/features.hpp"
#include "catfish/pipeline.hpp"
#include "catfish/synth.hpp"
#include "fixtures.hpp"

using namespace catfish;

namespace {

Corpus small_corpus() {
  Corpus c;
  const char* texts[] = {"i love this video", "great vid so hot", "what is this", "my mom wow"};
  for (int i = 0; i < 12; ++i) {
    auto p = fixture::profile("p" + std::to_string(i), i % 3 ? Gender::Male : Gender::Female,
                              20 + 3 * i, {texts[i % 4], texts[(i + 1) % 4], "gr8 thx"});
    p.country = i % 2 ? "us" : "de";
    p.friend_count = std::uint64_t(10 * i);
    p.videos_watched = std::uint64_t(i * i);
    if (i % 4) {
      p.pct_male_friends = 0.5;
      p.pct_female_friends = 0.4;
    }
    p.interested_in = i % 2 ? Interest::Women : Interest::Unspecified;
    p.relationship_status = i % 3 ? RelationshipStatus::Single : RelationshipStatus::Unspecified;
    c.profiles.push_back(p);
  }
  return c;
}

}  // namespace

TEST(FeatureSpec, LayoutByGroup) {
  const auto c = small_corpus();
  const auto ptrs = fixture::pointers(c);
  const auto lex = demo_lexicon();
  const auto content = FeatureSpec::fit(ptrs, FeatureGroups::Content, lex, 2);
  EXPECT_EQ(content.dimension(), content.vocabulary().size() + lex.categories.size() + 4);
  const auto network = FeatureSpec::fit(ptrs, FeatureGroups::Network, lex, 2);
  EXPECT_EQ(network.countries(), (std::vector<std::string>{"de", "us"}));
  EXPECT_EQ(network.dimension(), 3u + 2 + 3 + 2 + 3 + 4 + 4);
  const auto all = FeatureSpec::fit(ptrs, FeatureGroups::All, lex, 2);
  EXPECT_EQ(all.dimension(), content.dimension() + network.dimension());
  EXPECT_EQ(all.column_names().size(), all.dimension());
  for (const auto* p : ptrs) EXPECT_EQ(all.assemble(*p).dimension, all.dimension());
}

TEST(FeatureSpec, StandardizedOnTrainingStatistics) {
  const auto c = small_corpus();
  const auto ptrs = fixture::pointers(c);
  const auto spec = FeatureSpec::fit(ptrs, FeatureGroups::Network, demo_lexicon(), 2);
  const auto x = spec.assemble(ptrs);
  const auto names = spec.column_names();
  const auto col = std::find(names.begin(), names.end(), "log_friends") - names.begin();
  double sum = 0, ss = 0;
  for (const auto& r : x.rows) {
    const double v = r.value(std::uint32_t(col));
    sum += v;
    ss += v * v;
  }
  EXPECT_NEAR(sum / 12, 0.0, 1e-12);
  EXPECT_NEAR(ss / 12, 1.0, 1e-12);
}

TEST(FeatureSpec, OneHotsAndUnseenCountry) {
  const auto c = small_corpus();
  const auto spec = FeatureSpec::fit(fixture::pointers(c), FeatureGroups::Network, demo_lexicon(), 2);
  auto p = c.profiles[1];
  p.country = "zz";
  p.interested_in = Interest::Both;
  p.relationship_status = RelationshipStatus::InRelationship;
  const auto f = spec.profile_features(p);
  EXPECT_EQ(f, (std::vector<double>{0, 0, 1, 0, 1, 0, 0, 1}));
  p.interested_in = Interest::Unspecified;
  p.relationship_status = RelationshipStatus::Unspecified;
  p.country = "de";
  EXPECT_EQ(spec.profile_features(p), (std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(FeatureSpec, JsonRoundTripKeepsFingerprint) {
  const auto c = small_corpus();
  const auto spec = FeatureSpec::fit(fixture::pointers(c), FeatureGroups::All, demo_lexicon(), 1);
  const auto back = FeatureSpec::from_json(nlohmann::json::parse(spec.to_json().dump()));
  EXPECT_EQ(back.fingerprint(), spec.fingerprint());
  for (const auto& p : c.profiles) EXPECT_EQ(back.assemble(p), spec.assemble(p));
  auto j = spec.to_json();
  j["dimension"] = 3;
  EXPECT_THROW(FeatureSpec::from_json(j), Error);
}

TEST(FeatureSpec, UnfittedAndMissingDictionaries) {
  FeatureSpec s;
  EXPECT_THROW(s.assemble(fixture::profile("a", Gender::Male, 20, {"x"})), ConfigError);
  const auto c = small_corpus();
  LexiconSet no_dicts = demo_lexicon();
  no_dicts.dictionaries[1].reset();
  EXPECT_THROW(FeatureSpec::fit(fixture::pointers(c), FeatureGroups::Content, no_dicts, 1), ConfigError);
  EXPECT_NO_THROW(FeatureSpec::fit(fixture::pointers(c), FeatureGroups::Network, no_dicts, 1));
}

TEST(FeatureSpec, ExcludesProfileViews) {
  const auto c = small_corpus();
  const auto spec = FeatureSpec::fit(fixture::pointers(c), FeatureGroups::All, demo_lexicon(), 1);
  auto p = c.profiles[2];
  const auto before = spec.assemble(p);
  p.profile_views = 123456;
  EXPECT_EQ(spec.assemble(p), before);
}

TEST(Pipeline, ModelDocumentsRoundTripExactly) {
  SynthConfig sc;
  sc.n_profiles = 400;
  sc.verified_fraction = 0.3;
  sc.seed = 5;
  const auto s = generate(sc);
  PipelineOptions o;
  o.lexicon = synthetic_lexicon();
  const auto gpop = training_population(s.corpus, Task::Gender, o.min_comments);
  const auto g = fit_gender(gpop, o);
  const auto text = serialize(g);
  const auto back = parse_gender_predictor(text);
  EXPECT_EQ(serialize(back), text);
  for (const auto& p : s.corpus.profiles) EXPECT_EQ(back.score(p), g.score(p));

  o.groups = FeatureGroups::Content;
  const auto a = fit_age(training_population(s.corpus, Task::Age, o.min_comments), o);
  const auto atext = serialize(a);
  EXPECT_EQ(serialize(parse_age_predictor(atext)), atext);
  EXPECT_THROW(parse_gender_predictor(atext), ValidationError);

  auto doc = nlohmann::json::parse(text);
  doc["model"]["spec_fingerprint"] = 12345;
  EXPECT_THROW(parse_gender_predictor(doc.dump()), ConfigError);
}

TEST(Pipeline, TrainingPopulationFilters) {
  Corpus c;
  c.profiles.push_back(fixture::profile("a", Gender::Male, 30, fixture::repeat("x", 10)));
  c.profiles.push_back(fixture::profile("b", Gender::Other, 30, fixture::repeat("x", 10)));
  c.profiles.push_back(fixture::profile("c", Gender::Female, 30, fixture::repeat("x", 9)));
  c.profiles.push_back(fixture::profile("d", Gender::Female, 30, fixture::repeat("x", 12), false));
  auto e = fixture::profile("e", Gender::Female, 30, fixture::repeat("x", 12));
  e.reported_age.reset();
  c.profiles.push_back(e);
  EXPECT_EQ(training_population(c, Task::Gender, 10).size(), 2u);
  EXPECT_EQ(training_population(c, Task::Age, 10).size(), 2u);
}
