#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "catfish/analytics.hpp"
#include "catfish/error.hpp"
#include "fixtures.hpp"

using namespace catfish;

namespace {

Corpus demo_corpus() {
  Corpus c;
  const Interest interests[] = {Interest::Men, Interest::Women, Interest::Both, Interest::Unspecified};
  for (int i = 0; i < 24; ++i) {
    auto p = fixture::profile("p" + std::to_string(i), i % 3 ? Gender::Male : Gender::Female,
                              18 + (i * 7) % 43, {"x"}, i % 5 == 0);
    p.friend_count = std::uint64_t(5 * i + 1);
    p.profile_views = std::uint64_t(100 * i);
    p.subscriber_count = std::uint64_t(i);
    p.subscription_count = std::uint64_t(2 * i);
    p.interested_in = interests[i % 4];
    c.profiles.push_back(p);
  }
  return c;
}

std::vector<CatfishVerdict> demo_verdicts(const Corpus& c) {
  std::vector<CatfishVerdict> out;
  int i = 0;
  for (const auto& p : c.profiles) {
    CatfishVerdict v;
    v.id = p.id;
    v.eligible = true;
    v.reported_gender = p.reported_gender;
    v.reported_age = p.reported_age;
    v.predicted_gender = i % 4 == 0 ? Gender::Male : p.reported_gender;
    v.gender_flag = v.predicted_gender != p.reported_gender;
    v.predicted_age = 18.0 + (i * 13) % 40 + 0.25;
    v.age_delta = *v.predicted_age - *p.reported_age;
    v.age_flag = std::abs(*v.age_delta) > 5.581;
    out.push_back(v);
    ++i;
  }
  return out;
}

}  // namespace

TEST(Histogram, CountsSumAndDensityIntegrates) {
  const std::vector<double> vals{18, 18.5, 19, 25, 60, 61, 17};
  const auto h = histogram("h", "age", "all", vals, make_edges(18, 61, 1));
  EXPECT_EQ(h.bins(), 43u);
  EXPECT_EQ(h.total(), 5u);  // 61 and 17 fall outside
  EXPECT_EQ(h.counts[0], 2u);
  const auto d = histogram("d", "age", "all", vals, make_edges(18, 61, 1), true);
  double integral = 0;
  for (std::size_t i = 0; i < d.bins(); ++i) integral += d.values[i] * (d.edges[i + 1] - d.edges[i]);
  EXPECT_NEAR(integral, 1.0, 1e-9);
}

TEST(Demographics, SingleAgeSingleBin) {
  Corpus c;
  for (int i = 0; i < 5; ++i) c.profiles.push_back(fixture::profile("a" + std::to_string(i), Gender::Female, 25, {}));
  const auto r = demographic_report(c);
  const auto& h = r.age_histogram.at(Gender::Female);
  std::size_t occupied = 0;
  for (auto n : h.counts) occupied += n > 0;
  EXPECT_EQ(occupied, 1u);
  EXPECT_EQ(h.total(), 5u);
}

TEST(Demographics, MeansMatchBruteForce) {
  const auto c = demo_corpus();
  const auto r = demographic_report(c);
  for (Gender g : {Gender::Male, Gender::Female}) {
    double age = 0, friends = 0, n = 0;
    for (const auto& p : c.profiles) {
      if (p.reported_gender != g) continue;
      age += *p.reported_age;
      friends += double(p.friend_count);
      ++n;
    }
    EXPECT_NEAR(*r.means.at(g).mean_age, age / n, 1e-12);
    EXPECT_NEAR(*r.means.at(g).mean_friends, friends / n, 1e-12);
    EXPECT_EQ(r.age_histogram.at(g).total(), std::size_t(n));
  }
}

TEST(Popularity, GroupMeansMatchBruteForce) {
  const auto c = demo_corpus();
  const auto v = demo_verdicts(c);
  const auto r = popularity_report(c, v);
  ASSERT_EQ(r.groups.size(), 4u);
  std::map<std::pair<Gender, bool>, std::pair<double, double>> sums;
  std::map<std::pair<Gender, bool>, std::size_t> counts;
  for (std::size_t i = 0; i < c.profiles.size(); ++i) {
    const auto key = std::make_pair(*v[i].predicted_gender, v[i].gender_flag);
    sums[key].first += double(c.profiles[i].profile_views);
    sums[key].second += double(c.profiles[i].friend_count);
    ++counts[key];
  }
  for (const auto& g : r.groups) {
    const auto key = std::make_pair(g.predicted_gender, g.gender_flag);
    EXPECT_EQ(g.count, counts[key]);
    if (g.count) {
      EXPECT_NEAR(*g.mean_views, sums[key].first / double(g.count), 1e-9);
      EXPECT_NEAR(*g.mean_friends, sums[key].second / double(g.count), 1e-9);
    }
  }
  EXPECT_THROW(popularity_report(c, {}), ConfigError);
  auto stray = v;
  stray[0].id = "nobody";
  EXPECT_THROW(popularity_report(c, stray), ConfigError);
}

TEST(Popularity, NoFlagsLeavesFlaggedGroupsEmpty) {
  const auto c = demo_corpus();
  auto v = demo_verdicts(c);
  for (auto& x : v) {
    x.predicted_gender = x.reported_gender;
    x.gender_flag = false;
  }
  const auto r = popularity_report(c, v);
  EXPECT_EQ(r.find(Gender::Male, true)->count, 0u);
  EXPECT_EQ(r.find(Gender::Female, true)->count, 0u);
  EXPECT_GT(r.find(Gender::Male, false)->count, 0u);
  EXPECT_GT(r.find(Gender::Female, false)->count, 0u);
}

TEST(InterestGain, SharesPartition) {
  const auto c = demo_corpus();
  const auto r = interest_gain_report(c, demo_verdicts(c));
  for (Gender g : {Gender::Male, Gender::Female}) {
    const auto& s = r.shares.at(g);
    double total = 0;
    for (const auto& [i, v] : s.shares) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  for (const auto& s : r.friends_by_age) {
    EXPECT_EQ(s.kind, BinValue::Mean);
    EXPECT_EQ(s.edges.front(), 18.0);
    EXPECT_EQ(s.edges[1] - s.edges[0], 5.0);
  }
}

TEST(InterestGain, SingleInterestDegenerate) {
  auto c = demo_corpus();
  for (auto& p : c.profiles) p.interested_in = Interest::Women;
  const auto r = interest_gain_report(c, demo_verdicts(c));
  EXPECT_DOUBLE_EQ(r.shares.at(Gender::Male).shares.at(Interest::Women), 1.0);
  EXPECT_DOUBLE_EQ(r.shares.at(Gender::Male).shares.at(Interest::Both), 0.0);
}

TEST(AgeDiff, DensitiesIntegrateAndEmptyCases) {
  const auto c = demo_corpus();
  const auto v = demo_verdicts(c);
  const auto r = age_diff_report(v);
  for (const auto& [g, h] : r.delta_density) {
    double integral = 0;
    for (std::size_t i = 0; i < h.bins(); ++i) integral += h.values[i] * (h.edges[i + 1] - h.edges[i]);
    EXPECT_NEAR(integral, 1.0, 1e-9);
    std::size_t n = 0;
    for (const auto& x : v) n += x.reported_gender == g && x.age_delta;
    EXPECT_EQ(h.total(), n);
  }
  EXPECT_TRUE(age_diff_report({}).delta_density.empty());
  auto honest = v;
  for (auto& x : honest) x.age_flag = false;
  EXPECT_TRUE(age_diff_report(honest).flagged_reported_age.empty());
}

TEST(Reports, CsvIsByteStable) {
  const auto c = demo_corpus();
  const auto v = demo_verdicts(c);
  auto render = [&] {
    std::ostringstream a, b, d, e, f, g, h;
    write_demographic_csv(a, b, demographic_report(c));
    write_popularity_csv(d, e, popularity_report(c, v));
    write_interest_gain_csv(f, g, interest_gain_report(c, v));
    write_age_diff_csv(h, age_diff_report(v));
    return a.str() + b.str() + d.str() + e.str() + f.str() + g.str() + h.str();
  };
  EXPECT_EQ(render(), render());
}
