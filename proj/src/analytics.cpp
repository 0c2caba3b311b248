#include "catfish/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "catfish/csv.hpp"
#include "catfish/error.hpp"

namespace catfish {

namespace {

constexpr Gender kGenders[] = {Gender::Female, Gender::Male, Gender::Other};
constexpr Interest kInterests[] = {Interest::Men, Interest::Women, Interest::Both};

struct Mean {
  double sum = 0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    ++n;
  }
  std::optional<double> get() const {
    return n ? std::optional<double>(sum / double(n)) : std::nullopt;
  }
};

std::vector<double> age_edges(double width) {
  return make_edges(kMinAge, kMaxAge + 1, width);
}

std::unordered_map<std::string, const Profile*> index_profiles(const Corpus& corpus) {
  std::unordered_map<std::string, const Profile*> idx;
  for (const auto& p : corpus.profiles) idx.emplace(p.id, &p);
  return idx;
}

const Profile& lookup(const std::unordered_map<std::string, const Profile*>& idx,
                      const std::string& id) {
  auto it = idx.find(id);
  if (it == idx.end()) throw ConfigError("verdict for unknown profile id '" + id + "'");
  return *it->second;
}

}  // namespace

std::string_view to_string(BinValue v) {
  switch (v) {
    case BinValue::Count: return "count";
    case BinValue::Density: return "density";
    case BinValue::Mean: return "mean";
  }
  return "count";
}

std::size_t BinnedSeries::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<double> make_edges(double lo, double hi, double width) {
  if (!(width > 0) || !(hi > lo)) throw ConfigError("bad bin range");
  std::vector<double> e;
  const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-12));
  for (std::size_t i = 0; i <= bins; ++i) e.push_back(lo + width * double(i));
  return e;
}

BinnedSeries histogram(std::string name, std::string dimension, std::string group,
                       const std::vector<double>& values, std::vector<double> edges,
                       bool density) {
  BinnedSeries s;
  s.name = std::move(name);
  s.dimension = std::move(dimension);
  s.group = std::move(group);
  s.kind = density ? BinValue::Density : BinValue::Count;
  s.edges = std::move(edges);
  const std::size_t bins = s.edges.size() - 1;
  s.counts.assign(bins, 0);
  for (double v : values) {
    if (v < s.edges.front() || v >= s.edges.back()) continue;
    auto it = std::upper_bound(s.edges.begin(), s.edges.end(), v);
    ++s.counts[std::size_t(it - s.edges.begin()) - 1];
  }
  const double n = double(s.total());
  s.values.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double c = double(s.counts[i]);
    s.values[i] = density ? (n > 0 ? c / (n * (s.edges[i + 1] - s.edges[i])) : 0.0) : c;
  }
  return s;
}

DemographicReport demographic_report(const Corpus& corpus) {
  DemographicReport r;
  std::map<Gender, std::vector<double>> ages;
  std::map<Gender, Mean> age, friends, subs, subscriptions, views;
  for (Gender g : kGenders) {
    ages[g];
    r.means[g];
    for (Interest i : kInterests) r.interest_counts[g][i] = 0;
  }
  for (const auto& p : corpus.profiles) {
    const Gender g = p.reported_gender;
    ++r.means[g].count;
    if (p.reported_age) {
      ages[g].push_back(*p.reported_age);
      age[g].add(*p.reported_age);
    }
    if (p.interested_in != Interest::Unspecified) ++r.interest_counts[g][p.interested_in];
    friends[g].add(double(p.friend_count));
    subs[g].add(double(p.subscriber_count));
    subscriptions[g].add(double(p.subscription_count));
    views[g].add(double(p.profile_views));
  }
  for (Gender g : kGenders) {
    r.age_histogram[g] = histogram("age_histogram", "reported_age", std::string(to_string(g)),
                                   ages[g], age_edges(1));
    auto& m = r.means[g];
    m.mean_age = age[g].get();
    m.mean_friends = friends[g].get();
    m.mean_subscribers = subs[g].get();
    m.mean_subscriptions = subscriptions[g].get();
    m.mean_views = views[g].get();
  }
  return r;
}

const PopularityGroup* PopularityReport::find(Gender predicted, bool flagged) const {
  for (const auto& g : groups)
    if (g.predicted_gender == predicted && g.gender_flag == flagged) return &g;
  return nullptr;
}

PopularityReport popularity_report(const Corpus& corpus,
                                   const std::vector<CatfishVerdict>& verdicts) {
  if (verdicts.empty()) throw ConfigError("popularity report needs detector verdicts");
  const auto idx = index_profiles(corpus);
  std::map<std::pair<Gender, bool>, std::pair<Mean, Mean>> acc;
  PopularityReport r;
  for (const auto& v : verdicts) {
    const Profile& p = lookup(idx, v.id);
    if (!v.predicted_gender) continue;
    auto& [views, friends] = acc[{*v.predicted_gender, v.gender_flag}];
    views.add(double(p.profile_views));
    friends.add(double(p.friend_count));
    r.points.push_back({v.id, *v.predicted_gender, v.gender_flag, p.friend_count, p.profile_views});
  }
  for (Gender g : {Gender::Female, Gender::Male}) {
    for (bool flagged : {false, true}) {
      PopularityGroup grp;
      grp.predicted_gender = g;
      grp.gender_flag = flagged;
      auto it = acc.find({g, flagged});
      if (it != acc.end()) {
        grp.count = it->second.first.n;
        grp.mean_views = it->second.first.get();
        grp.mean_friends = it->second.second.get();
      }
      r.groups.push_back(grp);
    }
  }
  return r;
}

InterestGainReport interest_gain_report(const Corpus& corpus,
                                        const std::vector<CatfishVerdict>& verdicts) {
  if (verdicts.empty()) throw ConfigError("interest report needs detector verdicts");
  const auto idx = index_profiles(corpus);
  InterestGainReport r;

  for (Gender g : kGenders) r.shares[g];
  for (const auto& p : corpus.profiles) {
    if (p.interested_in == Interest::Unspecified) continue;
    auto& s = r.shares[p.reported_gender];
    ++s.specified;
    ++s.counts[p.interested_in];
  }
  for (auto& [g, s] : r.shares) {
    for (Interest i : kInterests) {
      s.counts[i];
      s.shares[i] = s.specified ? double(s.counts[i]) / double(s.specified) : 0.0;
    }
  }

  const auto edges = age_edges(5);
  struct Cell {
    std::vector<Mean> bins;
  };
  std::map<std::tuple<Gender, Interest, bool>, Cell> cells;
  for (const auto& v : verdicts) {
    const Profile& p = lookup(idx, v.id);
    if (!v.predicted_gender || !p.reported_age || p.interested_in == Interest::Unspecified) continue;
    auto& cell = cells[{*v.predicted_gender, p.interested_in, v.gender_flag}];
    cell.bins.resize(edges.size() - 1);
    const double a = *p.reported_age;
    auto it = std::upper_bound(edges.begin(), edges.end(), a);
    cell.bins[std::size_t(it - edges.begin()) - 1].add(double(p.friend_count));
  }
  for (const auto& [key, cell] : cells) {
    const auto& [g, interest, flagged] = key;
    BinnedSeries s;
    s.name = "friends_by_age";
    s.dimension = "reported_age";
    s.group = std::string(to_string(g)) + "/" + std::string(to_string(interest)) + "/" +
              (flagged ? "flagged" : "honest");
    s.kind = BinValue::Mean;
    s.edges = edges;
    for (const auto& m : cell.bins) {
      s.counts.push_back(m.n);
      s.values.push_back(m.get().value_or(0.0));
    }
    r.friends_by_age.push_back(std::move(s));
  }
  return r;
}

AgeDiffReport age_diff_report(const std::vector<CatfishVerdict>& verdicts) {
  AgeDiffReport r;
  std::map<Gender, std::vector<double>> deltas, flagged;
  for (const auto& v : verdicts) {
    if (v.age_delta) deltas[v.reported_gender].push_back(*v.age_delta);
    if (v.age_flag && v.reported_age) flagged[v.reported_gender].push_back(*v.reported_age);
  }
  for (auto& [g, d] : deltas) {
    const double lo = std::floor(*std::min_element(d.begin(), d.end()));
    double hi = std::floor(*std::max_element(d.begin(), d.end())) + 1;
    r.delta_density[g] = histogram("age_delta_density", "predicted_minus_reported",
                                   std::string(to_string(g)), d, make_edges(lo, hi, 1), true);
  }
  for (auto& [g, a] : flagged) {
    r.flagged_reported_age[g] = histogram("flagged_reported_age", "reported_age",
                                          std::string(to_string(g)), a, age_edges(1));
    Mean m;
    for (double x : a) m.add(x);
    r.mean_flagged_reported_age[g] = m.get();
  }
  return r;
}

void write_series_csv(std::ostream& out, const std::vector<const BinnedSeries*>& series) {
  csv::write_row(out, {"series", "group", "dimension", "bin_lo", "bin_hi", "kind", "count", "value"});
  for (const auto* s : series) {
    for (std::size_t i = 0; i < s->bins(); ++i) {
      csv::write_row(out, {s->name, s->group, s->dimension, csv::number(s->edges[i]),
                           csv::number(s->edges[i + 1]), std::string(to_string(s->kind)),
                           std::to_string(s->counts[i]), csv::number(s->values[i])});
    }
  }
}

void write_demographic_csv(std::ostream& series_out, std::ostream& table_out,
                           const DemographicReport& r) {
  std::vector<const BinnedSeries*> s;
  for (const auto& [g, h] : r.age_histogram) s.push_back(&h);
  write_series_csv(series_out, s);
  csv::write_row(table_out, {"gender", "count", "mean_age", "mean_friends", "mean_subscribers",
                             "mean_subscriptions", "mean_views", "interest_men",
                             "interest_women", "interest_both"});
  for (const auto& [g, m] : r.means) {
    const auto& ic = r.interest_counts.at(g);
    csv::write_row(table_out,
                   {std::string(to_string(g)), std::to_string(m.count), csv::number(m.mean_age),
                    csv::number(m.mean_friends), csv::number(m.mean_subscribers),
                    csv::number(m.mean_subscriptions), csv::number(m.mean_views),
                    std::to_string(ic.at(Interest::Men)), std::to_string(ic.at(Interest::Women)),
                    std::to_string(ic.at(Interest::Both))});
  }
}

void write_popularity_csv(std::ostream& groups_out, std::ostream& points_out,
                          const PopularityReport& r) {
  csv::write_row(groups_out, {"predicted_gender", "gender_flag", "count", "mean_views", "mean_friends"});
  for (const auto& g : r.groups) {
    csv::write_row(groups_out, {std::string(to_string(g.predicted_gender)),
                                csv::boolean(g.gender_flag), std::to_string(g.count),
                                csv::number(g.mean_views), csv::number(g.mean_friends)});
  }
  csv::write_row(points_out, {"id", "predicted_gender", "gender_flag", "friends", "views"});
  for (const auto& p : r.points) {
    csv::write_row(points_out, {p.id, std::string(to_string(p.predicted_gender)),
                                csv::boolean(p.gender_flag), std::to_string(p.friends),
                                std::to_string(p.views)});
  }
}

void write_interest_gain_csv(std::ostream& series_out, std::ostream& shares_out,
                             const InterestGainReport& r) {
  std::vector<const BinnedSeries*> s;
  for (const auto& x : r.friends_by_age) s.push_back(&x);
  write_series_csv(series_out, s);
  csv::write_row(shares_out, {"reported_gender", "specified", "interest", "count", "share"});
  for (const auto& [g, sh] : r.shares) {
    for (Interest i : kInterests) {
      csv::write_row(shares_out, {std::string(to_string(g)), std::to_string(sh.specified),
                                  std::string(to_string(i)), std::to_string(sh.counts.at(i)),
                                  csv::number(sh.shares.at(i))});
    }
  }
}

void write_age_diff_csv(std::ostream& out, const AgeDiffReport& r) {
  std::vector<const BinnedSeries*> s;
  for (const auto& [g, h] : r.delta_density) s.push_back(&h);
  for (const auto& [g, h] : r.flagged_reported_age) s.push_back(&h);
  write_series_csv(out, s);
}

}  // namespace catfish
