#include "catfish/detector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "catfish/csv.hpp"
#include "catfish/error.hpp"

namespace catfish {

void DetectorConfig::validate() const {
  if (!(age_threshold > 0) || !std::isfinite(age_threshold)) {
    throw ConfigError("age threshold must be a positive number of years");
  }
}

namespace {

CatfishVerdict base_verdict(const Profile& p, const DetectorConfig& config) {
  config.validate();
  CatfishVerdict v;
  v.id = p.id;
  v.reported_gender = p.reported_gender;
  v.reported_age = p.reported_age;
  v.eligible = p.comments.size() >= config.min_comments;
  return v;
}

void apply_rule(CatfishVerdict& v, Gender predicted, double predicted_age,
                const DetectorConfig& config) {
  v.predicted_gender = predicted;
  v.predicted_age = predicted_age;
  v.gender_flag = gender_label(v.reported_gender) != 0 && predicted != v.reported_gender;
  if (v.reported_age) {
    v.age_delta = predicted_age - double(*v.reported_age);
    v.age_flag = std::abs(*v.age_delta) > config.age_threshold;
  }
}

}  // namespace

CatfishVerdict flag_profile(const Profile& p, const GenderPredictor& gender,
                            const AgePredictor& age, const DetectorConfig& config) {
  check_fingerprint(gender.spec, gender.model.spec_fingerprint);
  check_fingerprint(age.spec, age.model.spec_fingerprint);
  auto v = base_verdict(p, config);
  if (!v.eligible) return v;
  apply_rule(v, gender.predict(p), age.predict(p), config);
  return v;
}

CatfishVerdict flag_profile(const Profile& p, const ClassifierModel& gender,
                            const RegressorModel& age, const FeatureSpec& spec,
                            const DetectorConfig& config) {
  check_fingerprint(spec, gender.spec_fingerprint);
  check_fingerprint(spec, age.spec_fingerprint);
  auto v = base_verdict(p, config);
  if (!v.eligible) return v;
  const auto x = spec.assemble(p);
  apply_rule(v, predict_gender(gender, x), predict_age(age, x), config);
  return v;
}

DetectionSummary summarize(const std::vector<CatfishVerdict>& verdicts) {
  DetectionSummary s;
  for (Gender g : {Gender::Male, Gender::Female, Gender::Other}) s.by_reported_gender[g];
  std::map<Gender, std::pair<double, std::size_t>> age_sum;
  std::vector<double> deltas;
  for (const auto& v : verdicts) {
    if (!v.eligible) continue;
    ++s.scanned;
    auto& g = s.by_reported_gender[v.reported_gender];
    ++g.scanned;
    if (v.flagged()) {
      ++s.flagged;
      ++g.flagged;
      if (v.reported_age) {
        age_sum[v.reported_gender].first += *v.reported_age;
        ++age_sum[v.reported_gender].second;
      }
    }
    g.gender_flagged += v.gender_flag;
    g.age_flagged += v.age_flag;
    if (v.age_delta) deltas.push_back(*v.age_delta);
  }
  for (auto& [gender, g] : s.by_reported_gender) {
    g.rate = g.scanned ? double(g.flagged) / double(g.scanned) : 0.0;
    const auto it = age_sum.find(gender);
    if (it != age_sum.end() && it->second.second)
      g.mean_flagged_reported_age = it->second.first / double(it->second.second);
  }
  if (!deltas.empty()) {
    auto& d = s.age_delta;
    d.count = deltas.size();
    d.min = *std::min_element(deltas.begin(), deltas.end());
    d.max = *std::max_element(deltas.begin(), deltas.end());
    for (double x : deltas) {
      d.mean += x;
      d.mean_abs += std::abs(x);
    }
    d.mean /= double(d.count);
    d.mean_abs /= double(d.count);
    for (double x : deltas) d.sd += (x - d.mean) * (x - d.mean);
    d.sd = std::sqrt(d.sd / double(d.count));
  }
  return s;
}

ScanResult scan_corpus(const Corpus& corpus, const GenderPredictor& gender,
                       const AgePredictor& age, const DetectorConfig& config) {
  config.validate();
  check_fingerprint(gender.spec, gender.model.spec_fingerprint);
  check_fingerprint(age.spec, age.model.spec_fingerprint);
  ScanResult r;
  for (const auto& p : corpus.profiles) {
    if (p.verified || p.comments.size() < config.min_comments) continue;
    r.verdicts.push_back(flag_profile(p, gender, age, config));
  }
  if (r.verdicts.empty()) r.warnings.push_back("no eligible unverified profiles to scan");
  r.summary = summarize(r.verdicts);
  return r;
}

namespace {

const std::vector<std::string> kVerdictHeader{
    "id",          "eligible",      "reported_gender", "predicted_gender", "gender_flag",
    "reported_age", "predicted_age", "age_delta",       "age_flag"};

bool parse_bool(const std::string& s, std::size_t line) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ValidationError("expected true/false, got '" + s + "'", line);
}

std::optional<double> parse_real(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  double v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("expected a number, got '" + s + "'", line);
  }
  return v;
}

std::optional<Gender> parse_gender_field(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  auto g = parse_gender(s);
  if (!g) throw ValidationError("unknown gender '" + s + "'", line);
  return g;
}

}  // namespace

void write_verdicts_csv(std::ostream& out, const std::vector<CatfishVerdict>& verdicts) {
  csv::write_row(out, kVerdictHeader);
  for (const auto& v : verdicts) {
    csv::write_row(out, {v.id, csv::boolean(v.eligible), std::string(to_string(v.reported_gender)),
                         v.predicted_gender ? std::string(to_string(*v.predicted_gender)) : "",
                         csv::boolean(v.gender_flag),
                         v.reported_age ? std::to_string(*v.reported_age) : "",
                         csv::number(v.predicted_age), csv::number(v.age_delta),
                         csv::boolean(v.age_flag)});
  }
}

std::vector<CatfishVerdict> read_verdicts_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty() || rows[0] != kVerdictHeader) {
    throw ValidationError("verdict file lacks the expected header", 1);
  }
  std::vector<CatfishVerdict> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != kVerdictHeader.size()) {
      throw ValidationError("expected " + std::to_string(kVerdictHeader.size()) + " fields", line);
    }
    CatfishVerdict v;
    v.id = row[0];
    v.eligible = parse_bool(row[1], line);
    auto rg = parse_gender_field(row[2], line);
    if (!rg) throw ValidationError("missing reported_gender", line);
    v.reported_gender = *rg;
    v.predicted_gender = parse_gender_field(row[3], line);
    v.gender_flag = parse_bool(row[4], line);
    if (auto a = parse_real(row[5], line)) v.reported_age = int(*a);
    v.predicted_age = parse_real(row[6], line);
    v.age_delta = parse_real(row[7], line);
    v.age_flag = parse_bool(row[8], line);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CatfishVerdict> load_verdicts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open verdict file " + path.string());
  return read_verdicts_csv(in);
}

void write_summary_csv(std::ostream& out, const DetectionSummary& s) {
  csv::write_row(out, {"reported_gender", "scanned", "flagged", "rate", "gender_flagged",
                       "age_flagged", "mean_flagged_reported_age"});
  for (const auto& [g, r] : s.by_reported_gender) {
    csv::write_row(out, {std::string(to_string(g)), std::to_string(r.scanned),
                         std::to_string(r.flagged), csv::number(r.rate),
                         std::to_string(r.gender_flagged), std::to_string(r.age_flagged),
                         csv::number(r.mean_flagged_reported_age)});
  }
}

}  // namespace catfish
