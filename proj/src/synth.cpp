#include "catfish/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "catfish/csv.hpp"
#include "catfish/error.hpp"
#include "catfish/rng.hpp"
#include "json.hpp"

namespace catfish {

using nlohmann::json;

namespace {

constexpr const char* kSyllables[] = {"ba", "de", "ki", "lo", "mu", "ra", "se", "ti",
                                      "vo", "za", "ne", "po", "gu", "fe", "ha", "ju"};
constexpr std::size_t kSyl = 16;

// Family prefixes start with letters no syllable starts with, so families never collide.
std::string pseudo_word(const std::string& prefix, std::size_t j, std::size_t syllables) {
  std::string w = prefix;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += kSyllables[j % kSyl];
    j /= kSyl;
  }
  return w;
}

constexpr std::size_t kNeutral = 240;
constexpr std::size_t kGenderPool = 24;
constexpr std::size_t kSlangPool = 30;
constexpr int kThresholds = kMaxAge - kMinAge;  // year boundaries
constexpr int kTokensPerThreshold = 3;

std::vector<std::string> family(const std::string& prefix, std::size_t n, std::size_t syl) {
  std::size_t span = 1;
  for (std::size_t s = 0; s < syl; ++s) span *= kSyl;
  // 7 is coprime to the span, so the indices stay distinct.
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(pseudo_word(prefix, (j * 7 + 3) % span, syl));
  return out;
}

const std::vector<std::string>& neutral_words() {
  static const std::vector<std::string> w = family("", kNeutral, 3);
  return w;
}
const std::vector<std::string>& male_words() {
  static const std::vector<std::string> w = family("qu", kGenderPool, 2);
  return w;
}
const std::vector<std::string>& female_words() {
  static const std::vector<std::string> w = family("wy", kGenderPool, 2);
  return w;
}
// Token j is written by people whose text-age exceeds 18.5 + j.
// Tokens j*kTokensPerThreshold.. mark boundary j.
const std::vector<std::string>& threshold_words() {
  static const std::vector<std::string> w = family("xa", kThresholds * kTokensPerThreshold, 2);
  return w;
}
const std::vector<std::string>& slang_words() {
  static const std::vector<std::string> w = [] {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < kSlangPool; ++j)
      out.push_back("c" + std::string(kSyllables[j % kSyl]) + std::to_string(2 + j % 7));
    return out;
  }();
  return w;
}

const std::vector<std::string> kCommonEnglish = {
    "i",    "my",    "me",   "you", "this", "that",  "great", "good", "nice",  "video",
    "love", "happy", "wow",  "so",  "very", "hot",   "sexy",  "the",  "and",   "thanks",
    "what", "why",   "how",  "is",  "mom",  "lovely"};
const std::vector<std::string> kCommonOther = {"merci", "tres", "bien", "danke", "sehr", "gut"};

const std::vector<std::string> kCountries = {"us", "gb", "de", "fr", "ca", "in", "br", "au"};
const std::vector<double> kCountryWeights = {0.32, 0.14, 0.10, 0.08, 0.08, 0.12, 0.10, 0.06};

struct Popularity {
  double friends, subscribers, subscriptions, views;
};
// Honest groups by true gender, and the two gender-lie groups.
constexpr Popularity kHonestFemale{396, 309, 106, 32150};
constexpr Popularity kHonestMale{185, 97, 142, 6098};
constexpr Popularity kMaleAsFemale{314, 150, 130, 16590};
constexpr Popularity kFemaleAsMale{151, 120, 120, 8719};

constexpr double kMeanAgeMale = 31, kMeanAgeFemale = 28;

std::uint64_t draw_count(Rng& rng, double mean, double sigma) {
  if (mean <= 0) return 0;
  return static_cast<std::uint64_t>(std::llround(rng.lognormal_with_mean(mean, sigma)));
}

Interest draw_interest(Rng& rng, Gender g) {
  if (rng.bernoulli(0.1)) return Interest::Unspecified;
  const std::vector<double> w = g == Gender::Male ? std::vector<double>{0.07, 0.85, 0.08}
                                                  : std::vector<double>{0.35, 0.045, 0.605};
  constexpr Interest opts[] = {Interest::Men, Interest::Women, Interest::Both};
  return opts[rng.categorical(w)];
}

std::pair<double, double> composition(Rng& rng, Gender reported) {
  const double male = std::clamp(rng.normal(reported == Gender::Female ? 0.72 : 0.6, 0.1), 0.0, 0.97);
  const double other = rng.uniform(0.0, 0.03);
  return {male, std::max(0.0, 1.0 - male - other)};
}

std::vector<Comment> draw_comments(Rng& rng, const SynthConfig& cfg, Gender true_gender,
                                   double text_age) {
  const double mean = cfg.comment_median * std::exp(0.5 * cfg.comment_sigma * cfg.comment_sigma);
  const auto n = static_cast<std::size_t>(draw_count(rng, mean, cfg.comment_sigma));
  if (n == 0) return {};
  std::vector<std::vector<std::string>> words(n);
  std::vector<long> copy_of(n, -1);
  std::vector<std::size_t> originals;
  for (std::size_t c = 0; c < n; ++c) {
    if (c > 0 && rng.bernoulli(cfg.duplicate_rate)) {
      copy_of[c] = static_cast<long>(rng.below(c));
      while (copy_of[copy_of[c]] >= 0) copy_of[c] = copy_of[copy_of[c]];
      continue;
    }
    originals.push_back(c);
    auto& w = words[c];
    const auto len = rng.between(3, 8);
    for (long i = 0; i < len; ++i) {
      const double r = rng.uniform();
      if (r < 0.35) {
        w.push_back(kCommonEnglish[rng.below(kCommonEnglish.size())]);
      } else if (r < 0.38) {
        w.push_back(kCommonOther[rng.below(kCommonOther.size())]);
      } else if (r < 0.40) {
        w.push_back(std::to_string(rng.between(1, 100)));
      } else {
        w.push_back(neutral_words()[rng.below(kNeutral)]);
      }
    }
    if (rng.bernoulli(cfg.gender_signal)) {
      const auto& pool = true_gender == Gender::Male ? male_words() : female_words();
      w.push_back(pool[rng.below(pool.size())]);
    }
    const double slang_rate = 0.6 * std::exp(-(text_age - kMinAge) / 12.0);
    if (rng.bernoulli(slang_rate)) w.push_back(slang_words()[rng.below(kSlangPool)]);
  }
  for (int j = 0; j < kThresholds; ++j) {
    if (text_age <= kMinAge + 0.5 + j) break;
    for (int r = 0; r < kTokensPerThreshold; ++r) {
      if (rng.bernoulli(cfg.age_signal)) {
        words[originals[rng.below(originals.size())]].push_back(
            threshold_words()[std::size_t(j * kTokensPerThreshold + r)]);
      }
    }
  }
  std::vector<Comment> out(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (copy_of[c] >= 0) continue;
    rng.shuffle(words[c]);
    std::string text;
    for (const auto& w : words[c]) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    if (rng.bernoulli(0.3)) text += rng.bernoulli(0.5) ? "!!" : " :)";
    out[c].text = std::move(text);
  }
  for (std::size_t c = 0; c < n; ++c)
    if (copy_of[c] >= 0) out[c] = out[copy_of[c]];
  return out;
}

int draw_age(Rng& rng, Gender g) {
  const double mean = (g == Gender::Male ? kMeanAgeMale : kMeanAgeFemale) - kMinAge;
  const double a = kMinAge + rng.lognormal_with_mean(mean, 0.55);
  return static_cast<int>(std::clamp<long>(std::lround(a), kMinAge, kMaxAge));
}

int shifted_age(Rng& rng, int age, Gender true_gender) {
  constexpr int kMinShift = 7, kMaxShift = 16;
  bool up = rng.bernoulli(true_gender == Gender::Male ? 0.75 : 0.5);
  if (up && age + kMinShift > kMaxAge) up = false;
  if (!up && age - kMinShift < kMinAge) up = true;
  const int room = up ? kMaxAge - age : age - kMinAge;
  const int shift = static_cast<int>(rng.between(kMinShift, std::min(kMaxShift, room)));
  return up ? age + shift : age - shift;
}

}  // namespace

void SynthConfig::validate() const {
  auto frac = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  if (n_profiles < 1) throw ConfigError("n_profiles must be at least 1");
  frac(verified_fraction, "verified_fraction");
  frac(catfish_fraction, "catfish_fraction");
  frac(male_share, "male_share");
  frac(age_signal, "age_signal");
  frac(gender_signal, "gender_signal");
  frac(duplicate_rate, "duplicate_rate");
  if (!(age_noise >= 0) || !std::isfinite(age_noise)) throw ConfigError("age_noise must be >= 0");
  if (!(comment_median > 0)) throw ConfigError("comment_median must be positive");
  if (!(comment_sigma >= 0)) throw ConfigError("comment_sigma must be >= 0");
  const auto verified = static_cast<std::size_t>(std::llround(double(n_profiles) * verified_fraction));
  const auto catfish = static_cast<std::size_t>(std::llround(double(n_profiles) * catfish_fraction));
  if (verified + catfish > n_profiles) {
    throw ConfigError("catfish quota exceeds the number of unverified profiles");
  }
}

std::string_view to_string(LieKind k) {
  switch (k) {
    case LieKind::Gender: return "gender";
    case LieKind::Age: return "age";
    case LieKind::Both: return "both";
  }
  return "gender";
}

std::optional<LieKind> parse_lie_kind(std::string_view s) {
  if (s == "gender") return LieKind::Gender;
  if (s == "age") return LieKind::Age;
  if (s == "both") return LieKind::Both;
  return std::nullopt;
}

const TruthRecord* GroundTruth::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

std::size_t GroundTruth::planted() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.catfish; }));
}

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_profiles;
  Rng plan_rng(derive_seed(cfg.seed, 1));

  // Quotas: verified first, catfish among the rest, then lie kinds.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  plan_rng.shuffle(order);
  const auto n_verified = static_cast<std::size_t>(std::llround(double(n) * cfg.verified_fraction));
  const auto n_catfish = static_cast<std::size_t>(std::llround(double(n) * cfg.catfish_fraction));
  const auto n_gender = static_cast<std::size_t>(std::llround(double(n_catfish) * 0.4));
  const auto n_age = static_cast<std::size_t>(std::llround(double(n_catfish) * 0.4));
  std::vector<bool> verified(n, false);
  std::vector<std::optional<LieKind>> lie(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    if (r < n_verified) {
      verified[i] = true;
    } else if (r < n_verified + n_catfish) {
      const std::size_t c = r - n_verified;
      lie[i] = c < n_gender ? LieKind::Gender : c < n_gender + n_age ? LieKind::Age : LieKind::Both;
    }
  }

  SynthOutput out;
  out.corpus.source = "synth:seed=" + std::to_string(cfg.seed);
  const int width = std::max<int>(6, static_cast<int>(std::to_string(n).size()));
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(cfg.seed, 1000 + i));
    Profile p;
    std::string num = std::to_string(i + 1);
    p.id = "u" + std::string(std::size_t(width) - num.size(), '0') + num;
    p.verified = verified[i];

    TruthRecord t;
    t.id = p.id;
    t.true_gender = rng.bernoulli(cfg.male_share) ? Gender::Male : Gender::Female;
    t.true_age = draw_age(rng, t.true_gender);
    t.catfish = lie[i].has_value();
    t.kind = lie[i];
    const bool gender_lie = t.kind == LieKind::Gender || t.kind == LieKind::Both;
    const bool age_lie = t.kind == LieKind::Age || t.kind == LieKind::Both;

    const Gender other = t.true_gender == Gender::Male ? Gender::Female : Gender::Male;
    p.reported_gender = gender_lie ? other : t.true_gender;
    p.reported_age = age_lie ? shifted_age(rng, t.true_age, t.true_gender) : t.true_age;

    p.interested_in = draw_interest(rng, t.true_gender);
    p.country = kCountries[rng.categorical(kCountryWeights)];
    const double rs = rng.uniform();
    p.relationship_status = rs < 0.5   ? RelationshipStatus::Single
                            : rs < 0.8 ? RelationshipStatus::InRelationship
                                       : RelationshipStatus::Unspecified;

    const Popularity& pop = gender_lie ? (t.true_gender == Gender::Male ? kMaleAsFemale : kFemaleAsMale)
                            : t.true_gender == Gender::Male ? kHonestMale
                                                            : kHonestFemale;
    const double mean_age = t.true_gender == Gender::Male ? kMeanAgeMale : kMeanAgeFemale;
    const double decline = std::exp(-0.031 * (t.true_age - mean_age));
    p.friend_count = draw_count(rng, pop.friends * decline, 0.8);
    p.subscriber_count = draw_count(rng, pop.subscribers, 0.8);
    p.subscription_count = draw_count(rng, pop.subscriptions, 0.8);
    p.profile_views = draw_count(rng, pop.views, 0.8);
    p.videos_watched = draw_count(rng, 150, 1.0);
    p.videos_posted = rng.bernoulli(0.7) ? 0 : draw_count(rng, 4, 1.0);
    if (p.friend_count > 0) {
      auto [m, f] = composition(rng, p.reported_gender);
      p.pct_male_friends = m;
      p.pct_female_friends = f;
    }
    if (p.subscriber_count > 0) {
      auto [m, f] = composition(rng, p.reported_gender);
      p.pct_male_subscribers = m;
      p.pct_female_subscribers = f;
    }

    const double text_age = t.true_age + rng.normal(0.0, cfg.age_noise);
    p.comments = draw_comments(rng, cfg, t.true_gender, text_age);

    out.corpus.profiles.push_back(std::move(p));
    out.truth.records.push_back(std::move(t));
  }
  return out;
}

LexiconSet synthetic_lexicon() {
  LexiconSet lex = demo_lexicon();
  auto& en = *lex.dictionaries[static_cast<std::size_t>(Language::English)];
  for (const auto* fam : {&neutral_words(), &male_words(), &female_words(), &threshold_words()})
    en.insert(fam->begin(), fam->end());
  en.insert(kCommonEnglish.begin(), kCommonEnglish.end());
  return lex;
}

void write_truth(std::ostream& out, const GroundTruth& truth) {
  for (const auto& r : truth.records) {
    json j;
    j["id"] = r.id;
    j["true_gender"] = to_string(r.true_gender);
    j["true_age"] = r.true_age;
    j["catfish"] = r.catfish;
    j["kind"] = r.kind ? json(to_string(*r.kind)) : json(nullptr);
    out << j.dump() << '\n';
  }
}

GroundTruth read_truth(std::istream& in) {
  GroundTruth t;
  std::string line;
  std::size_t no = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      TruthRecord r;
      r.id = j.at("id").get<std::string>();
      auto g = parse_gender(j.at("true_gender").get<std::string>());
      if (!g) throw ValidationError("unknown true_gender", no);
      r.true_gender = *g;
      r.true_age = j.at("true_age").get<int>();
      r.catfish = j.at("catfish").get<bool>();
      if (!j.at("kind").is_null()) {
        r.kind = parse_lie_kind(j.at("kind").get<std::string>());
        if (!r.kind) throw ValidationError("unknown lie kind", no);
      }
      if (r.catfish != r.kind.has_value()) throw ValidationError("catfish and kind disagree", no);
      if (!seen.insert(r.id).second) throw ValidationError("duplicate id " + r.id, no);
      t.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed truth record: ") + e.what(), no);
    }
  }
  return t;
}

void save_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_truth(out, truth);
}

GroundTruth load_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open truth file " + path.string());
  return read_truth(in);
}

namespace {

void finish(DetectionScore& s) {
  s.precision = s.flagged ? double(s.hits) / double(s.flagged) : 0.0;
  s.recall = s.planted ? double(s.hits) / double(s.planted) : 0.0;
}

void tally(DetectionScore& s, bool planted, bool flagged) {
  s.planted += planted;
  s.flagged += flagged;
  s.hits += planted && flagged;
}

}  // namespace

OracleReport oracle_eval(const Corpus& corpus, const GroundTruth& truth,
                         const std::vector<CatfishVerdict>& verdicts) {
  std::unordered_map<std::string, const TruthRecord*> by_id;
  for (const auto& r : truth.records) by_id.emplace(r.id, &r);
  std::unordered_set<std::string> corpus_ids;
  for (const auto& p : corpus.profiles) corpus_ids.insert(p.id);

  OracleReport rep;
  for (LieKind k : {LieKind::Gender, LieKind::Age, LieKind::Both}) rep.by_kind[k];
  std::unordered_set<std::string> covered;
  for (const auto& v : verdicts) {
    if (!corpus_ids.count(v.id)) throw ValidationError("verdict id '" + v.id + "' not in corpus");
    auto it = by_id.find(v.id);
    if (it == by_id.end()) throw ValidationError("verdict id '" + v.id + "' not in ground truth");
    if (!v.eligible) continue;
    covered.insert(v.id);
    const TruthRecord& t = *it->second;
    const bool g_lie = t.kind == LieKind::Gender || t.kind == LieKind::Both;
    const bool a_lie = t.kind == LieKind::Age || t.kind == LieKind::Both;
    tally(rep.overall, t.catfish, v.flagged());
    tally(rep.gender, g_lie, v.gender_flag);
    tally(rep.age, a_lie, v.age_flag);
    for (auto& [k, s] : rep.by_kind) tally(s, t.kind == k, t.kind == k && v.flagged());
  }
  rep.covered = covered.size();
  for (const auto& r : truth.records)
    if (r.catfish && corpus_ids.count(r.id) && !covered.count(r.id)) ++rep.planted_uncovered;
  finish(rep.overall);
  finish(rep.gender);
  finish(rep.age);
  for (auto& [k, s] : rep.by_kind) {
    s.flagged = s.hits;  // per-kind rows report recall only
    finish(s);
  }
  return rep;
}

void write_oracle_csv(std::ostream& out, const OracleReport& r) {
  csv::write_row(out, {"scope", "planted", "flagged", "hits", "precision", "recall"});
  auto row = [&](const std::string& name, const DetectionScore& s) {
    csv::write_row(out, {name, std::to_string(s.planted), std::to_string(s.flagged),
                         std::to_string(s.hits), csv::number(s.precision), csv::number(s.recall)});
  };
  row("overall", r.overall);
  row("gender_flag", r.gender);
  row("age_flag", r.age);
  for (const auto& [k, s] : r.by_kind) row("kind_" + std::string(to_string(k)), s);
}

}  // namespace catfish
