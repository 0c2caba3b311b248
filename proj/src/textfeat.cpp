#include "catfish/textfeat.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "catfish/error.hpp"

namespace catfish {

namespace {

// Decodes one code point; invalid sequences yield U+FFFD and consume one byte.
char32_t decode(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + extra >= s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += extra + 1;
  return cp;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  if (c == 0xFFFD) return false;
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0xFF00 && c <= 0xFF0F) return false;
  if (c >= 0x1F000) return false;  // emoji and pictographs
  return true;
}

char32_t fold(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c == 0x178) return 0xFF;
  if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x138 && c != 0x149 && c != 0x17F) {
    // Latin Extended-A pairs upper/lower as even/odd, with a shifted run in
    // 0x139..0x148 and 0x179..0x17E.
    const bool shifted = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (shifted) return (c % 2 == 1) ? c + 1 : c;
    return (c % 2 == 0) ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

bool is_numeric(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower_ascii(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return s;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode(text, i);
    if (is_word_char(cp)) {
      encode(fold(cp), current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> profile_tokens(const Profile& p) {
  std::vector<std::string> out;
  for (const auto& c : p.comments) {
    auto t = tokenize(c.text);
    out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::size_t min_df, std::string built_from)
    : terms_(std::move(terms)), min_df_(min_df), built_from_(std::move(built_from)) {
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const Profile* const> profiles, std::size_t min_df,
                            std::string built_from) {
  if (profiles.empty()) throw ConfigError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, std::size_t> df;
  bool any = false;
  for (const Profile* p : profiles) {
    std::unordered_set<std::string> seen;
    for (auto& t : profile_tokens(*p)) seen.insert(std::move(t));
    any = any || !seen.empty();
    for (const auto& t : seen) ++df[t];
  }
  if (!any) throw ConfigError("cannot build a vocabulary: no comment tokens");
  std::vector<std::string> terms;
  for (const auto& [term, count] : df) {
    if (count >= min_df) terms.push_back(term);
  }
  return Vocabulary(std::move(terms), min_df, std::move(built_from));
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df) {
  std::vector<const Profile*> ptrs;
  ptrs.reserve(corpus.size());
  for (const auto& p : corpus.profiles) ptrs.push_back(&p);
  return build_vocabulary(ptrs, min_df, corpus.source);
}

bool LexiconCategory::matches(std::string_view token) const {
  if (words.contains(std::string(token))) return true;
  return std::any_of(prefixes.begin(), prefixes.end(),
                     [&](const std::string& pre) { return token.starts_with(pre); });
}

std::string_view language_code(Language l) {
  switch (l) {
    case Language::English: return "en";
    case Language::French: return "fr";
    case Language::German: return "de";
  }
  return "en";
}

bool LexiconSet::has_all_dictionaries() const {
  return std::all_of(dictionaries.begin(), dictionaries.end(),
                     [](const auto& d) { return d.has_value(); });
}

bool LexiconSet::in_any_dictionary(std::string_view token) const {
  const std::string t(token);
  return std::any_of(dictionaries.begin(), dictionaries.end(),
                     [&](const auto& d) { return d && d->contains(t); });
}

LexiconSet parse_lexicon(std::istream& in) {
  LexiconSet lex;
  LexiconCategory* category = nullptr;
  std::unordered_set<std::string>* dict = nullptr;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    if (text.front() == '[' && text.back() == ']') {
      const std::string header = text.substr(1, text.size() - 2);
      category = nullptr;
      dict = nullptr;
      if (header.starts_with("category:")) {
        const std::string name = header.substr(9);
        if (name.empty()) throw ValidationError("empty category name", line);
        for (const auto& c : lex.categories) {
          if (c.name == name) throw ValidationError("duplicate category '" + name + "'", line);
        }
        lex.categories.push_back(LexiconCategory{name, {}, {}});
        category = &lex.categories.back();
      } else if (header.starts_with("dict:")) {
        const std::string code = header.substr(5);
        std::size_t idx = kLanguageCount;
        for (std::size_t k = 0; k < kLanguageCount; ++k) {
          if (language_code(static_cast<Language>(k)) == code) idx = k;
        }
        if (idx == kLanguageCount) throw ValidationError("unknown dictionary '" + code + "'", line);
        if (!lex.dictionaries[idx]) lex.dictionaries[idx].emplace();
        dict = &*lex.dictionaries[idx];
      } else {
        throw ValidationError("unknown section [" + header + "]", line);
      }
      continue;
    }
    const std::string pattern = lower_ascii(text);
    if (category) {
      if (pattern.size() > 1 && pattern.back() == '*') {
        category->prefixes.push_back(pattern.substr(0, pattern.size() - 1));
      } else {
        category->words.insert(pattern);
      }
    } else if (dict) {
      dict->insert(pattern);
    } else {
      throw ValidationError("pattern outside of a section", line);
    }
  }
  for (auto& c : lex.categories) {
    std::sort(c.prefixes.begin(), c.prefixes.end());
    c.prefixes.erase(std::unique(c.prefixes.begin(), c.prefixes.end()), c.prefixes.end());
  }
  return lex;
}

LexiconSet load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open lexicon file " + path.string());
  return parse_lexicon(in);
}

void write_lexicon(std::ostream& out, const LexiconSet& lex) {
  for (const auto& c : lex.categories) {
    out << "[category:" << c.name << "]\n";
    std::set<std::string> patterns(c.words.begin(), c.words.end());
    for (const auto& p : c.prefixes) patterns.insert(p + "*");
    for (const auto& p : patterns) out << p << '\n';
  }
  for (std::size_t k = 0; k < kLanguageCount; ++k) {
    if (!lex.dictionaries[k]) continue;
    out << "[dict:" << language_code(static_cast<Language>(k)) << "]\n";
    std::set<std::string> words(lex.dictionaries[k]->begin(), lex.dictionaries[k]->end());
    for (const auto& w : words) out << w << '\n';
  }
}

std::string lexicon_to_string(const LexiconSet& lex) {
  std::ostringstream os;
  write_lexicon(os, lex);
  return os.str();
}

LexiconSet demo_lexicon() {
  static const char* kText = R"(
[category:emotion]
happ*
love*
sad
angry
wow
hate*
[category:self]
i
me
my
mine
myself
[category:family]
mom
dad
wife
husband
kid*
famil*
[category:question]
what
why
how
who
when
[dict:en]
i me my mine myself you he she it we they this that great good nice video vid
love loved lovely happy sad angry wow hate what why how who when mom dad wife
husband kids family very so and the a an is are was thanks thank hot sexy
[dict:fr]
merci tres bien belle beau jolie oui non
[dict:de]
danke sehr gut schön ja nein geil
)";
  // The dictionary sections above list several words per line for brevity.
  std::istringstream in(kText);
  LexiconSet lex = parse_lexicon(in);
  for (auto& d : lex.dictionaries) {
    if (!d) continue;
    std::unordered_set<std::string> split;
    for (const auto& entry : *d) {
      for (auto& t : tokenize(entry)) split.insert(std::move(t));
    }
    *d = std::move(split);
  }
  return lex;
}

std::vector<std::uint32_t> bow_features(const Profile& p, const Vocabulary& vocab) {
  std::vector<std::uint32_t> out;
  for (const auto& t : profile_tokens(p)) {
    if (auto idx = vocab.find(t)) out.push_back(static_cast<std::uint32_t>(*idx));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<double> lexicon_pcts(std::span<const std::string> tokens, const LexiconSet& lex) {
  std::vector<double> out(lex.category_count(), 0.0);
  if (tokens.empty()) return out;
  for (std::size_t c = 0; c < lex.categories.size(); ++c) {
    std::size_t hits = 0;
    for (const auto& t : tokens) hits += lex.categories[c].matches(t) ? 1 : 0;
    out[c] = static_cast<double>(hits) / static_cast<double>(tokens.size());
  }
  return out;
}

CountFeatures counts_of(const Profile& p, std::span<const std::string> tokens) {
  CountFeatures f;
  const std::size_t n = p.comments.size();
  f.comment_count = static_cast<double>(n);
  if (n == 0) return f;
  std::unordered_set<std::string_view> distinct_comments;
  for (const auto& c : p.comments) distinct_comments.insert(c.text);
  f.pct_unique_comments = static_cast<double>(distinct_comments.size()) / static_cast<double>(n);
  if (!tokens.empty()) {
    std::unordered_set<std::string_view> distinct_tokens(tokens.begin(), tokens.end());
    f.vocabulary_variety =
        static_cast<double>(distinct_tokens.size()) / static_cast<double>(tokens.size());
  }
  return f;
}

double informal_fraction(std::span<const std::string> tokens, const LexiconSet& lex) {
  const auto c = formality_counts(tokens, lex);
  return c.total == 0 ? 0.0 : static_cast<double>(c.informal) / static_cast<double>(c.total);
}

}  // namespace

std::vector<double> lexicon_features(const Profile& p, const LexiconSet& lex) {
  const auto tokens = profile_tokens(p);
  return lexicon_pcts(tokens, lex);
}

CountFeatures count_features(const Profile& p) {
  const auto tokens = profile_tokens(p);
  return counts_of(p, tokens);
}

FormalityCounts formality_counts(std::span<const std::string> tokens, const LexiconSet& lex) {
  if (!lex.has_all_dictionaries()) {
    throw ConfigError("informality needs the en, fr and de dictionaries");
  }
  FormalityCounts c;
  c.total = tokens.size();
  for (const auto& t : tokens) {
    if (is_numeric(t)) {
      ++c.numeric;
    } else if (lex.in_any_dictionary(t)) {
      ++c.in_dictionary;
    } else {
      ++c.informal;
    }
  }
  return c;
}

double informality(const Profile& p, const LexiconSet& lex) {
  const auto tokens = profile_tokens(p);
  return informal_fraction(tokens, lex);
}

ContentFeatures content_features(const Profile& p, const Vocabulary& vocab, const LexiconSet& lex) {
  const auto tokens = profile_tokens(p);
  ContentFeatures f;
  for (const auto& t : tokens) {
    if (auto idx = vocab.find(t)) f.bow.push_back(static_cast<std::uint32_t>(*idx));
  }
  std::sort(f.bow.begin(), f.bow.end());
  f.bow.erase(std::unique(f.bow.begin(), f.bow.end()), f.bow.end());
  f.lexicon_pcts = lexicon_pcts(tokens, lex);
  f.counts = counts_of(p, tokens);
  f.informality = informal_fraction(tokens, lex);
  return f;
}

}  // namespace catfish
