#pragma once

// Content features: bag-of-words, lexicon-category percentages, comment
// statistics and an informality ratio.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "catfish/corpus.hpp"

namespace catfish {

// Lowercased maximal runs of letters and digits. Input is UTF-8; letters
// outside ASCII are recognised for the Latin, Greek and Cyrillic blocks and
// for most other scripts, and case-folded for Latin-1, Latin Extended-A,
// Greek and Cyrillic.
std::vector<std::string> tokenize(std::string_view text);

// All tokens of all comments of a profile, in order.
std::vector<std::string> profile_tokens(const Profile& p);

class Vocabulary {
 public:
  Vocabulary() = default;
  // Terms are sorted and deduplicated before indexing.
  Vocabulary(std::vector<std::string> terms, std::size_t min_document_frequency,
             std::string built_from);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::size_t> find(std::string_view term) const;
  std::size_t min_document_frequency() const { return min_df_; }
  const std::string& built_from() const { return built_from_; }

  bool operator==(const Vocabulary& o) const { return terms_ == o.terms_ && min_df_ == o.min_df_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t min_df_ = 0;
  std::string built_from_;
};

inline constexpr std::size_t kDefaultMinDf = 2;

// Terms used by at least `min_df` distinct profiles. Throws ConfigError when
// the profiles carry no tokens at all.
Vocabulary build_vocabulary(std::span<const Profile* const> profiles, std::size_t min_df,
                            std::string built_from = {});
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df);

struct LexiconCategory {
  std::string name;
  std::unordered_set<std::string> words;
  std::vector<std::string> prefixes;  // from trailing-wildcard patterns, "happ*" -> "happ"

  bool matches(std::string_view token) const;
};

enum class Language { English, French, German };
inline constexpr std::size_t kLanguageCount = 3;
std::string_view language_code(Language l);

struct LexiconSet {
  std::vector<LexiconCategory> categories;
  // Indexed by Language; absent until a [dict:xx] section is read.
  std::vector<std::optional<std::unordered_set<std::string>>> dictionaries =
      std::vector<std::optional<std::unordered_set<std::string>>>(kLanguageCount);

  std::size_t category_count() const { return categories.size(); }
  bool has_all_dictionaries() const;
  bool in_any_dictionary(std::string_view token) const;
};

// Sections "[category:NAME]" and "[dict:en|fr|de]", one pattern per line.
// Blank lines and lines starting with '#' are ignored.
LexiconSet parse_lexicon(std::istream& in);
LexiconSet load_lexicon(const std::filesystem::path& path);
// Canonical text form: categories in order, patterns sorted.
void write_lexicon(std::ostream& out, const LexiconSet& lex);
std::string lexicon_to_string(const LexiconSet& lex);

// A small English lexicon with a handful of categories and three formality
// dictionaries, for fixtures and demos.
LexiconSet demo_lexicon();

// Sorted column indices of vocabulary terms present in the profile's comments.
std::vector<std::uint32_t> bow_features(const Profile& p, const Vocabulary& vocab);

// Fraction of tokens per category, in category order.
std::vector<double> lexicon_features(const Profile& p, const LexiconSet& lex);

struct CountFeatures {
  double comment_count = 0;
  double pct_unique_comments = 0;
  double vocabulary_variety = 0;
};
CountFeatures count_features(const Profile& p);

struct FormalityCounts {
  std::size_t total = 0;
  std::size_t numeric = 0;
  std::size_t in_dictionary = 0;
  std::size_t informal = 0;
};
FormalityCounts formality_counts(std::span<const std::string> tokens, const LexiconSet& lex);
// Informal tokens over all tokens; 0 without tokens. Throws ConfigError when a
// dictionary is missing.
double informality(const Profile& p, const LexiconSet& lex);

struct ContentFeatures {
  std::vector<std::uint32_t> bow;
  std::vector<double> lexicon_pcts;
  CountFeatures counts;
  double informality = 0;
};
ContentFeatures content_features(const Profile& p, const Vocabulary& vocab, const LexiconSet& lex);

}  // namespace catfish
