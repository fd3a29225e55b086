#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wordent/lexicon.hpp"
#include "wordent/lm_provider.hpp"

namespace wordent {

struct ItemKey {
  std::string doc_id;
  std::int64_t word_index = 0;

  auto operator<=>(const ItemKey&) const = default;
};

struct CorpusWord {
  ItemKey key;
  std::string word;
  std::optional<std::string> pos;
  std::vector<TokenId> tokens;
};

/// Documents in file order; each document's words are contiguous with
/// strictly increasing word_index.
struct Corpus {
  std::vector<CorpusWord> words;
  bool has_pos = false;

  // Tokens of the preceding words of the same document, for every word.
  std::vector<Context> contexts() const;
  // True for the first word of each document.
  std::vector<bool> document_initial() const;
};

// corpus.tsv: `doc_id<TAB>word_index<TAB>word[<TAB>pos][<TAB>tokens]`.
// `tokens` holds space-separated token surfaces. Without it, a word maps to
// the single boundary token `marker + word`, or to a boundary token whose
// surface is the word itself. With a null lexicon tokens are left empty.
Corpus parse_corpus(std::istream& in, const std::string& source, const Lexicon* lexicon,
                    std::string_view marker = kDefaultBoundaryMarker);
Corpus load_corpus(const std::filesystem::path& path, const Lexicon* lexicon,
                   std::string_view marker = kDefaultBoundaryMarker);

struct RtRow {
  ItemKey key;
  std::string subject;
  double rt_ms = 0.0;
  std::optional<bool> prev_fixated;
  std::size_t line = 0;
};

struct RtTable {
  std::vector<RtRow> rows;
  bool has_prev_fixated = false;
  std::string source;
};

// rt.tsv: `doc_id<TAB>word_index<TAB>subject<TAB>rt_ms[<TAB>prev_fixated]`.
RtTable parse_rt(std::istream& in, const std::string& source);
RtTable load_rt(const std::filesystem::path& path);

/// Add-one smoothed unigram model over word surfaces.
class UnigramTable {
 public:
  // Throws Validation for an empty table.
  explicit UnigramTable(std::map<std::string, std::uint64_t> counts);

  // -log2((c(w) + 1) / (N + V + 1)); unseen words have c = 0.
  double surprisal(std::string_view word) const;

  std::uint64_t total() const { return total_; }
  std::size_t types() const { return counts_.size(); }

 private:
  std::map<std::string, std::uint64_t, std::less<>> counts_;
  std::uint64_t total_ = 0;
};

inline double unigram_surprisal(const UnigramTable& table, std::string_view word) {
  return table.surprisal(word);
}

// unigram.tsv: `word<TAB>count`.
UnigramTable parse_unigram(std::istream& in, const std::string& source);
UnigramTable load_unigram(const std::filesystem::path& path);

// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view text);

}  // namespace wordent
