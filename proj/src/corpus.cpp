#include "wordent/corpus.hpp"

#include <cmath>
#include <set>

#include "wordent/errors.hpp"
#include "wordent/tsv.hpp"

namespace wordent {

std::vector<Context> Corpus::contexts() const {
  std::vector<Context> out;
  out.reserve(words.size());
  Context running;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i == 0 || words[i].key.doc_id != words[i - 1].key.doc_id) running.clear();
    out.push_back(running);
    running.insert(running.end(), words[i].tokens.begin(), words[i].tokens.end());
  }
  return out;
}

std::vector<bool> Corpus::document_initial() const {
  std::vector<bool> out(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    out[i] = i == 0 || words[i].key.doc_id != words[i - 1].key.doc_id;
  }
  return out;
}

namespace {

std::vector<TokenId> resolve_tokens(const TsvReader& reader, const Lexicon& lexicon,
                                    std::string_view word,
                                    std::optional<std::string_view> tokens,
                                    std::string_view marker) {
  std::vector<TokenId> out;
  if (tokens && !tokens->empty()) {
    for (auto surface : split(*tokens, ' ')) {
      if (surface.empty()) continue;
      auto id = lexicon.find(surface);
      if (!id) reader.fail("unknown token surface '" + std::string(surface) + "'");
      out.push_back(*id);
    }
  } else if (auto id = lexicon.find(std::string(marker) + std::string(word));
             id && lexicon.is_boundary(*id)) {
    out.push_back(*id);
  } else if (auto id2 = lexicon.find(word); id2 && lexicon.is_boundary(*id2)) {
    out.push_back(*id2);
  } else {
    reader.fail("word '" + std::string(word) +
                "' is not a single word-initial token; supply a tokens column");
  }
  if (out.empty()) reader.fail("word has no tokens");
  if (!lexicon.is_boundary(out.front())) {
    reader.fail("word does not start with a word-initial token");
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (lexicon.is_boundary(out[i])) reader.fail("word-initial token inside word");
  }
  return out;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& source, const Lexicon* lexicon,
                    std::string_view marker) {
  TsvReader reader(in, source);
  const auto doc_col = reader.require_column("doc_id");
  const auto idx_col = reader.require_column("word_index");
  const auto word_col = reader.require_column("word");
  const auto pos_col = reader.column("pos");
  const auto tok_col = reader.column("tokens");

  Corpus corpus;
  corpus.has_pos = pos_col.has_value();
  std::set<std::string> finished_docs;
  while (reader.next()) {
    CorpusWord w;
    w.key.doc_id = std::string(reader.field(doc_col));
    w.key.word_index = reader.int_field(idx_col);
    w.word = std::string(reader.field(word_col));
    if (w.word.empty()) reader.fail("empty word");
    if (pos_col) w.pos = std::string(reader.field(*pos_col));

    if (!corpus.words.empty()) {
      const auto& prev = corpus.words.back().key;
      if (prev.doc_id == w.key.doc_id) {
        if (w.key.word_index <= prev.word_index) {
          reader.fail("word_index must increase within a document");
        }
      } else {
        finished_docs.insert(prev.doc_id);
        if (finished_docs.count(w.key.doc_id)) {
          reader.fail("document '" + w.key.doc_id + "' is not contiguous");
        }
      }
    }
    std::optional<std::string_view> tokens;
    if (tok_col) tokens = reader.field(*tok_col);
    if (lexicon) w.tokens = resolve_tokens(reader, *lexicon, w.word, tokens, marker);
    corpus.words.push_back(std::move(w));
  }
  if (corpus.words.empty()) fail(ErrorKind::Schema, source + ": corpus has no words");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const Lexicon* lexicon,
                   std::string_view marker) {
  auto in = open_input(path);
  return parse_corpus(in, path.string(), lexicon, marker);
}

RtTable parse_rt(std::istream& in, const std::string& source) {
  TsvReader reader(in, source);
  const auto doc_col = reader.require_column("doc_id");
  const auto idx_col = reader.require_column("word_index");
  const auto subj_col = reader.require_column("subject");
  const auto rt_col = reader.require_column("rt_ms");
  const auto fix_col = reader.column("prev_fixated");

  RtTable table;
  table.source = source;
  table.has_prev_fixated = fix_col.has_value();
  while (reader.next()) {
    RtRow row;
    row.key.doc_id = std::string(reader.field(doc_col));
    row.key.word_index = reader.int_field(idx_col);
    row.subject = std::string(reader.field(subj_col));
    if (row.subject.empty()) reader.fail("empty subject");
    row.rt_ms = reader.double_field(rt_col);
    if (fix_col) row.prev_fixated = reader.flag_field(*fix_col);
    row.line = reader.line_number();
    table.rows.push_back(std::move(row));
  }
  return table;
}

RtTable load_rt(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_rt(in, path.string());
}

UnigramTable::UnigramTable(std::map<std::string, std::uint64_t> counts) {
  if (counts.empty()) fail(ErrorKind::Validation, "unigram table is empty");
  for (auto& [word, c] : counts) {
    total_ += c;
    counts_.emplace(word, c);
  }
}

double UnigramTable::surprisal(std::string_view word) const {
  auto it = counts_.find(word);
  const double c = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
  const double denom =
      static_cast<double>(total_) + static_cast<double>(counts_.size()) + 1.0;
  return -std::log2((c + 1.0) / denom);
}

UnigramTable parse_unigram(std::istream& in, const std::string& source) {
  TsvReader reader(in, source);
  const auto word_col = reader.require_column("word");
  const auto count_col = reader.require_column("count");
  std::map<std::string, std::uint64_t> counts;
  while (reader.next()) {
    const auto c = reader.int_field(count_col);
    if (c < 0) reader.fail("negative count");
    counts[std::string(reader.field(word_col))] += static_cast<std::uint64_t>(c);
  }
  if (counts.empty()) fail(ErrorKind::Validation, source + ": unigram table is empty");
  return UnigramTable(std::move(counts));
}

UnigramTable load_unigram(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_unigram(in, path.string());
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace wordent
