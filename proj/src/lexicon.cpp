#include "wordent/lexicon.hpp"

#include <algorithm>

#include "wordent/errors.hpp"
#include "wordent/tsv.hpp"

namespace wordent {

Lexicon Lexicon::build(std::vector<TokenEntry> entries) {
  if (entries.empty()) fail(ErrorKind::Validation, "lexicon has no entries");

  std::sort(entries.begin(), entries.end(),
            [](const TokenEntry& a, const TokenEntry& b) { return a.id < b.id; });

  Lexicon lex;
  lex.by_surface_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (i > 0 && entries[i - 1].id == e.id) {
      fail(ErrorKind::Validation, "duplicate token id " + std::to_string(e.id));
    }
    if (e.surface.empty()) {
      fail(ErrorKind::Validation,
           "token id " + std::to_string(e.id) + " has an empty surface");
    }
    if (!lex.by_surface_.emplace(e.surface, e.id).second) {
      fail(ErrorKind::Validation, "duplicate token surface '" + e.surface + "'");
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].id != i) {
      fail(ErrorKind::Validation, "token ids must be dense 0.." +
                                      std::to_string(entries.size() - 1) +
                                      "; missing id " + std::to_string(i));
    }
    (entries[i].boundary ? lex.boundary_ : lex.internal_).push_back(entries[i].id);
  }
  if (lex.boundary_.empty()) {
    fail(ErrorKind::Validation, "lexicon has no word-initial (boundary) tokens");
  }
  lex.entries_ = std::move(entries);
  return lex;
}

const TokenEntry& Lexicon::entry(TokenId id) const {
  if (!contains(id)) fail(ErrorKind::Lookup, "unknown token id " + std::to_string(id));
  return entries_[id];
}

bool Lexicon::is_boundary(TokenId id) const { return entry(id).boundary; }

std::optional<TokenId> Lexicon::find(std::string_view surface) const {
  auto it = by_surface_.find(std::string(surface));
  if (it == by_surface_.end()) return std::nullopt;
  return it->second;
}

std::string Lexicon::render(std::span<const TokenId> tokens,
                            std::string_view marker) const {
  std::string out;
  for (TokenId t : tokens) out += entry(t).surface;
  if (!marker.empty() && out.starts_with(marker)) out.erase(0, marker.size());
  return out;
}

Lexicon parse_lexicon(std::istream& in, const std::string& source,
                      const LexiconLoadOptions& options) {
  TsvReader reader(in, source);
  const auto id_col = reader.require_column("id");
  const auto surface_col = reader.require_column("surface");
  std::optional<std::size_t> boundary_col;
  if (!options.infer_boundary) boundary_col = reader.require_column("boundary");

  std::vector<TokenEntry> entries;
  std::unordered_map<std::string, std::size_t> seen_surface;
  std::unordered_map<TokenId, std::size_t> seen_id;
  while (reader.next()) {
    const auto raw_id = reader.int_field(id_col);
    if (raw_id < 0 || raw_id > UINT32_MAX) reader.fail("token id out of range");
    TokenEntry e;
    e.id = static_cast<TokenId>(raw_id);
    e.surface = std::string(reader.field(surface_col));
    if (e.surface.empty()) reader.fail("empty surface");
    e.boundary = boundary_col ? reader.flag_field(*boundary_col)
                              : e.surface.starts_with(options.marker);
    // Duplicates are caught here as well so the message can carry a line.
    if (auto [it, ok] = seen_id.emplace(e.id, reader.line_number()); !ok) {
      reader.fail("duplicate token id " + std::to_string(e.id) +
                  " (first seen on line " + std::to_string(it->second) + ")");
    }
    if (auto [it, ok] = seen_surface.emplace(e.surface, reader.line_number()); !ok) {
      reader.fail("duplicate token surface '" + e.surface +
                  "' (first seen on line " + std::to_string(it->second) + ")");
    }
    entries.push_back(std::move(e));
  }
  try {
    return Lexicon::build(std::move(entries));
  } catch (const Error& err) {
    throw Error(err.kind(), source + ": " + err.what());
  }
}

Lexicon load_lexicon(const std::filesystem::path& path,
                     const LexiconLoadOptions& options) {
  auto in = open_input(path);
  return parse_lexicon(in, path.string(), options);
}

}  // namespace wordent
