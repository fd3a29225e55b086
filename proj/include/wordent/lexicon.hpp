#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordent {

using TokenId = std::uint32_t;

// U+2581 LOWER ONE EIGHTH BLOCK, the usual whitespace marker of
// sentencepiece-style vocabularies.
inline constexpr std::string_view kDefaultBoundaryMarker = "\xE2\x96\x81";

struct TokenEntry {
  TokenId id = 0;
  std::string surface;
  bool boundary = false;  // true iff the token starts a new word
};

/// Subword vocabulary partitioned into word-initial (boundary) tokens and
/// word-internal tokens.
///
/// Ids are dense, 0..size()-1, so distributions can be indexed by id.
/// Immutable after construction.
class Lexicon {
 public:
  // Validates and partitions the entries. Throws Validation errors for an
  // empty list, duplicate ids or surfaces, empty surfaces, non-dense ids or
  // an empty boundary set.
  static Lexicon build(std::vector<TokenEntry> entries);

  std::size_t size() const { return entries_.size(); }
  bool contains(TokenId id) const { return id < entries_.size(); }

  const TokenEntry& entry(TokenId id) const;
  bool is_boundary(TokenId id) const;

  std::span<const TokenId> boundary_ids() const { return boundary_; }
  std::span<const TokenId> internal_ids() const { return internal_; }
  const std::vector<TokenEntry>& entries() const { return entries_; }

  std::optional<TokenId> find(std::string_view surface) const;

  // Concatenates token surfaces and strips a leading marker, giving the
  // word as it would appear in running text.
  std::string render(std::span<const TokenId> tokens,
                     std::string_view marker = kDefaultBoundaryMarker) const;

 private:
  Lexicon() = default;

  std::vector<TokenEntry> entries_;  // indexed by id
  std::vector<TokenId> boundary_;
  std::vector<TokenId> internal_;
  std::unordered_map<std::string, TokenId> by_surface_;
};

inline Lexicon build_lexicon(std::vector<TokenEntry> entries) {
  return Lexicon::build(std::move(entries));
}

inline bool is_boundary(const Lexicon& lexicon, TokenId id) {
  return lexicon.is_boundary(id);
}

struct LexiconLoadOptions {
  // When set, the boundary flag is inferred from `marker` as a surface prefix
  // and any boundary column in the file is ignored.
  bool infer_boundary = false;
  std::string marker = std::string(kDefaultBoundaryMarker);
};

// Reads `id<TAB>surface<TAB>boundary`. Errors name the offending line.
Lexicon parse_lexicon(std::istream& in, const std::string& source,
                      const LexiconLoadOptions& options = {});
Lexicon load_lexicon(const std::filesystem::path& path,
                     const LexiconLoadOptions& options = {});

}  // namespace wordent
