#pragma once

#include <filesystem>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wordent/lexicon.hpp"

namespace wordent {

inline constexpr double kProperTolerance = 1e-9;
// Deviations up to this size are absorbed by renormalization; larger ones are
// rejected as defects.
inline constexpr double kRenormalizeTolerance = 1e-6;

/// Next-token probability vector indexed by token id.
class TokenDistribution {
 public:
  // Validates non-negativity and the sum, renormalizing small deviations.
  // Throws DegenerateDistribution on violation.
  explicit TokenDistribution(std::vector<double> probs);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](TokenId id) const { return probs_[id]; }

  bool operator==(const TokenDistribution&) const = default;

 private:
  std::vector<double> probs_;
};

// Token sequence after the implicit begin-of-sequence marker: the preceding
// words of the document followed by any in-progress word prefix.
using Context = std::vector<TokenId>;

/// Provider contract: anything that can produce a next-token distribution
/// over a lexicon. Implementations must be safe for concurrent calls.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual const Lexicon& lexicon() const = 0;
  virtual TokenDistribution next_token_distribution(
      std::span<const TokenId> context) const = 0;
};

/// Interpolated n-gram over token ids.
///
/// Lookup finds the longest stored context suffix (at most order-1 ids, the
/// begin-of-sequence marker included) and returns
///   lambda * table + (1 - lambda) * unconditional.
/// With no stored suffix the unconditional table is returned unchanged.
class NGramModel final : public LanguageModel {
 public:
  static constexpr TokenId kBeginOfSequence = std::numeric_limits<TokenId>::max();

  using Table = std::map<std::vector<TokenId>, TokenDistribution>;

  // `order` defaults to one more than the longest stored context.
  NGramModel(Lexicon lexicon, TokenDistribution unconditional, Table tables = {},
             double lambda = 1.0, std::optional<std::size_t> order = std::nullopt);

  const Lexicon& lexicon() const override { return lexicon_; }
  TokenDistribution next_token_distribution(
      std::span<const TokenId> context) const override;

  std::size_t order() const { return order_; }
  double lambda() const { return lambda_; }
  const TokenDistribution& unconditional() const { return unconditional_; }
  const Table& tables() const { return tables_; }

 private:
  Lexicon lexicon_;
  TokenDistribution unconditional_;
  Table tables_;
  double lambda_;
  std::size_t order_;
};

// Sum of probabilities over boundary tokens: the end-of-word probability.
double boundary_mass(const Lexicon& lexicon, const TokenDistribution& dist);

// Distribution restricted to boundary tokens and renormalized. Indexed by
// token id; internal tokens carry zero.
struct WordInitialDistribution {
  std::vector<double> probs;
};

// Internal tokens keep their probabilities; boundary tokens carry zero and
// their combined mass moves to `eow`.
struct ContinuationDistribution {
  std::vector<double> probs;
  double eow = 0.0;
};

// Throws DegenerateDistribution when the boundary mass is zero.
WordInitialDistribution word_initial_distribution(const Lexicon& lexicon,
                                                  const TokenDistribution& dist);
ContinuationDistribution continuation_distribution(const Lexicon& lexicon,
                                                   const TokenDistribution& dist);

// lm.tsv: header `context<TAB>token_id<TAB>prob`. Context is a comma-joined id
// list (empty for the unconditional table, `<s>` allowed as the first element
// for the begin-of-sequence marker).
NGramModel parse_ngram_model(std::istream& in, const std::string& source,
                             Lexicon lexicon, double lambda = 1.0,
                             std::optional<std::size_t> order = std::nullopt);
NGramModel load_ngram_model(const std::filesystem::path& path, Lexicon lexicon,
                            double lambda = 1.0,
                            std::optional<std::size_t> order = std::nullopt);

}  // namespace wordent
