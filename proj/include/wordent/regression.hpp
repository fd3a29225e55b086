#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordent/corpus.hpp"
#include "wordent/lm_provider.hpp"

namespace wordent {

enum class ResponseKind { SPR, FP, GP };

ResponseKind parse_response_kind(std::string_view text);
const char* to_string(ResponseKind kind);

// Per-word baseline predictors, independent of subject.
struct ItemPredictors {
  ItemKey key;
  std::string word;
  double word_length = 0.0;  // characters
  double word_index = 0.0;
  double unigram_surprisal = 0.0;
  double surprisal = 0.0;                 // LM surprisal of this word
  std::optional<double> prev_surprisal;   // absent for document-initial words
};

std::vector<ItemPredictors> compute_item_predictors(const Corpus& corpus,
                                                    const LanguageModel& model,
                                                    const UnigramTable& unigram);

using EntropyColumn = std::map<ItemKey, double>;

struct RowKey {
  std::string subject;
  ItemKey item;

  auto operator<=>(const RowKey&) const = default;
};

struct DesignMatrix {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<RowKey> rows;
};

struct Design {
  std::vector<std::string> columns;
  DesignMatrix fit;
  DesignMatrix heldout;
  std::size_t excluded_initial = 0;  // RT rows on document-initial words
};

struct DesignOptions {
  double heldout_frac = 1.0 / 3.0;
  std::uint64_t split_seed = 0;
  bool log_response = false;
};

// Item-level split: every row for the same (doc, word index) lands in the
// same partition.
bool is_heldout(const ItemKey& item, double heldout_frac, std::uint64_t seed);

/// Builds fit and held-out design matrices.
///
/// Columns: intercept, word_length, word_index, unigram_surprisal, surprisal,
/// prev_surprisal, prev_fixated (FP/GP only), reference-coded subject
/// dummies, and `entropy` when a column is supplied. Continuous predictors
/// are z-scored with fit-partition statistics. Rows on document-initial words
/// are dropped.
Design build_design(std::span<const ItemPredictors> items, const RtTable& rt,
                    ResponseKind response, const DesignOptions& options,
                    const EntropyColumn* entropy = nullptr);

inline constexpr double kVarianceFloor = 1e-12;

struct FitResult {
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients;
  double residual_variance = 0.0;  // maximum-likelihood estimate
  double loglik = 0.0;             // natural log, fit partition
  std::size_t n_obs = 0;
};

// Ordinary least squares with a Gaussian likelihood. Throws Collinearity
// (naming the dependent columns) on rank deficiency and DegenerateFit when the
// residual variance falls below kVarianceFloor.
FitResult fit_linear_model(const DesignMatrix& data,
                           std::span<const std::string> columns);

// Log likelihood of `data` under the fitted coefficients and fit variance.
double gaussian_loglik(const FitResult& fit, const DesignMatrix& data);

Eigen::VectorXd squared_errors(const FitResult& fit, const DesignMatrix& data);

// Held-out LL(extended) - LL(baseline). Throws PartitionMismatch unless both
// held-out matrices describe the same rows and responses.
double delta_ll(const FitResult& baseline, const FitResult& extended,
                const DesignMatrix& baseline_heldout,
                const DesignMatrix& extended_heldout);

struct PermutationResult {
  double statistic = 0.0;  // mean(a - b)
  double p_value = 1.0;    // two-sided, identity permutation included
  std::size_t n_perm = 0;
};

inline constexpr std::size_t kDefaultPermutations = 10000;

// Paired sign-flip permutation test on per-row squared errors.
PermutationResult paired_permutation_test(std::span<const double> errors_a,
                                          std::span<const double> errors_b,
                                          std::size_t n_perm = kDefaultPermutations,
                                          std::uint64_t seed = 0);

}  // namespace wordent
