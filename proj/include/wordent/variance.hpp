#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wordent/estimators.hpp"
#include "wordent/lm_provider.hpp"
#include "wordent/sampler.hpp"

namespace wordent {

// 2^2 .. 2^11.
std::vector<std::size_t> default_sample_count_grid();

inline constexpr std::size_t kDefaultBootstrapResamples = 1000;

struct CVOptions {
  std::vector<std::size_t> ks = default_sample_count_grid();
  std::size_t n_boot = kDefaultBootstrapResamples;
  // seed and max_word_tokens are used; sample_count is replaced by each k.
  SamplerConfig sampler;
  unsigned threads = 1;
};

struct CVRow {
  std::size_t k = 0;
  double cv = 0.0;               // mean of the defined per-word values
  std::size_t n_undefined = 0;   // words with mean ~ 0 but spread > 0
  std::vector<std::optional<double>> per_word;
};

struct CVReport {
  RenyiOrder order = RenyiOrder::shannon();
  std::vector<CVRow> rows;  // one per k, increasing
};

/// Bootstrap coefficient of variation of MC entropy estimates by sample count.
///
/// For each k and context i a fresh set of k words is sampled, `n_boot`
/// resamples of size k are drawn with replacement, and CV_{k,i} = sd / mean
/// of the per-resample estimates. CV_k averages over contexts. All requested
/// orders are evaluated on the same samples and resamples.
std::vector<CVReport> bootstrap_cv(const LanguageModel& model,
                                   std::span<const Context> contexts,
                                   std::span<const RenyiOrder> orders,
                                   const CVOptions& options);

CVReport bootstrap_cv(const LanguageModel& model, std::span<const Context> contexts,
                      RenyiOrder order, const CVOptions& options);

}  // namespace wordent
