#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordent/lm_provider.hpp"
#include "wordent/sampler.hpp"

namespace wordent {

/// Order of a Rényi entropy. Finite positive values, the infinite order, and
/// the alpha -> 0+ support-counting limit. Alpha = 1 is the Shannon limit.
class RenyiOrder {
 public:
  enum class Kind { Finite, Infinite, Support };

  // alpha must be positive (or +infinity); throws Domain otherwise.
  static RenyiOrder of(double alpha);
  static RenyiOrder shannon() { return RenyiOrder(Kind::Finite, 1.0); }
  static RenyiOrder infinite() { return RenyiOrder(Kind::Infinite, 0.0); }
  static RenyiOrder support() { return RenyiOrder(Kind::Support, 0.0); }
  // Accepts a decimal number, "inf", or "0" for the support limit.
  static RenyiOrder parse(std::string_view text);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  bool is_shannon() const { return kind_ == Kind::Finite && alpha_ == 1.0; }
  std::string to_string() const;

 private:
  RenyiOrder(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}
  Kind kind_;
  double alpha_;
};

struct EntropyEstimate {
  double bits = 0.0;
  std::size_t n_samples = 0;
  std::optional<double> stderr_bits;  // present iff n_samples >= 2
  std::size_t truncated_count = 0;
};

// log2(sum_i 2^x_i), evaluated without overflow. Returns -inf for an empty
// span or when every term is -inf.
double log2_sum_exp2(std::span<const double> xs);

// -sum p log2 p with 0 log 0 = 0.
double first_token_shannon(std::span<const double> probs);
double first_token_shannon(const TokenDistribution& dist);
double first_token_renyi(std::span<const double> probs, RenyiOrder order);
double first_token_renyi(const TokenDistribution& dist, RenyiOrder order);

// Mean surprisal with analytic standard error.
EntropyEstimate mc_shannon(std::span<const double> surprisals);
EntropyEstimate mc_shannon(const SampleSet& samples);

struct BootstrapOptions {
  std::size_t resamples = 1000;
  std::uint64_t seed = 0;
};

// Point value of the sample-based Rényi estimator:
//   1/(1-a) * (log2 sum_i 2^((1-a) s_i) - log2 n).
// Alpha = 1 returns the mean surprisal. Only finite positive orders.
double mc_renyi_bits(std::span<const double> surprisals, RenyiOrder order);

// Rényi estimate with bootstrap standard error. Alpha = 1 dispatches to
// mc_shannon.
EntropyEstimate mc_renyi(std::span<const double> surprisals, RenyiOrder order,
                         const BootstrapOptions& bootstrap = {});
EntropyEstimate mc_renyi(const SampleSet& samples, RenyiOrder order,
                         const BootstrapOptions& bootstrap = {});

struct EnumeratedWord {
  std::vector<TokenId> tokens;
  double probability = 0.0;
};

struct WordEnumeration {
  std::vector<EnumeratedWord> words;  // positive probability only
  double residual_mass = 0.0;         // mass of words longer than depth
  std::size_t depth = 0;
};

inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

// Exhaustive breadth-first expansion of the word process up to `depth`
// tokens. Throws Tractability when |T_B| * |T_I|^(depth-1) exceeds `guard`.
WordEnumeration enumerate_words(const LanguageModel& model,
                                std::span<const TokenId> context, std::size_t depth,
                                std::uint64_t guard = kEnumerationGuard);

struct ExactEntropy {
  double bits = 0.0;
  bool approximate = false;  // residual mass above tolerance
};

inline constexpr double kDefaultResidualTolerance = 1e-6;

ExactEntropy exact_shannon(const WordEnumeration& enumeration,
                           double residual_tolerance = kDefaultResidualTolerance);
ExactEntropy exact_renyi(const WordEnumeration& enumeration, RenyiOrder order,
                         double residual_tolerance = kDefaultResidualTolerance);

}  // namespace wordent
