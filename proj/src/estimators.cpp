#include "wordent/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "wordent/errors.hpp"
#include "wordent/rng.hpp"
#include "wordent/stats.hpp"
#include "wordent/tsv.hpp"

namespace wordent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rényi entropy of an explicit probability list (not necessarily complete).
double renyi_of(std::span<const double> probs, RenyiOrder order) {
  switch (order.kind()) {
    case RenyiOrder::Kind::Support: {
      const auto support = std::count_if(probs.begin(), probs.end(),
                                         [](double p) { return p > 0.0; });
      return std::log2(static_cast<double>(support));
    }
    case RenyiOrder::Kind::Infinite: {
      const double top = probs.empty() ? 0.0 : *std::max_element(probs.begin(), probs.end());
      return -std::log2(top) + 0.0;
    }
    case RenyiOrder::Kind::Finite:
      break;
  }
  if (order.is_shannon()) return first_token_shannon(probs);
  const double a = order.alpha();
  std::vector<double> terms;
  terms.reserve(probs.size());
  for (double p : probs) {
    if (p > 0.0) terms.push_back(a * std::log2(p));
  }
  return log2_sum_exp2(terms) / (1.0 - a) + 0.0;
}

void require_mc_order(RenyiOrder order) {
  if (order.kind() == RenyiOrder::Kind::Infinite) {
    fail(ErrorKind::UnsupportedOrder,
         "the sample-based estimator does not support alpha = inf; use the exact path");
  }
  if (order.kind() == RenyiOrder::Kind::Support) {
    fail(ErrorKind::Domain,
         "the sample-based estimator requires a finite alpha > 0");
  }
}

}  // namespace

RenyiOrder RenyiOrder::of(double alpha) {
  if (std::isnan(alpha) || alpha <= 0.0) {
    fail(ErrorKind::Domain, "Renyi order must be positive (got " +
                                std::to_string(alpha) + "); use the support limit for 0");
  }
  if (std::isinf(alpha)) return infinite();
  return RenyiOrder(Kind::Finite, alpha);
}

RenyiOrder RenyiOrder::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinite();
  auto v = parse_double(text);
  if (!v) fail(ErrorKind::Domain, "invalid Renyi order '" + std::string(text) + "'");
  if (*v == 0.0) return support();
  return of(*v);
}

std::string RenyiOrder::to_string() const {
  switch (kind_) {
    case Kind::Infinite: return "inf";
    case Kind::Support: return "0";
    case Kind::Finite: break;
  }
  return fixed6(alpha_);
}

double log2_sum_exp2(std::span<const double> xs) {
  if (xs.empty()) return -kInf;
  const double top = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double x : xs) sum += std::exp2(x - top);
  return top + std::log2(sum);
}

double first_token_shannon(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h + 0.0;
}

double first_token_shannon(const TokenDistribution& dist) {
  return first_token_shannon(dist.probs());
}

double first_token_renyi(std::span<const double> probs, RenyiOrder order) {
  return renyi_of(probs, order);
}

double first_token_renyi(const TokenDistribution& dist, RenyiOrder order) {
  return renyi_of(dist.probs(), order);
}

EntropyEstimate mc_shannon(std::span<const double> surprisals) {
  if (surprisals.empty()) fail(ErrorKind::Precondition, "empty sample set");
  EntropyEstimate est;
  est.n_samples = surprisals.size();
  est.bits = stats::mean(surprisals);
  est.stderr_bits = stats::sem(surprisals);
  return est;
}

EntropyEstimate mc_shannon(const SampleSet& samples) {
  const auto s = samples.surprisals();
  auto est = mc_shannon(s);
  est.truncated_count = samples.truncated_count();
  return est;
}

double mc_renyi_bits(std::span<const double> surprisals, RenyiOrder order) {
  if (surprisals.empty()) fail(ErrorKind::Precondition, "empty sample set");
  require_mc_order(order);
  if (order.is_shannon()) return stats::mean(surprisals);
  const double one_minus = 1.0 - order.alpha();
  std::vector<double> terms(surprisals.size());
  std::transform(surprisals.begin(), surprisals.end(), terms.begin(),
                 [one_minus](double s) { return one_minus * s; });
  const double n = static_cast<double>(surprisals.size());
  return (log2_sum_exp2(terms) - std::log2(n)) / one_minus + 0.0;
}

EntropyEstimate mc_renyi(std::span<const double> surprisals, RenyiOrder order,
                         const BootstrapOptions& bootstrap) {
  if (surprisals.empty()) fail(ErrorKind::Precondition, "empty sample set");
  require_mc_order(order);
  if (order.is_shannon()) return mc_shannon(surprisals);

  EntropyEstimate est;
  est.n_samples = surprisals.size();
  est.bits = mc_renyi_bits(surprisals, order);
  if (est.n_samples >= 2) {
    if (bootstrap.resamples < 2) {
      fail(ErrorKind::Precondition, "bootstrap needs at least 2 resamples");
    }
    StreamRng rng(bootstrap.seed, 0, 0);
    std::vector<double> resample(surprisals.size());
    std::vector<double> values(bootstrap.resamples);
    for (auto& v : values) {
      for (auto& r : resample) r = surprisals[rng.below(surprisals.size())];
      v = mc_renyi_bits(resample, order);
    }
    est.stderr_bits = stats::sample_sd(values);
  }
  return est;
}

EntropyEstimate mc_renyi(const SampleSet& samples, RenyiOrder order,
                         const BootstrapOptions& bootstrap) {
  const auto s = samples.surprisals();
  auto est = mc_renyi(s, order, bootstrap);
  est.truncated_count = samples.truncated_count();
  return est;
}

WordEnumeration enumerate_words(const LanguageModel& model,
                                std::span<const TokenId> context, std::size_t depth,
                                std::uint64_t guard) {
  if (depth < 1) fail(ErrorKind::Precondition, "enumeration depth must be >= 1");
  const Lexicon& lex = model.lexicon();

  // Worst-case word count |T_B| * |T_I|^(depth-1), computed in floating point
  // so large vocabularies cannot overflow the bound itself.
  const double bound = static_cast<double>(lex.boundary_ids().size()) *
                       std::pow(static_cast<double>(lex.internal_ids().size()),
                                static_cast<double>(depth - 1));
  if (bound > static_cast<double>(guard)) {
    fail(ErrorKind::Tractability,
         "enumeration of " + std::to_string(lex.boundary_ids().size()) + " x " +
             std::to_string(lex.internal_ids().size()) + "^" +
             std::to_string(depth - 1) + " words exceeds the limit of " +
             std::to_string(guard));
  }

  struct Prefix {
    std::vector<TokenId> tokens;
    double probability;
  };

  WordEnumeration out;
  out.depth = depth;

  std::deque<Prefix> frontier;
  const auto initial =
      word_initial_distribution(lex, model.next_token_distribution(context));
  for (TokenId t : lex.boundary_ids()) {
    if (initial.probs[t] > 0.0) frontier.push_back({{t}, initial.probs[t]});
  }

  std::vector<TokenId> history;
  while (!frontier.empty()) {
    Prefix prefix = std::move(frontier.front());
    frontier.pop_front();

    history.assign(context.begin(), context.end());
    history.insert(history.end(), prefix.tokens.begin(), prefix.tokens.end());
    const auto cont =
        continuation_distribution(lex, model.next_token_distribution(history));

    if (cont.eow > 0.0) out.words.push_back({prefix.tokens, prefix.probability * cont.eow});
    if (prefix.tokens.size() == depth) {
      out.residual_mass += prefix.probability * (1.0 - cont.eow);
      continue;
    }
    for (TokenId t : lex.internal_ids()) {
      if (cont.probs[t] <= 0.0) continue;
      Prefix child{prefix.tokens, prefix.probability * cont.probs[t]};
      child.tokens.push_back(t);
      frontier.push_back(std::move(child));
    }
  }
  return out;
}

ExactEntropy exact_shannon(const WordEnumeration& enumeration,
                           double residual_tolerance) {
  double h = 0.0;
  for (const auto& w : enumeration.words) h -= w.probability * std::log2(w.probability);
  return {h + 0.0, enumeration.residual_mass >= residual_tolerance};
}

ExactEntropy exact_renyi(const WordEnumeration& enumeration, RenyiOrder order,
                         double residual_tolerance) {
  std::vector<double> probs;
  probs.reserve(enumeration.words.size());
  for (const auto& w : enumeration.words) probs.push_back(w.probability);
  return {renyi_of(probs, order), enumeration.residual_mass >= residual_tolerance};
}

}  // namespace wordent
