#include "wordent/sampler.hpp"

#include <cmath>
#include <limits>

#include "wordent/errors.hpp"
#include "wordent/parallel.hpp"
#include "wordent/rng.hpp"

namespace wordent {

namespace {

// Inverse-CDF draw over `probs`; returns probs.size() when the draw falls in
// the trailing `tail` mass.
std::size_t draw_index(std::span<const double> probs, double tail, double u) {
  double total = tail;
  for (double p : probs) total += p;
  double target = u * total;
  std::size_t last_positive = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    if (target < probs[i]) return i;
    target -= probs[i];
  }
  if (tail > 0.0) return probs.size();
  return last_positive;  // rounding fell off the end
}

}  // namespace

std::vector<double> SampleSet::surprisals() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.surprisal_bits);
  return out;
}

std::size_t SampleSet::truncated_count() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.truncated ? 1 : 0;
  return n;
}

std::uint64_t context_fingerprint(std::span<const TokenId> context) {
  return fnv1a(context.data(), context.size_bytes());
}

WordSample sample_word(const LanguageModel& model, std::span<const TokenId> context,
                       std::size_t max_word_tokens,
                       const std::function<double()>& uniform) {
  if (max_word_tokens < 1) fail(ErrorKind::Validation, "max_word_tokens must be >= 1");
  const Lexicon& lex = model.lexicon();

  WordSample out;
  const auto initial =
      word_initial_distribution(lex, model.next_token_distribution(context));
  const auto first = static_cast<TokenId>(draw_index(initial.probs, 0.0, uniform()));
  out.tokens.push_back(first);
  out.surprisal_bits = -std::log2(initial.probs[first]);

  std::vector<TokenId> history(context.begin(), context.end());
  history.push_back(first);
  while (true) {
    if (out.tokens.size() >= max_word_tokens) {
      out.truncated = true;
      break;
    }
    const auto cont =
        continuation_distribution(lex, model.next_token_distribution(history));
    const std::size_t pick = draw_index(cont.probs, cont.eow, uniform());
    if (pick == cont.probs.size()) {
      out.surprisal_bits += -std::log2(cont.eow);
      break;
    }
    const auto tok = static_cast<TokenId>(pick);
    out.surprisal_bits += -std::log2(cont.probs[tok]);
    out.tokens.push_back(tok);
    history.push_back(tok);
  }
  // -log2(1) is -0.0; keep the sign clean.
  out.surprisal_bits += 0.0;
  return out;
}

WordSample sample_word(const LanguageModel& model, std::span<const TokenId> context,
                       const SamplerConfig& config, std::uint64_t context_index,
                       std::uint64_t stream_index) {
  StreamRng rng(config.seed, context_index, stream_index);
  return sample_word(model, context, config.max_word_tokens,
                     [&rng] { return rng.uniform(); });
}

SampleSet sample_set(const LanguageModel& model, std::span<const TokenId> context,
                     const SamplerConfig& config, std::uint64_t context_index,
                     unsigned threads) {
  if (config.sample_count < 1) fail(ErrorKind::Validation, "sample_count must be >= 1");
  if (config.max_word_tokens < 1) {
    fail(ErrorKind::Validation, "max_word_tokens must be >= 1");
  }
  SampleSet set;
  set.config = config;
  set.context_fingerprint = context_fingerprint(context);
  set.samples.resize(config.sample_count);
  parallel_for(config.sample_count, threads, [&](std::size_t i) {
    set.samples[i] = sample_word(model, context, config, context_index, i);
  });
  return set;
}

double score_word(const LanguageModel& model, std::span<const TokenId> context,
                  std::span<const TokenId> word) {
  const Lexicon& lex = model.lexicon();
  if (word.empty()) fail(ErrorKind::MalformedWord, "empty word");
  if (!lex.is_boundary(word[0])) {
    fail(ErrorKind::MalformedWord, "word does not start with a word-initial token");
  }
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (lex.is_boundary(word[i])) {
      fail(ErrorKind::MalformedWord,
           "word-initial token at position " + std::to_string(i) + " inside word");
    }
  }

  const auto initial =
      word_initial_distribution(lex, model.next_token_distribution(context));
  double bits = -std::log2(initial.probs[word[0]]);

  std::vector<TokenId> history(context.begin(), context.end());
  history.push_back(word[0]);
  for (std::size_t i = 1; i <= word.size(); ++i) {
    const auto cont =
        continuation_distribution(lex, model.next_token_distribution(history));
    const double p = i < word.size() ? cont.probs[word[i]] : cont.eow;
    bits += -std::log2(p);
    if (std::isinf(bits)) return std::numeric_limits<double>::infinity();
    if (i < word.size()) history.push_back(word[i]);
  }
  return bits + 0.0;
}

}  // namespace wordent
