#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wordent/lm_provider.hpp"

namespace wordent {

struct SamplerConfig {
  std::size_t sample_count = 512;
  std::size_t max_word_tokens = 20;
  std::uint64_t seed = 0;
};

struct WordSample {
  std::vector<TokenId> tokens;  // first is word-initial, the rest internal
  double surprisal_bits = 0.0;
  bool truncated = false;       // stopped at the token cap without EOW

  bool operator==(const WordSample&) const = default;
};

struct SampleSet {
  std::vector<WordSample> samples;
  std::uint64_t context_fingerprint = 0;
  SamplerConfig config;

  std::vector<double> surprisals() const;
  std::size_t truncated_count() const;
};

std::uint64_t context_fingerprint(std::span<const TokenId> context);

// Draws one word by ancestral sampling: a word-initial token from the
// boundary-renormalized distribution, then internal tokens or EOW until EOW
// is drawn or `max_word_tokens` tokens have been produced. `uniform` supplies
// draws in [0, 1).
WordSample sample_word(const LanguageModel& model, std::span<const TokenId> context,
                       std::size_t max_word_tokens,
                       const std::function<double()>& uniform);

// Same, with randomness from the stream keyed by (seed, context_index,
// stream_index).
WordSample sample_word(const LanguageModel& model, std::span<const TokenId> context,
                       const SamplerConfig& config, std::uint64_t context_index,
                       std::uint64_t stream_index);

// config.sample_count draws on streams 0..sample_count-1. Output does not
// depend on `threads`.
SampleSet sample_set(const LanguageModel& model, std::span<const TokenId> context,
                     const SamplerConfig& config, std::uint64_t context_index = 0,
                     unsigned threads = 1);

// Surprisal in bits of a complete word under the boundary-renormalized word
// process: word-initial token, internal tokens, then EOW. Returns +infinity
// when some step has zero probability. Throws MalformedWord if the word does
// not start with a boundary token or contains one later.
double score_word(const LanguageModel& model, std::span<const TokenId> context,
                  std::span<const TokenId> word);

}  // namespace wordent
