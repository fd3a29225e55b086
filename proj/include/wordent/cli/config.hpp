#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordent/lexicon.hpp"

namespace wordent::cli {

inline constexpr std::size_t kDefaultSamples = 512;
inline constexpr std::size_t kDefaultMaxWordTokens = 20;
inline constexpr double kDefaultAlpha = 0.5;

/// Every knob a subcommand can read. Defaults reproduce the reference
/// experimental setup: 512 samples per context, a 20-token word cap,
/// alpha = 1/2, sample-count grid 2^2..2^11 and 1000 bootstrap resamples.
struct RunConfig {
  std::string lexicon;
  std::string lm;
  std::string corpus;
  std::string rt;
  std::string unigram;
  std::string entropies;  // precomputed estimate table (aggregate)
  std::string output;     // empty = stdout

  bool infer_boundary = false;
  std::string marker = std::string(kDefaultBoundaryMarker);
  double lambda = 1.0;
  std::optional<std::size_t> order;

  std::size_t samples = kDefaultSamples;
  double alpha = kDefaultAlpha;
  std::size_t max_word_tokens = kDefaultMaxWordTokens;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = machine parallelism

  std::size_t depth = 20;
  double residual_tol = 1e-6;

  std::vector<std::size_t> ks;
  std::size_t n_boot = 1000;

  std::size_t n_perm = 10000;
  double heldout_frac = 1.0 / 3.0;
  std::string response = "spr";
  bool log_rt = false;
  std::vector<std::string> variants;

  std::size_t top_k = 10;  // 0 = all tags

  RunConfig();
};

// `# samples=... alpha=... max_word_tokens=... seed=... ...` header line
// (without trailing newline) recording the settings that shape the output.
std::string config_echo(const RunConfig& config);

unsigned effective_threads(const RunConfig& config);

}  // namespace wordent::cli
