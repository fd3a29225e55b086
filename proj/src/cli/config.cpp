#include "wordent/cli/config.hpp"

#include "wordent/parallel.hpp"
#include "wordent/tsv.hpp"
#include "wordent/variance.hpp"

namespace wordent::cli {

RunConfig::RunConfig()
    : ks(default_sample_count_grid()), n_boot(kDefaultBootstrapResamples) {}

std::string config_echo(const RunConfig& config) {
  std::string ks;
  for (std::size_t k : config.ks) {
    if (!ks.empty()) ks += ',';
    ks += std::to_string(k);
  }
  return "# samples=" + std::to_string(config.samples) +
         " alpha=" + fixed6(config.alpha) +
         " max_word_tokens=" + std::to_string(config.max_word_tokens) +
         " seed=" + std::to_string(config.seed) +
         " n_boot=" + std::to_string(config.n_boot) + " ks=" + ks +
         " lambda=" + fixed6(config.lambda);
}

unsigned effective_threads(const RunConfig& config) {
  return config.threads == 0 ? default_thread_count() : config.threads;
}

}  // namespace wordent::cli
