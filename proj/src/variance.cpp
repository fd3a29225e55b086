#include "wordent/variance.hpp"

#include <cmath>
#include <limits>

#include "wordent/errors.hpp"
#include "wordent/parallel.hpp"
#include "wordent/rng.hpp"
#include "wordent/stats.hpp"

namespace wordent {

namespace {

constexpr double kZeroMean = 1e-12;

std::optional<double> coefficient_of_variation(std::span<const double> values) {
  const double mu = stats::mean(values);
  const double sigma = stats::sample_sd(values).value_or(0.0);
  if (std::abs(mu) < kZeroMean) {
    if (sigma < kZeroMean) return 0.0;
    return std::nullopt;
  }
  return sigma / std::abs(mu);
}

}  // namespace

std::vector<std::size_t> default_sample_count_grid() {
  std::vector<std::size_t> ks;
  for (int j = 2; j <= 11; ++j) ks.push_back(std::size_t{1} << j);
  return ks;
}

std::vector<CVReport> bootstrap_cv(const LanguageModel& model,
                                   std::span<const Context> contexts,
                                   std::span<const RenyiOrder> orders,
                                   const CVOptions& options) {
  if (options.ks.empty()) fail(ErrorKind::Precondition, "sample-count grid is empty");
  for (std::size_t i = 0; i < options.ks.size(); ++i) {
    if (options.ks[i] < 1 || (i > 0 && options.ks[i] <= options.ks[i - 1])) {
      fail(ErrorKind::Precondition, "sample-count grid must be positive and increasing");
    }
  }
  if (options.n_boot < 2) fail(ErrorKind::Precondition, "n_boot must be at least 2");
  if (contexts.empty()) fail(ErrorKind::Precondition, "no contexts given");
  if (orders.empty()) fail(ErrorKind::Precondition, "no entropy orders given");
  for (auto order : orders) {
    if (order.kind() != RenyiOrder::Kind::Finite) {
      fail(ErrorKind::UnsupportedOrder, "bootstrap CV needs finite alpha > 0");
    }
  }

  const std::size_t n_orders = orders.size();
  const std::size_t n_ctx = contexts.size();
  const std::size_t n_k = options.ks.size();

  // cv[(k * n_ctx + i) * n_orders + o]
  std::vector<std::optional<double>> cv(n_k * n_ctx * n_orders);
  parallel_for(n_k * n_ctx, options.threads, [&](std::size_t job) {
    const std::size_t kpos = job / n_ctx;
    const std::size_t i = job % n_ctx;
    const std::size_t k = options.ks[kpos];

    SamplerConfig cfg = options.sampler;
    cfg.sample_count = k;
    cfg.seed = derive_seed(options.sampler.seed, k);
    const auto samples = sample_set(model, contexts[i], cfg, i).surprisals();

    StreamRng rng(derive_seed(cfg.seed, 0xB007), i, k);
    std::vector<double> resample(k);
    std::vector<std::vector<double>> values(n_orders,
                                            std::vector<double>(options.n_boot));
    for (std::size_t b = 0; b < options.n_boot; ++b) {
      for (auto& r : resample) r = samples[rng.below(k)];
      for (std::size_t o = 0; o < n_orders; ++o) {
        values[o][b] = mc_renyi_bits(resample, orders[o]);
      }
    }
    for (std::size_t o = 0; o < n_orders; ++o) {
      cv[job * n_orders + o] = coefficient_of_variation(values[o]);
    }
  });

  std::vector<CVReport> reports;
  for (std::size_t o = 0; o < n_orders; ++o) {
    CVReport report;
    report.order = orders[o];
    for (std::size_t kpos = 0; kpos < n_k; ++kpos) {
      CVRow row;
      row.k = options.ks[kpos];
      double sum = 0.0;
      std::size_t defined = 0;
      for (std::size_t i = 0; i < n_ctx; ++i) {
        const auto& v = cv[(kpos * n_ctx + i) * n_orders + o];
        row.per_word.push_back(v);
        if (v) {
          sum += *v;
          ++defined;
        } else {
          ++row.n_undefined;
        }
      }
      row.cv = defined > 0 ? sum / static_cast<double>(defined)
                           : std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back(std::move(row));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

CVReport bootstrap_cv(const LanguageModel& model, std::span<const Context> contexts,
                      RenyiOrder order, const CVOptions& options) {
  const RenyiOrder orders[] = {order};
  return bootstrap_cv(model, contexts, orders, options).front();
}

}  // namespace wordent
