#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <span>

namespace wordent::stats {

inline double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

// Sample standard deviation (n - 1 denominator); absent for fewer than two values.
inline std::optional<double> sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline std::optional<double> sem(std::span<const double> xs) {
  auto sd = sample_sd(xs);
  if (!sd) return std::nullopt;
  return *sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace wordent::stats
