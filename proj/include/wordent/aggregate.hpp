#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wordent {

struct TagStats {
  std::string tag;
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> sem;  // absent when count == 1
};

struct TagAggregate {
  std::vector<TagStats> tags;  // descending count, ties by tag name
};

inline constexpr std::size_t kDefaultTopTags = 10;

// Mean entropy and standard error per tag. Words with an empty tag are
// skipped. Throws Validation on empty or misaligned input.
TagAggregate aggregate_by_tag(std::span<const double> entropies,
                              std::span<const std::string> tags,
                              std::optional<std::size_t> top_k = kDefaultTopTags);

}  // namespace wordent
