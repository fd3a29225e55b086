#include "wordent/aggregate.hpp"

#include <algorithm>
#include <map>

#include "wordent/errors.hpp"
#include "wordent/stats.hpp"

namespace wordent {

TagAggregate aggregate_by_tag(std::span<const double> entropies,
                              std::span<const std::string> tags,
                              std::optional<std::size_t> top_k) {
  if (entropies.size() != tags.size()) {
    fail(ErrorKind::Validation, "entropies and tags are not aligned");
  }
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!tags[i].empty()) groups[tags[i]].push_back(entropies[i]);
  }
  if (groups.empty()) fail(ErrorKind::Validation, "no tagged words to aggregate");

  TagAggregate out;
  for (const auto& [tag, values] : groups) {
    out.tags.push_back({tag, values.size(), stats::mean(values), stats::sem(values)});
  }
  std::stable_sort(out.tags.begin(), out.tags.end(),
                   [](const TagStats& a, const TagStats& b) { return a.count > b.count; });
  if (top_k && out.tags.size() > *top_k) out.tags.resize(*top_k);
  return out;
}

}  // namespace wordent
