#pragma once

#include <cstddef>
#include <functional>

namespace wordent {

unsigned default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// visited exactly once; callers write results into per-index slots so the
// outcome matches sequential execution. The first exception thrown by any
// worker is rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace wordent
