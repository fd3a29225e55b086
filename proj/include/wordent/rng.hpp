#pragma once

#include <cstdint>
#include <random>

namespace wordent {

// Random stream keyed by (seed, context index, stream index). Every sampled
// word owns its stream, so results do not depend on how work is scheduled.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t context_index,
            std::uint64_t stream_index);

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double operator()() { return uniform(); }

 private:
  std::mt19937_64 engine_;
};

// Mixes a tag into a seed so that independent sub-experiments draw from
// disjoint streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Stable 64-bit FNV-1a hash, used where std::hash would not be reproducible.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace wordent
