#include "wordent/rng.hpp"

namespace wordent {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t context_index,
                     std::uint64_t stream_index) {
  std::seed_seq seq{lo32(seed),          hi32(seed),
                    lo32(context_index), hi32(context_index),
                    lo32(stream_index),  hi32(stream_index)};
  engine_.seed(seq);
}

std::uint64_t StreamRng::below(std::uint64_t n) {
  // Rejection sampling keeps the draw exactly uniform and portable.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t basis) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace wordent
