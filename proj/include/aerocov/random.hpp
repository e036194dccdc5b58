#pragma once

// Counter-derived random substreams: the stream for work item k depends only
// on (master_seed, k), never on which worker runs it or in what order.

#include <cstdint>
#include <random>

namespace aerocov {

using RandomStream = std::mt19937_64;

struct RngSpec {
  std::uint64_t master_seed = 0x5eed'a11c'0ffe'e000ULL;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for item `index` under `seed`; used both for snapshots and for
/// sweep grid points.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index ^ 0xa5a5a5a5a5a5a5a5ULL));
}

inline RandomStream substream(const RngSpec& spec, std::uint64_t index) {
  const std::uint64_t a = derive_seed(spec.master_seed, index);
  const std::uint64_t b = mix64(a);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return RandomStream(seq);
}

}  // namespace aerocov
