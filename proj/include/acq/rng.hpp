#pragma once

// Seeded random streams and the samplers built on them.
//
// Stream splitting: replicate i of a run seeded with s uses a std::mt19937_64 seeded with
//   splitmix64(splitmix64(s) ^ splitmix64(i + 0x9e3779b97f4a7c15))
// so the draws of a replicate depend only on (s, i), never on thread count or scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace acq {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct RngConfig {
  std::uint64_t seed = 0x5eed;

  std::uint64_t substream_seed(std::uint64_t index) const noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
  }
  Engine substream(std::uint64_t index) const { return Engine(substream_seed(index)); }

  /// A config whose streams do not overlap with this one's (used for pilot runs).
  RngConfig derived(std::uint64_t salt) const noexcept { return RngConfig{splitmix64(seed ^ splitmix64(~salt))}; }
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-and-reject).
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(eng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(eng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Poisson(1) by inversion against a cached cumulative table.
class Poisson1Sampler {
 public:
  static constexpr std::size_t kTable = 24;

  Poisson1Sampler() {
    double pmf = std::exp(-1.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < kTable; ++k) {
      acc += pmf;
      cdf_[k] = acc;
      pmf /= static_cast<double>(k + 1);
    }
    cdf_[kTable - 1] = 1.0;
  }

  std::uint64_t operator()(Engine& eng) const {
    double u = uniform01(eng);
    std::uint64_t k = 0;
    while (u >= cdf_[k]) ++k;
    return k;
  }

 private:
  std::array<double, kTable> cdf_{};
};

inline std::uint64_t binomial(Engine& eng, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(eng);
}

/// Occupancy counts of `chips` distinguishable chips thrown uniformly on `bins` bins, by
/// conditional binomials: O(bins) work regardless of the chip count.
inline std::vector<std::uint64_t> multinomial_uniform(Engine& eng, std::uint64_t chips, std::size_t bins) {
  std::vector<std::uint64_t> counts(bins, 0);
  std::uint64_t remaining = chips;
  for (std::size_t i = 0; i + 1 < bins && remaining > 0; ++i) {
    counts[i] = binomial(eng, remaining, 1.0 / static_cast<double>(bins - i));
    remaining -= counts[i];
  }
  if (bins > 0) counts[bins - 1] += remaining;
  return counts;
}

/// Occupancy counts by throwing every chip individually: O(chips).
inline std::vector<std::uint64_t> throw_chips(Engine& eng, std::uint64_t chips, std::size_t bins) {
  std::vector<std::uint64_t> counts(bins, 0);
  for (std::uint64_t c = 0; c < chips; ++c) ++counts[uniform_below(eng, bins)];
  return counts;
}

/// Uniform random permutation of 1..n (Fisher-Yates).
inline std::vector<std::uint64_t> random_ranks(Engine& eng, std::size_t n) {
  std::vector<std::uint64_t> ranks(n);
  std::iota(ranks.begin(), ranks.end(), std::uint64_t{1});
  for (std::size_t i = n; i > 1; --i) std::swap(ranks[i - 1], ranks[uniform_below(eng, i)]);
  return ranks;
}

}  // namespace acq
