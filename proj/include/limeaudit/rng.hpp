#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace limeaudit {

/// SplitMix64 mixing step. Used for seed derivation only.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derive an independent substream seed from a master seed and a key
/// (trial index, scale index, stage id). The derivation is pure, so
/// substreams can be consumed in any order with identical results.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
  return splitmix64(master ^ splitmix64(key));
}

/// Deterministic random generator with fixed sampling algorithms.
///
/// std::mt19937_64 output is pinned by the standard, but the standard
/// distributions are not; uniform and normal variates are therefore
/// generated here with explicit algorithms so that a seed reproduces the
/// same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; generates pairs, caches the spare.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unbiased uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// k distinct indices drawn uniformly from [0, n), in draw order
  /// (partial Fisher-Yates over an index table).
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(i) +
                     static_cast<std::size_t>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      out.push_back(pool[static_cast<std::size_t>(i)]);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace limeaudit
