#pragma once

#include <cstdint>
#include <vector>

#include "synchro/dfa.hpp"
#include "synchro/pair_table.hpp"
#include "synchro/set_cover.hpp"

namespace synchro {

/// SplitMix64: the fixed, documented generator behind every sampled corpus.
/// Identical seeds give identical streams on every platform.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound) by rejection: draws below 2^64 mod bound are
  /// redrawn, the rest are reduced mod bound. Bias-free and reproducible.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t r = next();
    while (r < threshold) r = next();
    return r % bound;
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Uniform sample from the Omega model: each letter is an independent
/// uniformly random map. Fill order is letter-major, state-minor, so a given
/// (n, k, seed) triple names one automaton forever.
inline Dfa sample_dfa(int n, int k, std::uint64_t seed) {
  Dfa d(n, k);
  SplitMix64 rng(seed);
  for (int x = 1; x <= k; ++x)
    for (int q = 1; q <= n; ++q)
      d.set(q, x, static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1);
  return d;
}

/// Fraction of sampled automata the quadratic checker accepts. Trial i uses
/// seed + i, so results are independent of evaluation order.
inline double estimate_sync_probability(int n, int k, int trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  int yes = 0;
  for (int i = 0; i < trials; ++i)
    if (is_synchronizing_quadratic(sample_dfa(n, k, seed + static_cast<std::uint64_t>(i))))
      ++yes;
  return static_cast<double>(yes) / static_cast<double>(trials);
}

/// Random Set-Cover instance: each element joins each subset independently
/// with the given density; uncovered elements are then added to subset 1, and
/// any still-empty subset j receives element (j-1) mod n + 1.
inline SetCoverInstance sample_setcover(int n, int m, double density,
                                        std::uint64_t seed) {
  if (n < 1 || m < 1) throw ValidationError("set cover sizes must be >= 1");
  if (density < 0.0 || density > 1.0)
    throw ValidationError("density must lie in [0,1]");
  SetCoverInstance inst;
  inst.universe_size = n;
  inst.subsets.assign(m, {});
  SplitMix64 rng(seed);
  std::vector<std::uint8_t> covered(n + 1, 0);
  for (int j = 0; j < m; ++j)
    for (int e = 1; e <= n; ++e)
      if (rng.unit() < density) {
        inst.subsets[j].push_back(e);
        covered[e] = 1;
      }
  for (int e = 1; e <= n; ++e)
    if (!covered[e]) inst.subsets[0].push_back(e);
  std::sort(inst.subsets[0].begin(), inst.subsets[0].end());
  for (int j = 0; j < m; ++j)
    if (inst.subsets[j].empty()) inst.subsets[j].push_back((j % n) + 1);
  inst.validate();
  return inst;
}

}  // namespace synchro
