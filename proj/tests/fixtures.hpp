#pragma once

#include "synchro/dfa.hpp"
#include "synchro/random_gen.hpp"
#include "synchro/set_cover.hpp"

namespace fixtures {

using synchro::Dfa;
using synchro::SetCoverInstance;

// n=2, k=2, both letters the identity. Never synchronizing.
inline Dfa identity2() {
  return Dfa::from_rows(2, 2, {{1, 2}, {1, 2}});
}

// Cerny-style n=3: letter 1 merges 1->2, letter 2 cycles 1->2->3->1.
inline Dfa c3() {
  return Dfa::from_rows(3, 2, {{2, 2, 3}, {2, 3, 1}});
}

// Single-letter map 1->2, 2->3, 3->1, 4->1, 5->4: a 3-cycle with a hanging
// path 5 -> 4 -> 1.
inline Dfa m5() {
  return Dfa::from_rows(5, 1, {{2, 3, 1, 1, 4}});
}

// M5 as letter 1 of a 2-letter automaton; letter 2 is the identity.
inline Dfa m5_embedded() {
  return Dfa::from_rows(5, 2, {{2, 3, 1, 1, 4}, {1, 2, 3, 4, 5}});
}

// Two disjoint copies of M5 on 10 states (single letter).
inline Dfa m5_twice() {
  return Dfa::from_rows(10, 1, {{2, 3, 1, 1, 4, 7, 8, 6, 6, 9}});
}

// U = {1,2,3}, subsets {1,2} and {2,3}; OPT = 2.
inline SetCoverInstance sc1() {
  SetCoverInstance inst;
  inst.universe_size = 3;
  inst.subsets = {{1, 2}, {2, 3}};
  return inst;
}

// k random permutation letters: permutations merge nothing, so never
// synchronizing for n >= 2.
inline Dfa permutation_dfa(int n, int k, std::uint64_t seed) {
  synchro::SplitMix64 rng(seed);
  Dfa d(n, 1);
  std::vector<std::vector<int>> rows;
  for (int x = 1; x <= k; ++x) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[i], perm[j]);
    }
    rows.push_back(std::move(perm));
  }
  return Dfa::from_rows(n, k, rows);
}

// Random automaton whose states split into two halves, each closed under
// every letter: at least two sink components, never synchronizing.
inline Dfa two_sink_dfa(int n, int k, std::uint64_t seed) {
  if (n < 2) throw synchro::ValidationError("two_sink_dfa needs n >= 2");
  synchro::SplitMix64 rng(seed);
  int half = n / 2;
  std::vector<std::vector<int>> rows(k, std::vector<int>(n));
  for (int x = 0; x < k; ++x)
    for (int q = 1; q <= n; ++q) {
      if (q <= half)
        rows[x][q - 1] = 1 + static_cast<int>(rng.below(half));
      else
        rows[x][q - 1] = half + 1 + static_cast<int>(rng.below(n - half));
    }
  return Dfa::from_rows(n, k, rows);
}

}  // namespace fixtures
