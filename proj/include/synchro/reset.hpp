#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "synchro/dfa.hpp"
#include "synchro/pair_table.hpp"

namespace synchro {

enum class ResetMethod { Exact, Greedy };

struct ResetResult {
  std::int64_t length = 0;
  Word word;
  ResetMethod method = ResetMethod::Exact;
};

namespace detail {

// Per-letter byte tables: image of any <=64-state subset is an OR of 8
// precomputed chunks, so the subset BFS steps in a handful of loads.
struct MaskStepper {
  int n;
  int k;
  int nbytes;
  std::vector<std::uint64_t> tab;  // [letter][byte_pos][256]

  explicit MaskStepper(const Dfa& d) : n(d.n()), k(d.k()), nbytes((d.n() + 7) / 8) {
    tab.assign(static_cast<std::size_t>(k) * nbytes * 256, 0);
    for (int x = 1; x <= k; ++x)
      for (int bp = 0; bp < nbytes; ++bp) {
        std::uint64_t* t =
            tab.data() + (static_cast<std::size_t>(x - 1) * nbytes + bp) * 256;
        for (int byte = 0; byte < 256; ++byte) {
          std::uint64_t img = 0;
          for (int b = 0; b < 8; ++b) {
            if (!(byte & (1 << b))) continue;
            int q = bp * 8 + b + 1;
            if (q <= n) img |= 1ULL << (d.step(q, x) - 1);
          }
          t[byte] = img;
        }
      }
  }

  std::uint64_t image(std::uint64_t mask, int x) const {
    const std::uint64_t* t =
        tab.data() + static_cast<std::size_t>(x - 1) * nbytes * 256;
    std::uint64_t img = 0;
    for (int bp = 0; bp < nbytes; ++bp)
      img |= t[static_cast<std::size_t>(bp) * 256 + ((mask >> (bp * 8)) & 0xFF)];
    return img;
  }
};

}  // namespace detail

/// Exact reset threshold by forward BFS from the full state set over the
/// reachable subset space. Subsets are 64-bit masks, stored sparsely, so the
/// memory cost follows the reachable subspace rather than 2^n.
///
/// Returns nullopt iff the automaton is not synchronizing. Throws
/// CapacityError for n > 64 or when the reachable subspace exceeds the
/// exploration cap; use greedy_reset beyond that.
inline std::optional<ResetResult> shortest_reset(const Dfa& d) {
  constexpr int kMaxStates = 64;
  constexpr std::size_t kMaxVisited = std::size_t{1} << 24;
  if (d.n() > kMaxStates)
    throw CapacityError("shortest_reset supports n <= 64; use greedy_reset");
  const int n = d.n();
  const std::uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  if (n == 1) return ResetResult{0, Word{}, ResetMethod::Exact};

  detail::MaskStepper stepper(d);
  struct Prev {
    std::uint64_t parent;
    std::int32_t letter;
  };
  std::unordered_map<std::uint64_t, Prev> seen;
  seen.reserve(1 << 12);
  std::vector<std::uint64_t> queue;
  queue.push_back(full);
  seen.emplace(full, Prev{0, 0});

  std::uint64_t final_mask = 0;
  bool found = false;
  for (std::size_t head = 0; head < queue.size() && !found; ++head) {
    std::uint64_t cur = queue[head];
    for (int x = 1; x <= d.k() && !found; ++x) {
      std::uint64_t img = stepper.image(cur, x);
      if (seen.count(img)) continue;
      seen.emplace(img, Prev{cur, x});
      if (std::popcount(img) == 1) {
        final_mask = img;
        found = true;
        break;
      }
      queue.push_back(img);
      if (seen.size() > kMaxVisited)
        throw CapacityError("subset BFS exceeded exploration cap; use greedy_reset");
    }
  }
  if (!found) return std::nullopt;

  Word w;
  std::uint64_t cur = final_mask;
  while (cur != full) {
    const Prev& p = seen.at(cur);
    w.letters.push_back(p.letter);
    cur = p.parent;
  }
  std::reverse(w.letters.begin(), w.letters.end());
  return ResetResult{static_cast<std::int64_t>(w.letters.size()), std::move(w),
                     ResetMethod::Exact};
}

/// Greedy polynomial upper bound: repeatedly merge the closest pair in the
/// current image set (ties broken by smallest (p,q)) until a single state
/// remains. Returns nullopt iff the automaton is not synchronizing.
inline std::optional<ResetResult> greedy_reset(const Dfa& d) {
  const int n = d.n();
  if (n == 1) return ResetResult{0, Word{}, ResetMethod::Greedy};
  PairBfsTable table = compute_pair_table(d);
  if (!table.all_pairs_mergeable()) return std::nullopt;

  std::vector<int> cur(n);
  for (int q = 1; q <= n; ++q) cur[q - 1] = q;
  Word w;
  while (cur.size() > 1) {
    int best_p = 0, best_q = 0;
    std::int32_t best = -1;
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        std::int32_t dist = table.pair_dist(cur[i], cur[j]);
        if (best < 0 || dist < best) {
          best = dist;
          best_p = cur[i];
          best_q = cur[j];
        }
      }
    Word v = *merge_word(d, table, best_p, best_q);
    w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
    // Apply the merge word to the whole current set, dedupe, keep sorted.
    std::vector<int> next;
    next.reserve(cur.size());
    for (int q : cur) {
      int t = q;
      for (int x : v.letters) t = d.step(t, x);
      next.push_back(t);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return ResetResult{static_cast<std::int64_t>(w.letters.size()), std::move(w),
                     ResetMethod::Greedy};
}

/// Performance ratio R = approx / exact, defined for exact >= 1.
inline double performance_ratio(const ResetResult& approx, const ResetResult& exact) {
  if (exact.method != ResetMethod::Exact)
    throw ValidationError("performance_ratio needs an exact baseline");
  if (exact.length == 0)
    throw ValidationError("performance ratio undefined for reset threshold 0");
  return static_cast<double>(approx.length) / static_cast<double>(exact.length);
}

/// Classical Cerny automaton: letter 1 maps 1 -> 2 and fixes the rest,
/// letter 2 is the cyclic shift q -> q mod n + 1. Synchronizing for all n,
/// with reset threshold (n-1)^2.
inline Dfa gen_cerny(int n) {
  if (n < 2) throw ValidationError("gen_cerny requires n >= 2");
  Dfa d(n, 2);
  for (int q = 1; q <= n; ++q) {
    d.set(q, 1, q == 1 ? 2 : q);
    d.set(q, 2, q % n + 1);
  }
  return d;
}

}  // namespace synchro
