#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "synchro/dfa.hpp"

namespace synchro {

namespace detail {

// Inverse transition relation in CSR form, one block per letter.
struct InverseTable {
  int n = 0;
  int k = 0;
  // off[(x-1)*(n+1) + s] .. off[(x-1)*(n+1) + s + 1) indexes states q with q.x = s.
  std::vector<std::uint32_t> off;
  std::vector<std::uint32_t> dat;

  std::uint32_t begin(int x, int s) const {
    return off[static_cast<std::size_t>(x - 1) * (n + 1) + (s - 1)];
  }
  std::uint32_t end(int x, int s) const {
    return off[static_cast<std::size_t>(x - 1) * (n + 1) + s];
  }
};

inline InverseTable build_inverse(const Dfa& d) {
  const int n = d.n();
  InverseTable inv;
  inv.n = n;
  inv.k = d.k();
  inv.off.assign(static_cast<std::size_t>(d.k()) * (n + 1), 0);
  inv.dat.resize(static_cast<std::size_t>(d.k()) * n);
  std::vector<std::uint32_t> cursor(n);
  for (int x = 1; x <= d.k(); ++x) {
    std::uint32_t* o = inv.off.data() + static_cast<std::size_t>(x - 1) * (n + 1);
    const std::uint32_t base = static_cast<std::uint32_t>(x - 1) * n;
    for (int q = 1; q <= n; ++q) ++o[d.step(q, x)];
    o[0] = base;
    for (int i = 1; i <= n; ++i) o[i] += o[i - 1];
    for (int i = 0; i < n; ++i) cursor[i] = o[i];
    for (int q = 1; q <= n; ++q)
      inv.dat[cursor[d.step(q, x) - 1]++] = static_cast<std::uint32_t>(q);
  }
  return inv;
}

// Triangular index of the unordered pair {p,q}, 1-based states, p != q.
inline std::uint64_t pair_index(int p, int q) {
  int a = p - 1, b = q - 1;
  if (a > b) std::swap(a, b);
  return static_cast<std::uint64_t>(b) * (b - 1) / 2 + a;
}

}  // namespace detail

/// Backward multi-source BFS table over unordered state pairs, rooted at the
/// diagonal of the square automaton. dist gives the shortest merging-word
/// length per pair; via gives the first letter of one such word.
struct PairBfsTable {
  int n = 0;
  std::vector<std::int32_t> dist;  // triangular index; -1 = no merging word
  std::vector<std::int32_t> via;
  std::uint64_t reached = 0;

  std::uint64_t total_pairs() const {
    return static_cast<std::uint64_t>(n) * (n - 1) / 2;
  }
  bool all_pairs_mergeable() const { return reached == total_pairs(); }
  std::int32_t pair_dist(int p, int q) const {
    return p == q ? 0 : dist[detail::pair_index(p, q)];
  }
};

/// Full pair table with word-reconstruction data. Quadratic memory; intended
/// for merge words and the greedy solver, not for bulk checking at large n.
inline PairBfsTable compute_pair_table(const Dfa& d) {
  const int n = d.n();
  PairBfsTable t;
  t.n = n;
  const std::uint64_t total = t.total_pairs();
  t.dist.assign(total, -1);
  t.via.assign(total, -1);
  auto inv = detail::build_inverse(d);

  std::vector<std::uint64_t> queue;
  queue.reserve(total);

  // Distance-1 layer: pairs of distinct preimages of one state under one letter.
  for (int x = 1; x <= d.k(); ++x) {
    for (int s = 1; s <= n; ++s) {
      for (std::uint32_t i = inv.begin(x, s); i != inv.end(x, s); ++i) {
        for (std::uint32_t j = i + 1; j != inv.end(x, s); ++j) {
          std::uint64_t id = detail::pair_index(inv.dat[i], inv.dat[j]);
          if (t.dist[id] < 0) {
            t.dist[id] = 1;
            t.via[id] = x;
            queue.push_back(id);
          }
        }
      }
    }
  }

  std::size_t head = 0;
  while (head < queue.size()) {
    std::uint64_t id = queue[head++];
    // Recover (u,v) from the triangular index.
    std::uint64_t b = static_cast<std::uint64_t>(
        (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(id))) / 2.0);
    while (b * (b - 1) / 2 > id) --b;
    while ((b + 1) * b / 2 <= id) ++b;
    int v = static_cast<int>(b) + 1;
    int u = static_cast<int>(id - b * (b - 1) / 2) + 1;
    std::int32_t nd = t.dist[id] + 1;
    for (int x = 1; x <= d.k(); ++x) {
      for (std::uint32_t i = inv.begin(x, u); i != inv.end(x, u); ++i) {
        for (std::uint32_t j = inv.begin(x, v); j != inv.end(x, v); ++j) {
          std::uint64_t pid = detail::pair_index(inv.dat[i], inv.dat[j]);
          if (t.dist[pid] < 0) {
            t.dist[pid] = nd;
            t.via[pid] = x;
            queue.push_back(pid);
          }
        }
      }
    }
  }
  t.reached = queue.size();
  return t;
}

namespace detail {

// Reachability-only variant of the pair BFS with a queue of 32-bit pair ids.
inline bool quadratic_check_queue(const Dfa& d, const InverseTable& inv) {
  const int n = d.n();
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::vector<std::uint64_t> seen((total + 63) / 64, 0);
  std::vector<std::uint32_t> queue;
  std::uint64_t reached = 0;

  auto mark = [&](int p, int q) {
    std::uint64_t id = pair_index(p, q);
    if ((seen[id >> 6] >> (id & 63)) & 1ULL) return;
    seen[id >> 6] |= 1ULL << (id & 63);
    ++reached;
    queue.push_back(static_cast<std::uint32_t>(id));
  };

  for (int x = 1; x <= d.k(); ++x)
    for (int s = 1; s <= n; ++s)
      for (std::uint32_t i = inv.begin(x, s); i != inv.end(x, s); ++i)
        for (std::uint32_t j = i + 1; j != inv.end(x, s); ++j)
          mark(inv.dat[i], inv.dat[j]);

  std::size_t head = 0;
  while (head < queue.size() && reached < total) {
    std::uint64_t id = queue[head++];
    std::uint64_t b = static_cast<std::uint64_t>(
        (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(id))) / 2.0);
    while (b * (b - 1) / 2 > id) --b;
    while ((b + 1) * b / 2 <= id) ++b;
    int v = static_cast<int>(b) + 1;
    int u = static_cast<int>(id - b * (b - 1) / 2) + 1;
    for (int x = 1; x <= d.k(); ++x)
      for (std::uint32_t i = inv.begin(x, u); i != inv.end(x, u); ++i)
        for (std::uint32_t j = inv.begin(x, v); j != inv.end(x, v); ++j)
          mark(inv.dat[i], inv.dat[j]);
  }
  return reached == total;
}

// Level-synchronized variant: three bitmaps instead of an explicit queue, so
// memory stays near 3 bits per pair even when every pair is reachable.
inline bool quadratic_check_bitmap(const Dfa& d, const InverseTable& inv) {
  const int n = d.n();
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::size_t words = (total + 63) / 64;
  std::vector<std::uint64_t> seen(words, 0), cur(words, 0), next(words, 0);
  std::uint64_t reached = 0;

  auto mark = [&](int p, int q) {
    std::uint64_t id = pair_index(p, q);
    if ((seen[id >> 6] >> (id & 63)) & 1ULL) return;
    seen[id >> 6] |= 1ULL << (id & 63);
    next[id >> 6] |= 1ULL << (id & 63);
    ++reached;
  };

  for (int x = 1; x <= d.k(); ++x)
    for (int s = 1; s <= n; ++s)
      for (std::uint32_t i = inv.begin(x, s); i != inv.end(x, s); ++i)
        for (std::uint32_t j = i + 1; j != inv.end(x, s); ++j)
          mark(inv.dat[i], inv.dat[j]);

  while (reached < total) {
    std::swap(cur, next);
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    // Row-wise scan: pair ids for fixed v occupy one contiguous range.
    for (int v = 2; v <= n; ++v) {
      std::uint64_t row = static_cast<std::uint64_t>(v - 1) * (v - 2) / 2;
      std::uint64_t lo = row, hi = row + (v - 1);
      for (std::uint64_t w = lo >> 6; w <= (hi - 1) >> 6; ++w) {
        std::uint64_t bits = cur[w];
        if (!bits) continue;
        std::uint64_t base = w << 6;
        if (base < lo) bits &= ~0ULL << (lo - base);
        if (base + 64 > hi) bits &= ~0ULL >> (base + 64 - hi);
        while (bits) {
          int b = std::countr_zero(bits);
          bits &= bits - 1;
          int u = static_cast<int>(base + b - row) + 1;
          any = true;
          for (int x = 1; x <= d.k(); ++x)
            for (std::uint32_t i = inv.begin(x, u); i != inv.end(x, u); ++i)
              for (std::uint32_t j = inv.begin(x, v); j != inv.end(x, v); ++j)
                mark(inv.dat[i], inv.dat[j]);
        }
      }
    }
    if (!any) break;
  }
  return reached == total;
}

}  // namespace detail

/// IsSynch: deterministic quadratic synchronizability check via backward BFS
/// from the diagonal in the square automaton. Correct on every instance.
inline bool is_synchronizing_quadratic(const Dfa& d) {
  if (d.n() == 1) return true;
  auto inv = detail::build_inverse(d);
  // Queue ids are 32-bit; beyond ~2^14 states the queue alone would outgrow
  // the bitmaps, so switch to the level-synchronized form.
  if (d.n() <= (1 << 14)) return detail::quadratic_check_queue(d, inv);
  return detail::quadratic_check_bitmap(d, inv);
}

/// Shortest word merging p and q, or nullopt when none exists.
inline std::optional<Word> merge_word(const Dfa& d, const PairBfsTable& t, int p,
                                      int q) {
  d.check_state(p);
  d.check_state(q);
  if (p == q) return Word{};
  std::int32_t dist = t.dist[detail::pair_index(p, q)];
  if (dist < 0) return std::nullopt;
  Word w;
  w.letters.reserve(dist);
  while (p != q) {
    int x = t.via[detail::pair_index(p, q)];
    w.letters.push_back(x);
    p = d.step(p, x);
    q = d.step(q, x);
  }
  return w;
}

inline std::optional<Word> merge_word(const Dfa& d, int p, int q) {
  d.check_state(p);
  d.check_state(q);
  if (p == q) return Word{};
  return merge_word(d, compute_pair_table(d), p, q);
}

}  // namespace synchro
