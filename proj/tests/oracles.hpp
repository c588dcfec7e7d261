#pragma once

// Independent brute-force oracles used only by tests. These deliberately use
// different algorithms and encodings than the library paths they check.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "synchro/cluster.hpp"
#include "synchro/dfa.hpp"
#include "synchro/fast_check.hpp"

namespace oracles {

using synchro::Dfa;

// Exact reset threshold by dense value iteration over all 2^n subsets:
// f(singleton) = 0, f(S) = 1 + min_x f(S.x), iterated to a fixpoint.
// Distinct from the library's sparse forward BFS in both direction and
// encoding. n <= 20.
inline std::optional<int> rt_value_iteration(const Dfa& d) {
  const int n = d.n();
  if (n > 20) throw std::runtime_error("oracle limited to n <= 20");
  const std::uint32_t full = (1u << n) - 1;
  const int inf = std::numeric_limits<int>::max() / 2;
  std::vector<int> f(full + 1, inf);
  for (int q = 0; q < n; ++q) f[1u << q] = 0;

  // Image of each subset under each letter, computed bit by bit.
  auto image = [&](std::uint32_t s, int x) {
    std::uint32_t img = 0;
    for (int q = 0; q < n; ++q)
      if (s & (1u << q)) img |= 1u << (d.step(q + 1, x) - 1);
    return img;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (std::popcount(s) < 2) continue;
      int best = inf;
      for (int x = 1; x <= d.k(); ++x) {
        int v = f[image(s, x)];
        if (v + 1 < best) best = v + 1;
      }
      if (best < f[s]) {
        f[s] = best;
        changed = true;
      }
    }
  }
  if (f[full] >= inf) return std::nullopt;
  return f[full];
}

inline bool is_synchronizing_bruteforce(const Dfa& d) {
  return rt_value_iteration(d).has_value();
}

// Shortest merging-word length by forward BFS over ordered state pairs,
// the opposite direction of the library's backward multi-source BFS.
inline std::optional<int> merge_distance_forward(const Dfa& d, int p, int q) {
  if (p == q) return 0;
  const int n = d.n();
  std::vector<int> dist(static_cast<std::size_t>(n + 1) * (n + 1), -1);
  auto id = [n](int a, int b) { return a * (n + 1) + b; };
  std::queue<std::pair<int, int>> bfs;
  bfs.push({p, q});
  dist[id(p, q)] = 0;
  while (!bfs.empty()) {
    auto [u, v] = bfs.front();
    bfs.pop();
    for (int x = 1; x <= d.k(); ++x) {
      int nu = d.step(u, x), nv = d.step(v, x);
      if (nu == nv) return dist[id(u, v)] + 1;
      if (dist[id(nu, nv)] < 0) {
        dist[id(nu, nv)] = dist[id(u, v)] + 1;
        bfs.push({nu, nv});
      }
    }
  }
  return std::nullopt;
}

// Sink components via pairwise reachability closure.
inline std::vector<std::vector<int>> sink_components_bruteforce(const Dfa& d) {
  const int n = d.n();
  std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(n + 1, false));
  for (int q = 1; q <= n; ++q) {
    // BFS from q over all letters.
    std::vector<int> stack{q};
    reach[q][q] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int x = 1; x <= d.k(); ++x) {
        int v = d.step(u, x);
        if (!reach[q][v]) {
          reach[q][v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<int> comp(n + 1, -1);
  int ncomp = 0;
  for (int q = 1; q <= n; ++q) {
    if (comp[q] >= 0) continue;
    comp[q] = ncomp;
    for (int r = q + 1; r <= n; ++r)
      if (reach[q][r] && reach[r][q]) comp[r] = ncomp;
    ++ncomp;
  }
  std::vector<bool> sink(ncomp, true);
  for (int q = 1; q <= n; ++q)
    for (int x = 1; x <= d.k(); ++x)
      if (comp[d.step(q, x)] != comp[q]) sink[comp[q]] = false;
  std::vector<std::vector<int>> out(ncomp);
  for (int q = 1; q <= n; ++q)
    if (sink[comp[q]]) out[comp[q]].push_back(q);
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const std::vector<int>& v) { return v.empty(); }),
            out.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Per-state functional-graph facts by plain walking: the cycle entry point,
// the level, and the cluster partition via union-find over q -- q.x edges.
struct WalkedStructure {
  std::vector<int> level;      // 1-based state -> distance to cycle
  std::vector<int> tree_root;  // first cycle state on the walk
  std::vector<int> cluster_rep;  // smallest state in the component
  std::map<int, int> cycle_len_by_rep;
};

inline WalkedStructure walk_structure(const Dfa& d, int x) {
  const int n = d.n();
  WalkedStructure ws;
  ws.level.assign(n + 1, 0);
  ws.tree_root.assign(n + 1, 0);
  ws.cluster_rep.assign(n + 1, 0);

  std::vector<bool> on_cycle(n + 1, false);
  for (int q = 1; q <= n; ++q) {
    int r = q;
    for (int i = 0; i < n; ++i) r = d.step(r, x);  // n steps lands on the cycle
    // r is on q's cycle; mark the whole cycle.
    int c = r;
    do {
      on_cycle[c] = true;
      c = d.step(c, x);
    } while (c != r);
  }
  for (int q = 1; q <= n; ++q) {
    int lvl = 0, c = q;
    while (!on_cycle[c]) {
      ++lvl;
      c = d.step(c, x);
    }
    ws.level[q] = lvl;
    ws.tree_root[q] = c;
  }
  // Components: union states with their images.
  std::vector<int> parent(n + 1);
  for (int q = 1; q <= n; ++q) parent[q] = q;
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (int q = 1; q <= n; ++q) {
    int ra = find(q), rb = find(d.step(q, x));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  for (int q = 1; q <= n; ++q) ws.cluster_rep[q] = find(q);
  for (int q = 1; q <= n; ++q) {
    if (!on_cycle[q]) continue;
    int rep = ws.cluster_rep[q];
    if (!ws.cycle_len_by_rep.count(rep)) {
      int len = 0, c = q;
      do {
        ++len;
        c = d.step(c, x);
      } while (c != q);
      ws.cycle_len_by_rep[rep] = len;
    }
  }
  return ws;
}

// Exhaustive check of the per-cluster shift system: try all d^m assignments.
inline bool divisibility_consistent_bruteforce(const synchro::ClusterStructure& cs,
                                               const synchro::StablePairSet& s,
                                               int d) {
  std::vector<int> cids;
  for (auto [p, q] : s.pairs) {
    cids.push_back(cs.cluster_of[p]);
    cids.push_back(cs.cluster_of[q]);
  }
  std::sort(cids.begin(), cids.end());
  cids.erase(std::unique(cids.begin(), cids.end()), cids.end());
  const int m = static_cast<int>(cids.size());
  std::vector<int> assign(m, 0);
  auto idx_of = [&](int cid) {
    return static_cast<int>(std::lower_bound(cids.begin(), cids.end(), cid) -
                            cids.begin());
  };
  std::uint64_t combos = 1;
  for (int i = 0; i < m; ++i) {
    combos *= static_cast<std::uint64_t>(d);
    if (combos > (1u << 22)) throw std::runtime_error("oracle blowup");
  }
  for (std::uint64_t c = 0; c < combos; ++c) {
    std::uint64_t rest = c;
    for (int i = 0; i < m; ++i) {
      assign[i] = static_cast<int>(rest % d);
      rest /= d;
    }
    bool ok = true;
    for (auto [p, q] : s.pairs) {
      int lhs = (cs.level_of[p] - cs.level_of[q]) -
                (assign[idx_of(cs.cluster_of[p])] - assign[idx_of(cs.cluster_of[q])]);
      if (((lhs % d) + d) % d != 0) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Unbudgeted direct evaluation of the final complement-cluster condition,
// enumerating ordered cluster pairs and all shifts.
inline bool final_check_bruteforce(const Dfa& dfa,
                                   const synchro::ClusterStructure& cs_a,
                                   const synchro::ClusterStructure& cs_b,
                                   const synchro::StateSet& t_a,
                                   const synchro::StateSet& t_b, int d) {
  const int b = cs_b.letter;
  std::map<int, std::vector<int>> clusters;
  t_a.for_each([&](int q) { clusters[cs_a.cluster_of[q]].push_back(q); });
  auto blocked = [&](int p1, int p2) {
    if (t_b.contains(p1) || t_b.contains(p2)) return true;
    int b1 = dfa.step(p1, b), b2 = dfa.step(p2, b);
    if (t_a.contains(b1) || t_a.contains(b2)) return true;
    return t_a.contains(dfa.step(b1, b)) || t_a.contains(dfa.step(b2, b));
  };
  for (auto& [ci, mi] : clusters)
    for (auto& [cj, mj] : clusters)
      for (int x = 0; x < d; ++x) {
        bool any = false, all = true;
        for (int p1 : mi)
          for (int p2 : mj) {
            if (((cs_a.level_of[p1] - cs_a.level_of[p2] + x) % d + d) % d != 0)
              continue;
            any = true;
            if (!blocked(p1, p2)) all = false;
          }
        if (any && all) return true;
      }
  return false;
}

}  // namespace oracles
