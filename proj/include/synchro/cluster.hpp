#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "synchro/dfa.hpp"

namespace synchro {

/// Decomposition of one letter's functional graph into clusters.
///
/// A cluster is a connected component of the graph q -> q.x: a single cycle
/// with trees hanging off it. Cluster ids are state ids — the smallest state
/// in the cluster, which is where the discovery walk first entered it. Tree
/// ids are the cycle state rooting the tree; cycle states root themselves.
struct ClusterStructure {
  int letter = 0;
  int n = 0;
  int num_clusters = 0;
  std::vector<std::int32_t> cluster_of;  // 1-based state -> cluster id
  std::vector<std::int32_t> tree_of;     // 1-based state -> tree root state
  std::vector<std::int32_t> level_of;    // 1-based state -> distance to cycle
  std::vector<std::int32_t> cluster_size_by_id;  // indexed by cluster id
  std::vector<std::int32_t> cycle_len_by_id;     // indexed by cluster id
  std::vector<std::int32_t> tree_height_by_root; // indexed by tree root state
  std::vector<int> cluster_ids;          // ascending
  std::vector<int> cycle_states;         // all level-0 states, ascending
  std::int64_t visits = 0;               // instrumentation: state visits, <= 2n

  int cluster(int q) const { return cluster_of[q]; }
  int tree(int q) const { return tree_of[q]; }
  int level(int q) const { return level_of[q]; }
  int cluster_size(int id) const { return cluster_size_by_id[id]; }
  int cycle_len(int id) const { return cycle_len_by_id[id]; }
  int tree_height(int root) const { return tree_height_by_root[root]; }
};

/// Computes the full cluster structure of letter x in O(n): one forward walk
/// per undiscovered cluster to locate its cycle, then a reverse BFS from the
/// cycle assigning levels and trees. Each state is visited at most twice.
inline ClusterStructure cluster_structure(const Dfa& d, int x) {
  d.check_letter(x);
  const int n = d.n();
  ClusterStructure cs;
  cs.letter = x;
  cs.n = n;
  cs.cluster_of.assign(n + 1, 0);
  cs.tree_of.assign(n + 1, 0);
  cs.level_of.assign(n + 1, -1);
  cs.cluster_size_by_id.assign(n + 1, 0);
  cs.cycle_len_by_id.assign(n + 1, 0);
  cs.tree_height_by_root.assign(n + 1, 0);

  // Inverse adjacency of the single letter, CSR.
  std::vector<std::int32_t> off(n + 2, 0);
  std::vector<std::int32_t> dat(n);
  for (int q = 1; q <= n; ++q) ++off[d.step(q, x) + 1];
  for (int i = 1; i <= n + 1; ++i) off[i] += off[i - 1];
  {
    std::vector<std::int32_t> cur(off.begin(), off.end() - 1);
    for (int q = 1; q <= n; ++q) dat[cur[d.step(q, x)]++] = q;
  }

  // 0 = unseen, 1 = on the current walk path, 2 = assigned.
  std::vector<std::uint8_t> status(n + 1, 0);
  std::vector<std::int32_t> pos(n + 1, 0);
  std::vector<std::int32_t> path;
  std::vector<std::int32_t> bfs;
  path.reserve(64);
  bfs.reserve(64);

  for (int p = 1; p <= n; ++p) {
    if (status[p] != 0) continue;
    path.clear();
    int cur = p;
    while (status[cur] == 0) {
      status[cur] = 1;
      pos[cur] = static_cast<std::int32_t>(path.size());
      path.push_back(cur);
      ++cs.visits;
      cur = d.step(cur, x);
    }
    // A walk from a fresh state stays inside its own fresh cluster, so the
    // repeat must be on the current path.
    assert(status[cur] == 1);
    const int cid = p;
    cs.cluster_ids.push_back(cid);
    ++cs.num_clusters;
    const int cycle_start = pos[cur];
    const int cycle_len = static_cast<int>(path.size()) - cycle_start;
    cs.cycle_len_by_id[cid] = cycle_len;

    bfs.clear();
    for (int i = cycle_start; i < static_cast<int>(path.size()); ++i) {
      int s = path[i];
      cs.level_of[s] = 0;
      cs.tree_of[s] = s;
      cs.cluster_of[s] = cid;
      status[s] = 2;
      bfs.push_back(s);
    }

    // Reverse BFS over tree arcs; the cycle predecessor of each cycle state is
    // already assigned and skipped.
    std::size_t head = 0;
    while (head < bfs.size()) {
      int s = bfs[head++];
      ++cs.visits;
      int root = cs.tree_of[s];
      for (std::int32_t i = off[s]; i < off[s + 1]; ++i) {
        int t = dat[i];
        if (status[t] == 2) continue;
        status[t] = 2;
        cs.level_of[t] = cs.level_of[s] + 1;
        cs.tree_of[t] = root;
        cs.cluster_of[t] = cid;
        if (cs.level_of[t] > cs.tree_height_by_root[root])
          cs.tree_height_by_root[root] = cs.level_of[t];
        bfs.push_back(t);
      }
    }
    cs.cluster_size_by_id[cid] = static_cast<std::int32_t>(bfs.size());
  }

  cs.cycle_states.reserve(n);
  for (int q = 1; q <= n; ++q)
    if (cs.level_of[q] == 0) cs.cycle_states.push_back(q);
  return cs;
}

/// The unique highest tree of the letter's graph, when it exists.
///
/// height is the maximum level inside the winning tree; second_height is the
/// maximum level of every other tree, or -1 when no other tree exists. The top
/// set holds the vertices of the winning tree with level > second_height;
/// tree_size counts all of its vertices including the root.
struct HighestTreeInfo {
  int letter = 0;
  int tree_root = 0;
  int height = 0;
  int second_height = -1;
  std::int64_t tree_size = 0;
  std::int64_t top_set_size = 0;
  std::vector<int> top_vertices;  // vertices of the tree at level == height
};

inline std::optional<HighestTreeInfo> highest_tree_info(const ClusterStructure& cs) {
  int best_root = 0, best_h = -1, second_h = -1;
  bool tie = false;
  for (int r : cs.cycle_states) {
    int h = cs.tree_height_by_root[r];
    if (h > best_h) {
      second_h = best_h;
      best_h = h;
      best_root = r;
      tie = false;
    } else if (h == best_h) {
      tie = true;
      second_h = best_h;
    } else if (h > second_h) {
      second_h = h;
    }
  }
  if (tie || best_root == 0) return std::nullopt;

  HighestTreeInfo info;
  info.letter = cs.letter;
  info.tree_root = best_root;
  info.height = best_h;
  info.second_height = second_h;
  for (int q = 1; q <= cs.n; ++q) {
    if (cs.tree_of[q] != best_root) continue;
    ++info.tree_size;
    if (cs.level_of[q] > second_h) ++info.top_set_size;
    if (cs.level_of[q] == best_h) info.top_vertices.push_back(q);
  }
  return info;
}

}  // namespace synchro
