#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synchro/cluster.hpp"
#include "synchro/dfa.hpp"
#include "synchro/pair_table.hpp"
#include "synchro/scc.hpp"

namespace synchro {

enum class CheckPath { FastNo, FastYes, Fallback, Quadratic };

enum class Stage { S0, S1, S2, S3, S4, S5, S6, S7, S8, S9 };

inline const char* to_string(CheckPath p) {
  switch (p) {
    case CheckPath::FastNo: return "fast-no";
    case CheckPath::FastYes: return "fast-yes";
    case CheckPath::Fallback: return "fallback";
    case CheckPath::Quadratic: return "quadratic";
  }
  return "?";
}

inline const char* to_string(Stage s) {
  static const char* names[] = {"S0", "S1", "S2", "S3", "S4",
                                "S5", "S6", "S7", "S8", "S9"};
  return names[static_cast<int>(s)];
}

struct FastCheckConfig {
  bool small_n_gate = true;   // n < 64 goes straight to the quadratic checker
  double c_ext = 4.0;         // pair-extension step budget, c_ext * ceil(n^0.4)
  double c_fin = 8.0;         // final-check budget, c_fin * n pair evaluations
  bool paranoid = false;      // cross-check every non-fallback answer
};

struct FastCheckOutcome {
  bool answer = false;
  CheckPath path = CheckPath::Fallback;
  Stage stage_reached = Stage::S0;
  std::optional<Stage> fallback_reason;
  // fast-no certificate: two states that can never be merged.
  std::optional<std::pair<int, int>> witness;
  std::int64_t work_units = 0;  // pipeline visits, excludes fallback work
  bool paranoid_checked = false;
  bool paranoid_mismatch = false;
};

/// A batch of pairs expected to stay mergeable, all images of one seed pair.
/// provenance_letter is the letter whose cluster analysis consumes the set.
struct StablePairSet {
  int provenance_letter = 0;
  std::vector<std::pair<int, int>> pairs;  // canonical (min, max), distinct
};

/// Graph of large clusters induced by a stable-pair set: vertices are the
/// cluster ids with size >= min_size, and an edge joins two vertices whenever
/// some pair straddles them.
struct ClusterGraph {
  std::vector<int> vertices;
  std::vector<std::pair<int, int>> edges;
};

namespace detail {

inline std::uint64_t pack_pair(int p, int q) {
  if (p > q) std::swap(p, q);
  return (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint32_t>(q);
}

}  // namespace detail

/// Seed stable pair from the unique highest tree of letter a = cs.letter:
/// p is the smallest level-1 ancestor of the tree's deepest vertices, q is the
/// cycle predecessor of the tree root; both map to the root under a.
inline std::pair<int, int> find_initial_stable_pair(const Dfa& d,
                                                    const HighestTreeInfo& ht,
                                                    const ClusterStructure& cs) {
  if (ht.letter != cs.letter)
    throw ValidationError("tree info and cluster structure disagree on letter");
  if (ht.height < 1)
    throw ValidationError("seed pair needs a tree of height >= 1");
  const int a = cs.letter;
  const int root = ht.tree_root;
  const int n = d.n();

  // Single-letter inverse adjacency.
  std::vector<std::int32_t> off(n + 2, 0), dat(n);
  for (int q = 1; q <= n; ++q) ++off[d.step(q, a) + 1];
  for (int i = 1; i <= n + 1; ++i) off[i] += off[i - 1];
  {
    std::vector<std::int32_t> cur(off.begin(), off.end() - 1);
    for (int q = 1; q <= n; ++q) dat[cur[d.step(q, a)]++] = q;
  }

  // BFS down the tree from the root, tracking each vertex's level-1 ancestor.
  std::vector<std::int32_t> anc1(n + 1, 0);
  std::vector<std::int32_t> bfs;
  bfs.push_back(root);
  int best_p = 0;
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    int s = bfs[head];
    for (std::int32_t i = off[s]; i < off[s + 1]; ++i) {
      int t = dat[i];
      if (cs.level_of[t] != cs.level_of[s] + 1 || cs.tree_of[t] != root) continue;
      anc1[t] = cs.level_of[t] == 1 ? t : anc1[s];
      if (cs.level_of[t] == ht.height && (best_p == 0 || anc1[t] < best_p))
        best_p = anc1[t];
      bfs.push_back(t);
    }
  }
  assert(best_p != 0);

  // The unique cycle state mapping onto the root.
  int cycle_pred = 0;
  for (std::int32_t i = off[root]; i < off[root + 1]; ++i)
    if (cs.level_of[dat[i]] == 0) cycle_pred = dat[i];
  assert(cycle_pred != 0);
  assert(d.step(best_p, a) == root && d.step(cycle_pred, a) == root);
  return {best_p, cycle_pred};
}

/// Extends a seed pair along the orbit of one letter: the set of the first
/// `target` distinct pairs {seed.x^i}, i >= 0, skipping none. Returns nullopt
/// when the orbit collapses (endpoints merge), revisits a pair, or exceeds the
/// step budget before reaching the target.
inline std::optional<StablePairSet> extend_stable_pairs(const Dfa& d,
                                                        std::pair<int, int> seed,
                                                        int orbit_letter, int target,
                                                        std::int64_t budget) {
  d.check_state(seed.first);
  d.check_state(seed.second);
  d.check_letter(orbit_letter);
  if (target < 1) throw ValidationError("target must be >= 1");
  if (seed.first == seed.second) return std::nullopt;

  StablePairSet out;
  out.provenance_letter = orbit_letter;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(target * 2);
  int u = seed.first, v = seed.second;
  seen.insert(detail::pack_pair(u, v));
  out.pairs.emplace_back(std::min(u, v), std::max(u, v));
  for (std::int64_t step = 1; static_cast<int>(out.pairs.size()) < target; ++step) {
    if (step > budget) return std::nullopt;
    u = d.step(u, orbit_letter);
    v = d.step(v, orbit_letter);
    if (u == v) return std::nullopt;
    if (!seen.insert(detail::pack_pair(u, v)).second) return std::nullopt;
    out.pairs.emplace_back(std::min(u, v), std::max(u, v));
  }
  return out;
}

/// Spec'd big-cluster graph: vertices are clusters of size >= min_size, edges
/// come from pairs whose endpoints both lie in (distinct) big clusters.
inline ClusterGraph make_cluster_graph(const ClusterStructure& cs,
                                       const StablePairSet& s, double min_size) {
  ClusterGraph g;
  for (int id : cs.cluster_ids)
    if (static_cast<double>(cs.cluster_size_by_id[id]) >= min_size - 1e-9)
      g.vertices.push_back(id);
  std::unordered_set<int> vset(g.vertices.begin(), g.vertices.end());
  std::unordered_set<std::uint64_t> eseen;
  for (auto [p, q] : s.pairs) {
    int cp = cs.cluster_of[p], cq = cs.cluster_of[q];
    if (cp == cq || !vset.count(cp) || !vset.count(cq)) continue;
    if (eseen.insert(detail::pack_pair(cp, cq)).second)
      g.edges.emplace_back(std::min(cp, cq), std::max(cp, cq));
  }
  return g;
}

/// True iff per-cluster shifts x_i (mod d) exist making every pair {p,q} in S
/// satisfy d | (lvl(p) - lvl(q)) - (x_cluster(p) - x_cluster(q)). Union-find
/// with potentials; |S| find/union steps.
inline bool divisibility_consistent(const ClusterStructure& cs,
                                    const StablePairSet& s, int d) {
  if (d <= 1) return true;
  std::unordered_map<int, std::pair<int, int>> uf;  // cluster -> (parent, x - x_parent mod d)
  // find returns (root, x_c - x_root mod d) with path compression.
  auto find = [&](int c) {
    if (!uf.count(c)) uf[c] = {c, 0};
    int off = 0, cur = c;
    while (uf[cur].first != cur) {
      off = (off + uf[cur].second) % d;
      cur = uf[cur].first;
    }
    // compress
    int walk = c, acc = off;
    while (uf[walk].first != walk) {
      int next = uf[walk].first;
      int step = uf[walk].second;
      uf[walk] = {cur, acc};
      acc = (acc - step % d + d) % d;
      walk = next;
    }
    return std::make_pair(cur, off);
  };

  for (auto [p, q] : s.pairs) {
    int cp = cs.cluster_of[p], cq = cs.cluster_of[q];
    int need = ((cs.level_of[p] - cs.level_of[q]) % d + d) % d;  // x_cp - x_cq
    auto [rp, offp] = find(cp);
    auto [rq, offq] = find(cq);
    if (rp != rq) {
      // Attach rq under rp with x_rq - x_rp = offp - offq - need (mod d).
      uf[rq] = {rp, ((offp - offq - need) % d + 2 * d) % d};
    } else if (((offp - offq) % d + d) % d != need) {
      return false;
    }
  }
  return true;
}

/// Lemma-6-style final check over the complement clusters. Returns true when
/// a "bad configuration" exists: two a-clusters inside T_a and a shift x such
/// that every level-aligned pair between them has all three escape routes
/// blocked (the pair meets T_b, or its b-image or b^2-image meets T_a). True
/// also when the pair-evaluation budget is exhausted; true routes the caller
/// to the quadratic fallback.
inline bool final_small_cluster_check(const Dfa& dfa, const ClusterStructure& cs_a,
                                      const ClusterStructure& cs_b,
                                      const StateSet& t_a, const StateSet& t_b,
                                      int d, std::int64_t budget,
                                      std::int64_t* evals_out = nullptr) {
  if (d < 1) throw ValidationError("d must be >= 1");
  const int b = cs_b.letter;
  // Group T_a's states into their a-clusters.
  std::unordered_map<int, std::vector<int>> clusters;
  t_a.for_each([&](int q) { clusters[cs_a.cluster_of[q]].push_back(q); });
  if (clusters.empty()) return false;

  std::vector<const std::vector<int>*> cl;
  std::vector<int> ids;
  for (auto& [id, members] : clusters) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (int id : ids) cl.push_back(&clusters[id]);

  auto blocked = [&](int p1, int p2) {
    if (t_b.contains(p1) || t_b.contains(p2)) return true;
    int b1 = dfa.step(p1, b), b2 = dfa.step(p2, b);
    if (t_a.contains(b1) || t_a.contains(b2)) return true;
    if (t_a.contains(dfa.step(b1, b)) || t_a.contains(dfa.step(b2, b))) return true;
    return false;
  };

  // For each unordered cluster pair, bucket ordered member pairs by the shift
  // x that aligns them; a configuration is bad when some non-empty bucket is
  // entirely blocked. blocked() is symmetric, so a configuration with the
  // cluster roles swapped mirrors the one at the negated shift and needs no
  // separate pass.
  std::int64_t evals = 0;
  std::unordered_map<int, std::pair<std::int64_t, bool>> buckets;  // x -> (count, all_blocked)
  for (std::size_t i = 0; i < cl.size(); ++i) {
    for (std::size_t j = i; j < cl.size(); ++j) {
      buckets.clear();
      for (int p1 : *cl[i]) {
        for (int p2 : *cl[j]) {
          if (++evals > budget) {
            if (evals_out) *evals_out = evals;
            return true;  // out of budget: conservative
          }
          int x = ((cs_a.level_of[p2] - cs_a.level_of[p1]) % d + d) % d;
          auto& bk = buckets.try_emplace(x, 0, true).first->second;
          ++bk.first;
          if (!blocked(p1, p2)) bk.second = false;
        }
      }
      for (auto& [x, bk] : buckets)
        if (bk.first > 0 && bk.second) {
          if (evals_out) *evals_out = evals;
          return true;
        }
    }
  }
  if (evals_out) *evals_out = evals;
  return false;
}

namespace detail {

struct PipelineResult {
  CheckPath path = CheckPath::Fallback;  // FastYes / FastNo / Fallback request
  Stage stage = Stage::S0;
  std::optional<Stage> reason;
  std::optional<std::pair<int, int>> witness;
};

// One letter's class computation on the (restricted) automaton: connects
// clusters through the pair set, takes the heaviest connected family as the
// synchronizing class, and returns the complement states T plus the gcd of
// the class's cycle lengths. Fails (nullopt) when the complement outgrows the
// final-check budget sqrt(c_fin * n_orig).
struct LetterClass {
  StateSet complement;  // T: states outside the class
  int cycle_gcd = 1;
};

inline std::optional<LetterClass> build_letter_class(const Dfa& rd,
                                                     const ClusterStructure& cs,
                                                     const StablePairSet& s,
                                                     double max_complement,
                                                     std::int64_t& work) {
  // Union-find over cluster ids (dense on state range).
  std::vector<std::int32_t> parent(rd.n() + 1);
  for (int id : cs.cluster_ids) parent[id] = id;
  auto find = [&](int c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };
  for (auto [p, q] : s.pairs) {
    ++work;
    int rp = find(cs.cluster_of[p]), rq = find(cs.cluster_of[q]);
    if (rp != rq) parent[std::max(rp, rq)] = std::min(rp, rq);
  }
  std::unordered_map<int, std::int64_t> mass;
  for (int id : cs.cluster_ids) mass[find(id)] += cs.cluster_size_by_id[id];
  int best_root = 0;
  std::int64_t best_mass = -1;
  for (int id : cs.cluster_ids) {
    int r = find(id);
    if (mass[r] > best_mass || (mass[r] == best_mass && r < best_root)) {
      best_mass = mass[r];
      best_root = r;
    }
  }

  LetterClass out{StateSet(rd.n()), 1};
  std::int64_t complement_size = rd.n() - best_mass;
  if (static_cast<double>(complement_size) > max_complement) return std::nullopt;
  int g = 0;
  for (int id : cs.cluster_ids) {
    ++work;
    if (find(id) == best_root) g = std::gcd(g, cs.cycle_len_by_id[id]);
  }
  out.cycle_gcd = g == 0 ? 1 : g;
  for (int q = 1; q <= rd.n(); ++q) {
    ++work;
    if (find(cs.cluster_of[q]) != best_root) out.complement.insert(q);
  }
  return out;
}

inline PipelineResult run_pipeline_k2(const Dfa& d2, int n_orig,
                                      const FastCheckConfig& cfg,
                                      std::int64_t& work) {
  PipelineResult r;
  const double log_n = std::log(static_cast<double>(n_orig));

  // S0: below this size the probabilistic thresholds are vacuous.
  r.stage = Stage::S0;
  if (cfg.small_n_gate && n_orig < 64) {
    r.reason = Stage::S0;
    return r;
  }

  // S1: sink components; several sinks certify a 'no'.
  r.stage = Stage::S1;
  auto sinks = sink_components(d2);
  work += static_cast<std::int64_t>(d2.n()) * (d2.k() + 1);
  if (sinks.size() != 1) {
    r.path = CheckPath::FastNo;
    r.witness = {sinks[0].to_vector().front(), sinks[1].to_vector().front()};
    return r;
  }
  const double kSinkFloor = n_orig / (4.0 * M_E * M_E);
  if (sinks[0].size() < kSinkFloor) {
    r.reason = Stage::S1;
    return r;
  }

  // Restrict to the sink subautomaton; it is closed under both letters.
  std::optional<Dfa> restricted;
  if (sinks[0].size() != d2.n()) {
    std::vector<std::int32_t> new_id(d2.n() + 1, 0);
    int next = 0;
    sinks[0].for_each([&](int q) { new_id[q] = ++next; });
    Dfa sub(next, 2);
    sinks[0].for_each([&](int q) {
      sub.set(new_id[q], 1, new_id[d2.step(q, 1)]);
      sub.set(new_id[q], 2, new_id[d2.step(q, 2)]);
    });
    work += 2 * next;
    restricted.emplace(std::move(sub));
  }
  const Dfa& rd = restricted ? *restricted : d2;

  // S2: cluster structures for both letters; too many clusters is a rare case
  // the later stages are not sized for.
  r.stage = Stage::S2;
  ClusterStructure cs[2] = {cluster_structure(rd, 1), cluster_structure(rd, 2)};
  work += cs[0].visits + cs[1].visits;
  if (cs[0].num_clusters > 5.0 * log_n || cs[1].num_clusters > 5.0 * log_n) {
    r.reason = Stage::S2;
    return r;
  }

  // S3: a letter whose graph has a unique highest tree of size >= 32 ln n.
  // Gating on the tree size rather than the exclusive top set keeps the
  // fast path available at practical n; the top set is still computed and
  // carried for the seed construction.
  r.stage = Stage::S3;
  std::optional<HighestTreeInfo> ht[2] = {highest_tree_info(cs[0]),
                                          highest_tree_info(cs[1])};
  work += 2 * rd.n();
  int a = 0;
  for (int x = 1; x <= 2 && a == 0; ++x)
    if (ht[x - 1] && ht[x - 1]->height >= 1 &&
        static_cast<double>(ht[x - 1]->tree_size) >= 32.0 * log_n)
      a = x;
  if (a == 0) {
    r.reason = Stage::S3;
    return r;
  }
  const int b = 3 - a;

  // S4: seed pair from the highest tree.
  r.stage = Stage::S4;
  auto seed = find_initial_stable_pair(rd, *ht[a - 1], cs[a - 1]);
  work += rd.n();

  // S5: extend along the b-orbit (P_a), then shift the non-seed pairs by a
  // (P_b). The b-orbit spreads pair endpoints across a-clusters and the
  // a-shift across b-clusters; both sets inherit stability from the seed. The
  // seed itself is excluded from the shift: its endpoints share an a-image by
  // construction, so its a-shift always collapses.
  r.stage = Stage::S5;
  const int target = static_cast<int>(std::ceil(std::pow(n_orig, 0.4) - 1e-9));
  const std::int64_t ext_budget =
      static_cast<std::int64_t>(std::ceil(cfg.c_ext * (target + 1)));
  auto pa = extend_stable_pairs(rd, seed, b, target + 1, ext_budget);
  work += ext_budget;
  if (!pa) {
    r.reason = Stage::S5;
    return r;
  }
  pa->provenance_letter = a;
  std::optional<StablePairSet> pb;
  {
    StablePairSet shifted;
    shifted.provenance_letter = b;
    std::unordered_set<std::uint64_t> seen;
    bool ok = true;
    for (std::size_t i = 1; i < pa->pairs.size(); ++i) {
      ++work;
      auto [u, v] = pa->pairs[i];
      int su = rd.step(u, a), sv = rd.step(v, a);
      if (su == sv || !seen.insert(pack_pair(su, sv)).second) {
        ok = false;
        break;
      }
      shifted.pairs.emplace_back(std::min(su, sv), std::max(su, sv));
    }
    if (!ok) {
      r.reason = Stage::S5;
      return r;
    }
    pb.emplace(std::move(shifted));
  }

  // S6+S7 for letter a, then S8 repeats both for letter b.
  const double max_complement = std::sqrt(cfg.c_fin * n_orig);
  r.stage = Stage::S6;
  auto class_a = build_letter_class(rd, cs[a - 1], *pa, max_complement, work);
  if (!class_a) {
    r.reason = Stage::S6;
    return r;
  }
  r.stage = Stage::S7;
  if (class_a->cycle_gcd > 1 &&
      divisibility_consistent(cs[a - 1], *pa, class_a->cycle_gcd)) {
    r.reason = Stage::S7;
    return r;
  }
  work += static_cast<std::int64_t>(pa->pairs.size());

  r.stage = Stage::S8;
  auto class_b = build_letter_class(rd, cs[b - 1], *pb, max_complement, work);
  if (!class_b) {
    r.reason = Stage::S8;
    return r;
  }
  if (class_b->cycle_gcd > 1 &&
      divisibility_consistent(cs[b - 1], *pb, class_b->cycle_gcd)) {
    r.reason = Stage::S8;
    return r;
  }
  work += static_cast<std::int64_t>(pb->pairs.size());

  // S9: the final complement-cluster check, letter a's clusters and gcd.
  r.stage = Stage::S9;
  const std::int64_t fin_budget =
      static_cast<std::int64_t>(std::ceil(cfg.c_fin * n_orig));
  std::int64_t evals = 0;
  bool bad = final_small_cluster_check(rd, cs[a - 1], cs[b - 1],
                                       class_a->complement, class_b->complement,
                                       class_a->cycle_gcd, fin_budget, &evals);
  work += evals;
  if (bad) {
    r.reason = Stage::S9;
    return r;
  }
  r.path = CheckPath::FastYes;
  return r;
}

}  // namespace detail

/// Expected-linear synchronizability check. Certified 'no' answers come from
/// multiple sink components; 'yes' answers come from the staged structural
/// pipeline; any failed precondition routes to the always-correct quadratic
/// checker, so the returned answer is correct on every input.
inline FastCheckOutcome is_synchronizing_fast(const Dfa& d,
                                              const FastCheckConfig& cfg = {}) {
  FastCheckOutcome out;

  if (d.k() == 1) {
    // Single letter: synchronizing iff the graph is one cluster whose cycle is
    // a loop. Otherwise two distinct cycle states can never merge.
    ClusterStructure cs = cluster_structure(d, 1);
    out.work_units = cs.visits;
    out.stage_reached = Stage::S1;
    int cid = cs.cluster_ids.front();
    if (cs.num_clusters == 1 && cs.cycle_len_by_id[cid] == 1) {
      out.answer = true;
      out.path = CheckPath::FastYes;
    } else {
      out.answer = false;
      out.path = CheckPath::FastNo;
      out.witness = {cs.cycle_states[0], cs.cycle_states[1]};
    }
  } else {
    std::optional<Dfa> two_letter;
    if (d.k() > 2) {
      Dfa sub(d.n(), 2);
      for (int q = 1; q <= d.n(); ++q) {
        sub.set(q, 1, d.step(q, 1));
        sub.set(q, 2, d.step(q, 2));
      }
      two_letter.emplace(std::move(sub));
    }
    const Dfa& d2 = two_letter ? *two_letter : d;

    detail::PipelineResult r = detail::run_pipeline_k2(d2, d.n(), cfg, out.work_units);
    out.stage_reached = r.stage;
    if (r.path == CheckPath::FastYes) {
      // Synchronizability of the two-letter subautomaton lifts to the full
      // alphabet: extra letters only add merging options.
      out.answer = true;
      out.path = CheckPath::FastYes;
    } else if (r.path == CheckPath::FastNo && d.k() == 2) {
      out.answer = false;
      out.path = CheckPath::FastNo;
      out.witness = r.witness;
    } else {
      // Fallback, including two-letter 'no' under a wider alphabet.
      out.path = CheckPath::Fallback;
      out.fallback_reason = r.reason ? r.reason : std::optional<Stage>(r.stage);
      out.answer = is_synchronizing_quadratic(d);
    }
  }

  if (cfg.paranoid && out.path != CheckPath::Fallback) {
    out.paranoid_checked = true;
    bool truth = is_synchronizing_quadratic(d);
    if (truth != out.answer) {
      out.paranoid_mismatch = true;
      out.answer = truth;  // the quadratic checker is the ground truth
    }
  }
  return out;
}

}  // namespace synchro
