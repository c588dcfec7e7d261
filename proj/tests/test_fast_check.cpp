#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "synchro/fast_check.hpp"
#include "synchro/pair_table.hpp"
#include "synchro/random_gen.hpp"
#include "synchro/reset.hpp"
#include "synchro/scc.hpp"

using namespace synchro;

namespace {

std::vector<std::vector<int>> as_sorted_vectors(const std::vector<StateSet>& sets) {
  std::vector<std::vector<int>> out;
  for (const auto& s : sets) out.push_back(s.to_vector());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("sink components") {
  SECTION("full cycle: one component of all states") {
    Dfa d = Dfa::from_rows(4, 1, {{2, 3, 4, 1}});
    auto sinks = sink_components(d);
    REQUIRE(sinks.size() == 1);
    REQUIRE(sinks[0].size() == 4);
  }
  SECTION("identity2: two singleton components") {
    auto sinks = sink_components(fixtures::identity2());
    REQUIRE(as_sorted_vectors(sinks) ==
            std::vector<std::vector<int>>{{1}, {2}});
  }
  SECTION("C3 agrees with the brute-force condensation") {
    auto sinks = sink_components(fixtures::c3());
    REQUIRE(as_sorted_vectors(sinks) == oracles::sink_components_bruteforce(fixtures::c3()));
  }
  SECTION("random automata agree with the reachability oracle") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      int n = 2 + static_cast<int>(seed % 12);
      int k = 1 + static_cast<int>(seed % 3);
      Dfa d = sample_dfa(n, k, seed * 101 + 7);
      REQUIRE(as_sorted_vectors(sink_components(d)) ==
              oracles::sink_components_bruteforce(d));
    }
  }
  SECTION("two-sink construction always yields at least two") {
    for (std::uint64_t seed = 0; seed < 30; ++seed)
      REQUIRE(sink_components(fixtures::two_sink_dfa(10, 2, seed)).size() >= 2);
  }
}

TEST_CASE("find_initial_stable_pair") {
  SECTION("M5 embedding: p=4, q=3, both mapping to the root") {
    Dfa d = fixtures::m5_embedded();
    ClusterStructure cs = cluster_structure(d, 1);
    auto ht = highest_tree_info(cs);
    REQUIRE(ht.has_value());
    auto [p, q] = find_initial_stable_pair(d, *ht, cs);
    REQUIRE(p == 4);
    REQUIRE(q == 3);
    REQUIRE(d.step(p, 1) == d.step(q, 1));
  }
  SECTION("path tree: p is the unique level-1 state") {
    // letter 2: 5 -> 4 -> 1 with 1 a loop, 2 and 3 loops of their own.
    Dfa d = Dfa::from_rows(5, 2, {{2, 3, 1, 1, 4}, {1, 2, 3, 1, 4}});
    ClusterStructure cs = cluster_structure(d, 2);
    auto ht = highest_tree_info(cs);
    REQUIRE(ht.has_value());
    REQUIRE(ht->height == 2);
    auto [p, q] = find_initial_stable_pair(d, *ht, cs);
    REQUIRE(p == 4);
    REQUIRE(q == 1);  // a loop is its own cycle predecessor
  }
  SECTION("min-index rule among several top ancestors") {
    // Star into the loop 1, with branches 8 -> 7 -> 1 and 10 -> 9 -> 1: top
    // vertices 8 and 10 have level-1 ancestors 7 and 9, the smaller wins.
    Dfa d = Dfa::from_rows(10, 2,
                           {{1, 1, 1, 1, 1, 1, 1, 7, 1, 9},
                            {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}});
    ClusterStructure cs = cluster_structure(d, 1);
    auto ht = highest_tree_info(cs);
    REQUIRE(ht.has_value());
    REQUIRE(ht->height == 2);
    auto [p, q] = find_initial_stable_pair(d, *ht, cs);
    REQUIRE(p == 7);
    REQUIRE(q == 1);
  }
}

TEST_CASE("extend_stable_pairs") {
  SECTION("a seed that merges after one step is rejected for target >= 2") {
    Dfa d = Dfa::from_rows(3, 1, {{3, 3, 3}});
    REQUIRE_FALSE(extend_stable_pairs(d, {1, 2}, 1, 2, 100).has_value());
  }
  SECTION("orbit of a long pair cycle yields exactly target distinct pairs") {
    Dfa d = Dfa::from_rows(8, 1, {{2, 3, 4, 5, 6, 7, 8, 1}});
    auto s = extend_stable_pairs(d, {1, 4}, 1, 6, 100);
    REQUIRE(s.has_value());
    REQUIRE(s->pairs.size() == 6);
    std::set<std::pair<int, int>> uniq(s->pairs.begin(), s->pairs.end());
    REQUIRE(uniq.size() == 6);
  }
  SECTION("orbit revisit before target is rejected") {
    Dfa d = Dfa::from_rows(8, 1, {{2, 3, 4, 5, 6, 7, 8, 1}});
    // the pair orbit has period 8, so 9 distinct pairs do not exist
    REQUIRE_FALSE(extend_stable_pairs(d, {1, 4}, 1, 9, 1000).has_value());
  }
  SECTION("budget exhaustion is rejected") {
    Dfa d = Dfa::from_rows(8, 1, {{2, 3, 4, 5, 6, 7, 8, 1}});
    REQUIRE_FALSE(extend_stable_pairs(d, {1, 4}, 1, 6, 3).has_value());
  }
  SECTION("matches a step-by-step reimplementation on a random automaton") {
    Dfa d = sample_dfa(10000, 2, 20240601);
    auto s = extend_stable_pairs(d, {17, 4242}, 2, 40, 160);
    std::vector<std::pair<int, int>> walked;
    int u = 17, v = 4242;
    walked.emplace_back(std::min(u, v), std::max(u, v));
    bool failed = false;
    while (static_cast<int>(walked.size()) < 40) {
      u = d.step(u, 2);
      v = d.step(v, 2);
      if (u == v) {
        failed = true;
        break;
      }
      auto pr = std::make_pair(std::min(u, v), std::max(u, v));
      if (std::find(walked.begin(), walked.end(), pr) != walked.end()) {
        failed = true;
        break;
      }
      walked.push_back(pr);
    }
    REQUIRE(s.has_value() == !failed);
    if (s) REQUIRE(s->pairs == walked);
  }
}

TEST_CASE("divisibility_consistent") {
  SECTION("empty pair set is vacuously consistent") {
    ClusterStructure cs = cluster_structure(fixtures::m5(), 1);
    StablePairSet s{1, {}};
    REQUIRE(divisibility_consistent(cs, s, 3));
  }
  SECTION("a single pair spanning two fresh clusters is always consistent") {
    ClusterStructure cs = cluster_structure(fixtures::m5_twice(), 1);
    REQUIRE(cs.cluster_of[5] != cs.cluster_of[9]);
    StablePairSet s{1, {{5, 9}}};
    for (int dd = 2; dd <= 5; ++dd) REQUIRE(divisibility_consistent(cs, s, dd));
  }
  SECTION("a single in-cluster pair with a misaligned level gap is not") {
    ClusterStructure cs = cluster_structure(fixtures::m5(), 1);
    StablePairSet s{1, {{4, 5}}};  // levels 1 and 2 in one cluster
    REQUIRE_FALSE(divisibility_consistent(cs, s, 2));
    REQUIRE_FALSE(oracles::divisibility_consistent_bruteforce(cs, s, 2));
  }
  SECTION("agrees with assignment enumeration on random level patterns") {
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      SplitMix64 rng(seed * 13 + 1);
      ClusterStructure fake;
      fake.n = 12;
      fake.letter = 1;
      fake.cluster_of.assign(13, 0);
      fake.level_of.assign(13, 0);
      int nclusters = 2 + static_cast<int>(rng.below(3));
      for (int q = 1; q <= 12; ++q) {
        fake.cluster_of[q] = 1 + static_cast<int>(rng.below(nclusters));
        fake.level_of[q] = static_cast<int>(rng.below(6));
      }
      StablePairSet s{1, {}};
      int npairs = 1 + static_cast<int>(rng.below(6));
      for (int i = 0; i < npairs; ++i) {
        int p = 1 + static_cast<int>(rng.below(12));
        int q = 1 + static_cast<int>(rng.below(12));
        if (p == q) continue;
        s.pairs.emplace_back(std::min(p, q), std::max(p, q));
      }
      int dd = 2 + static_cast<int>(rng.below(3));
      REQUIRE(divisibility_consistent(fake, s, dd) ==
              oracles::divisibility_consistent_bruteforce(fake, s, dd));
    }
  }
  SECTION("odd constraint cycle mod 2 is inconsistent") {
    ClusterStructure fake;
    fake.n = 6;
    fake.letter = 1;
    fake.cluster_of = {0, 1, 1, 2, 2, 3, 3};
    fake.level_of = {0, 0, 1, 0, 0, 0, 0};
    // x1-x2 = 0, x2-x3 = 0, x1-x3 = 1: the cycle sums to 1 mod 2.
    StablePairSet s{1, {{1, 3}, {3, 5}, {2, 5}}};
    REQUIRE_FALSE(divisibility_consistent(fake, s, 2));
    REQUIRE(oracles::divisibility_consistent_bruteforce(fake, s, 2) == false);
  }
}

TEST_CASE("final_small_cluster_check") {
  SECTION("no complement clusters: nothing to block") {
    Dfa d = fixtures::m5_embedded();
    ClusterStructure cs1 = cluster_structure(d, 1);
    ClusterStructure cs2 = cluster_structure(d, 2);
    StateSet empty_a(d.n()), empty_b(d.n());
    REQUIRE_FALSE(final_small_cluster_check(d, cs1, cs2, empty_a, empty_b, 1, 1000));
  }
  SECTION("a lone complement state inside T_b blocks itself") {
    Dfa d = fixtures::m5_embedded();
    ClusterStructure cs1 = cluster_structure(d, 1);
    ClusterStructure cs2 = cluster_structure(d, 2);
    StateSet t_a(d.n()), t_b(d.n());
    t_a.insert(5);
    t_b.insert(5);
    REQUIRE(final_small_cluster_check(d, cs1, cs2, t_a, t_b, 1, 1000));
  }
  SECTION("budget exhaustion reports a bad configuration") {
    Dfa d = fixtures::m5_embedded();
    ClusterStructure cs1 = cluster_structure(d, 1);
    ClusterStructure cs2 = cluster_structure(d, 2);
    StateSet t_a(d.n()), t_b(d.n());
    t_a.insert(4);
    t_a.insert(5);
    REQUIRE(final_small_cluster_check(d, cs1, cs2, t_a, t_b, 1, 0));
  }
  SECTION("agrees with the unbudgeted brute force on random instances") {
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      Dfa d = sample_dfa(40, 2, seed * 977 + 10);
      ClusterStructure cs_a = cluster_structure(d, 1);
      ClusterStructure cs_b = cluster_structure(d, 2);
      StateSet t_a(d.n()), t_b(d.n());
      for (int q = 1; q <= d.n(); ++q) {
        if (cs_a.cluster_size_by_id[cs_a.cluster_of[q]] <= 6) t_a.insert(q);
        if (cs_b.cluster_size_by_id[cs_b.cluster_of[q]] <= 6) t_b.insert(q);
      }
      for (int dd : {1, 2, 3}) {
        bool got = final_small_cluster_check(d, cs_a, cs_b, t_a, t_b, dd,
                                             1'000'000);
        bool want = oracles::final_check_bruteforce(d, cs_a, cs_b, t_a, t_b, dd);
        REQUIRE(got == want);
      }
    }
  }
}

TEST_CASE("fast checker outcomes") {
  SECTION("identity2 below the small-n gate falls back") {
    FastCheckOutcome r = is_synchronizing_fast(fixtures::identity2());
    REQUIRE_FALSE(r.answer);
    REQUIRE(r.path == CheckPath::Fallback);
    REQUIRE(r.stage_reached == Stage::S0);
  }
  SECTION("identity2 with the gate disabled is a certified no at S1") {
    FastCheckConfig cfg;
    cfg.small_n_gate = false;
    FastCheckOutcome r = is_synchronizing_fast(fixtures::identity2(), cfg);
    REQUIRE_FALSE(r.answer);
    REQUIRE(r.path == CheckPath::FastNo);
    REQUIRE(r.stage_reached == Stage::S1);
    REQUIRE(r.witness.has_value());
    REQUIRE_FALSE(merge_word(fixtures::identity2(), r.witness->first,
                             r.witness->second)
                      .has_value());
  }
  SECTION("C3 falls back at the small-n gate and is answered correctly") {
    FastCheckOutcome r = is_synchronizing_fast(fixtures::c3());
    REQUIRE(r.answer);
    REQUIRE(r.path == CheckPath::Fallback);
    REQUIRE(r.fallback_reason == Stage::S0);
  }
  SECTION("single-letter criterion") {
    REQUIRE(is_synchronizing_fast(Dfa::from_rows(3, 1, {{1, 1, 2}})).answer);
    FastCheckOutcome no = is_synchronizing_fast(Dfa::from_rows(3, 1, {{2, 1, 3}}));
    REQUIRE_FALSE(no.answer);
    REQUIRE(no.path == CheckPath::FastNo);
    REQUIRE(no.witness.has_value());
  }
  SECTION("answers match the quadratic oracle on random instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      Dfa d = sample_dfa(300, 2, seed * 33 + 2);
      FastCheckOutcome r = is_synchronizing_fast(d);
      REQUIRE(r.answer == is_synchronizing_quadratic(d));
    }
  }
  SECTION("k > 2 runs the two-letter pipeline and stays correct") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Dfa d = sample_dfa(150, 3, seed * 91 + 4);
      FastCheckOutcome r = is_synchronizing_fast(d);
      REQUIRE(r.answer == is_synchronizing_quadratic(d));
    }
    // Letters 1,2 alone are non-synchronizing but letter 3 merges everything.
    Dfa d = Dfa::from_rows(4, 3, {{2, 3, 4, 1}, {1, 2, 3, 4}, {1, 1, 1, 1}});
    FastCheckConfig cfg;
    cfg.small_n_gate = false;
    FastCheckOutcome r = is_synchronizing_fast(d, cfg);
    REQUIRE(r.answer);
    REQUIRE(r.path == CheckPath::Fallback);
  }
  SECTION("two-sink instances are certified no beyond the gate") {
    FastCheckConfig cfg;
    cfg.small_n_gate = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Dfa d = fixtures::two_sink_dfa(200, 2, seed);
      FastCheckOutcome r = is_synchronizing_fast(d, cfg);
      REQUIRE_FALSE(r.answer);
      REQUIRE(r.path == CheckPath::FastNo);
      REQUIRE(r.witness.has_value());
      REQUIRE_FALSE(
          merge_word(d, r.witness->first, r.witness->second).has_value());
    }
  }
  SECTION("permutation automata fall back and answer no") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Dfa d = fixtures::permutation_dfa(128, 2, seed);
      FastCheckOutcome r = is_synchronizing_fast(d);
      REQUIRE_FALSE(r.answer);
    }
  }
  SECTION("paranoid mode flags nothing on clean runs") {
    FastCheckConfig cfg;
    cfg.paranoid = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Dfa d = sample_dfa(400, 2, seed + 5000);
      FastCheckOutcome r = is_synchronizing_fast(d, cfg);
      REQUIRE_FALSE(r.paranoid_mismatch);
    }
  }
  SECTION("work stays linear outside the fallback branch") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      int n = 256 << (seed % 3);
      Dfa d = sample_dfa(n, 2, seed * 7 + 1);
      FastCheckOutcome r = is_synchronizing_fast(d);
      REQUIRE(r.work_units <= 50 * static_cast<std::int64_t>(n));
    }
  }
}

TEST_CASE("make_cluster_graph respects the size floor") {
  Dfa d = sample_dfa(60, 2, 9);
  ClusterStructure cs = cluster_structure(d, 1);
  StablePairSet s{1, {}};
  SplitMix64 rng(4);
  for (int i = 0; i < 12; ++i) {
    int p = 1 + static_cast<int>(rng.below(60));
    int q = 1 + static_cast<int>(rng.below(60));
    if (p != q) s.pairs.emplace_back(std::min(p, q), std::max(p, q));
  }
  ClusterGraph g = make_cluster_graph(cs, s, 4.0);
  for (int v : g.vertices) REQUIRE(cs.cluster_size_by_id[v] >= 4);
  std::set<int> vset(g.vertices.begin(), g.vertices.end());
  for (auto [a, b] : g.edges) {
    REQUIRE(vset.count(a));
    REQUIRE(vset.count(b));
    REQUIRE(a < b);
  }
}
