#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "synchro/fast_check.hpp"
#include "synchro/random_gen.hpp"

namespace synchro {

struct BenchRecord {
  int n = 0;
  int k = 0;
  int trials = 0;
  std::string algorithm;  // "fast" or "quadratic"
  std::int64_t mean_ns = 0;
  std::int64_t median_ns = 0;
  std::int64_t p95_ns = 0;
  int nonsync_count = 0;
  int fallback_count = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::int64_t percentile(std::vector<std::int64_t> v, double p) {
  std::sort(v.begin(), v.end());
  std::size_t idx = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(v.size())));
  if (idx > 0) --idx;
  return v[idx];
}

}  // namespace detail

/// Times both checkers on the same seeded instances (trial i uses seed + i),
/// after 3 untimed warmup runs per algorithm. The median is the headline
/// number; timing runs are sequential per algorithm.
inline std::vector<BenchRecord> bench_checkers(const std::vector<int>& sizes, int k,
                                               int trials, std::uint64_t seed,
                                               const FastCheckConfig& cfg = {}) {
  if (sizes.empty()) throw ValidationError("bench needs at least one size");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  using clock = std::chrono::steady_clock;
  std::vector<BenchRecord> records;

  for (int n : sizes) {
    BenchRecord fast{n, k, trials, "fast", 0, 0, 0, 0, 0, seed};
    BenchRecord quad{n, k, trials, "quadratic", 0, 0, 0, 0, 0, seed};
    std::vector<std::int64_t> fast_ns, quad_ns;
    fast_ns.reserve(trials);
    quad_ns.reserve(trials);

    {
      Dfa warm = sample_dfa(n, k, seed);
      for (int w = 0; w < 3; ++w) (void)is_synchronizing_fast(warm, cfg);
    }
    for (int i = 0; i < trials; ++i) {
      Dfa d = sample_dfa(n, k, seed + static_cast<std::uint64_t>(i));
      auto t0 = clock::now();
      FastCheckOutcome out = is_synchronizing_fast(d, cfg);
      auto t1 = clock::now();
      fast_ns.push_back(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
      if (!out.answer) ++fast.nonsync_count;
      if (out.path == CheckPath::Fallback) ++fast.fallback_count;
    }

    {
      Dfa warm = sample_dfa(n, k, seed);
      for (int w = 0; w < 3; ++w) (void)is_synchronizing_quadratic(warm);
    }
    for (int i = 0; i < trials; ++i) {
      Dfa d = sample_dfa(n, k, seed + static_cast<std::uint64_t>(i));
      auto t0 = clock::now();
      bool yes = is_synchronizing_quadratic(d);
      auto t1 = clock::now();
      quad_ns.push_back(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
      if (!yes) ++quad.nonsync_count;
    }

    auto fill = [](BenchRecord& r, const std::vector<std::int64_t>& ns) {
      r.mean_ns = std::accumulate(ns.begin(), ns.end(), std::int64_t{0}) /
                  static_cast<std::int64_t>(ns.size());
      r.median_ns = detail::percentile(ns, 0.5);
      r.p95_ns = detail::percentile(ns, 0.95);
    };
    fill(fast, fast_ns);
    fill(quad, quad_ns);
    records.push_back(std::move(fast));
    records.push_back(std::move(quad));
  }
  return records;
}

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "n,k,trials,algorithm,mean_ns,median_ns,p95_ns,nonsync_count,fallback_count,seed\n";
  for (const auto& r : records)
    out << r.n << ',' << r.k << ',' << r.trials << ',' << r.algorithm << ','
        << r.mean_ns << ',' << r.median_ns << ',' << r.p95_ns << ','
        << r.nonsync_count << ',' << r.fallback_count << ',' << r.seed << '\n';
  return out.str();
}

}  // namespace synchro
