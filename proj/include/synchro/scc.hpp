#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "synchro/dfa.hpp"

namespace synchro {

namespace detail {

// Iterative Tarjan over the transition digraph (arcs q -> q.x for every
// letter). Returns 0-based component ids per state, components numbered in
// order of completion.
inline int tarjan_components(const Dfa& d, std::vector<std::int32_t>& comp) {
  const int n = d.n();
  const int k = d.k();
  comp.assign(n + 1, -1);
  std::vector<std::int32_t> index(n + 1, 0), low(n + 1, 0);
  std::vector<std::uint8_t> on_stack(n + 1, 0);
  std::vector<std::int32_t> stack;
  stack.reserve(n);

  struct Frame {
    std::int32_t v;
    std::int32_t next_letter;  // 1..k, k+1 = done
  };
  std::vector<Frame> call;
  call.reserve(64);

  std::int32_t counter = 0;
  int ncomp = 0;

  for (int root = 1; root <= n; ++root) {
    if (index[root] != 0) continue;
    call.push_back({root, 1});
    index[root] = low[root] = ++counter;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_letter <= k) {
        int w = d.step(f.v, f.next_letter++);
        if (index[w] == 0) {
          index[w] = low[w] = ++counter;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 1});
        } else if (on_stack[w] && index[w] < low[f.v]) {
          low[f.v] = index[w];
        }
      } else {
        int v = f.v;
        if (low[v] == index[v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        call.pop_back();
        if (!call.empty() && low[v] < low[call.back().v])
          low[call.back().v] = low[v];
      }
    }
  }
  return ncomp;
}

}  // namespace detail

/// Strongly connected components with no outgoing arc in the condensation,
/// i.e. the minimal SCCs. Distinct sink components can never be merged, so a
/// synchronizing automaton has exactly one. Ordered by smallest member state.
inline std::vector<StateSet> sink_components(const Dfa& d) {
  std::vector<std::int32_t> comp;
  int ncomp = detail::tarjan_components(d, comp);
  std::vector<std::uint8_t> is_sink(ncomp, 1);
  for (int q = 1; q <= d.n(); ++q)
    for (int x = 1; x <= d.k(); ++x)
      if (comp[d.step(q, x)] != comp[q]) is_sink[comp[q]] = 0;

  std::vector<StateSet> sinks;
  std::vector<int> slot(ncomp, -1);
  for (int q = 1; q <= d.n(); ++q) {
    int c = comp[q];
    if (!is_sink[c]) continue;
    if (slot[c] < 0) {
      slot[c] = static_cast<int>(sinks.size());
      sinks.emplace_back(d.n());
    }
    sinks[slot[c]].insert(q);
  }
  return sinks;
}

}  // namespace synchro
