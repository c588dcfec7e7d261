#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "synchro/dfa.hpp"
#include "synchro/io.hpp"

namespace synchro {

/// Set-Cover instance: universe 1..universe_size plus a family of subsets.
/// Every subset is non-empty and the family covers the whole universe.
struct SetCoverInstance {
  int universe_size = 0;
  std::vector<std::vector<int>> subsets;  // each sorted ascending

  int m() const { return static_cast<int>(subsets.size()); }

  void validate() const {
    if (universe_size < 1) throw ValidationError("universe must be non-empty");
    if (subsets.empty()) throw ValidationError("subset family must be non-empty");
    std::vector<std::uint8_t> covered(universe_size + 1, 0);
    for (const auto& s : subsets) {
      if (s.empty()) throw ValidationError("empty subset not allowed");
      for (int e : s) {
        if (e < 1 || e > universe_size)
          throw ValidationError("subset element out of range");
        covered[e] = 1;
      }
    }
    for (int e = 1; e <= universe_size; ++e)
      if (!covered[e]) throw ValidationError("subsets do not cover the universe");
  }
};

/// Set-Cover v1 text format.
///
///   line 1:   SC <n> <m>
///   m lines:  <c> <e1> ... <ec>   elements of each subset, 1..n
inline SetCoverInstance parse_setcover(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw detail::parse_error(1, "empty input");
  auto head = detail::split_ws(line);
  if (head.size() != 3 || head[0] != "SC")
    throw detail::parse_error(1, "malformed header, expected 'SC <n> <m>'");
  int n = detail::parse_int(head[1], 1);
  int m = detail::parse_int(head[2], 1);
  if (n < 1) throw detail::parse_error(1, "universe size must be >= 1");
  if (m < 1) throw detail::parse_error(1, "subset count must be >= 1");

  SetCoverInstance inst;
  inst.universe_size = n;
  for (int j = 1; j <= m; ++j) {
    int lineno = j + 1;
    if (!std::getline(in, line)) throw detail::parse_error(lineno, "missing subset line");
    auto toks = detail::split_ws(line);
    if (toks.empty()) throw detail::parse_error(lineno, "missing subset size");
    int c = detail::parse_int(toks[0], lineno);
    if (c < 1) throw detail::parse_error(lineno, "empty subset not allowed");
    if (static_cast<int>(toks.size()) != c + 1)
      throw detail::parse_error(lineno, "subset has " + std::to_string(toks.size() - 1) +
                                            " elements, expected " + std::to_string(c));
    std::vector<int> s;
    s.reserve(c);
    for (int i = 1; i <= c; ++i) {
      int e = detail::parse_int(toks[i], lineno);
      if (e < 1 || e > n) throw detail::parse_error(lineno, "element out of range");
      s.push_back(e);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    inst.subsets.push_back(std::move(s));
  }
  try {
    inst.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return inst;
}

inline SetCoverInstance parse_setcover(const std::string& text) {
  std::istringstream in(text);
  return parse_setcover(in);
}

inline std::string serialize_setcover(const SetCoverInstance& inst) {
  std::ostringstream out;
  out << "SC " << inst.universe_size << ' ' << inst.m() << '\n';
  for (const auto& s : inst.subsets) {
    out << s.size();
    for (int e : s) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

/// Greedy cover: take the subset with the largest marginal coverage each
/// round, ties broken by lowest index. Returns 1-based subset indices.
inline std::vector<int> greedy_set_cover(const SetCoverInstance& inst) {
  inst.validate();
  std::vector<std::uint8_t> covered(inst.universe_size + 1, 0);
  int remaining = inst.universe_size;
  std::vector<int> picked;
  while (remaining > 0) {
    int best = -1, best_gain = 0;
    for (int j = 0; j < inst.m(); ++j) {
      int gain = 0;
      for (int e : inst.subsets[j])
        if (!covered[e]) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    for (int e : inst.subsets[best])
      if (!covered[e]) {
        covered[e] = 1;
        --remaining;
      }
    picked.push_back(best + 1);
  }
  return picked;
}

/// Minimum-cardinality cover by exhaustive search over subset combinations.
/// Capacity-limited to m <= 20 (2^m candidate families).
inline std::vector<int> exact_set_cover(const SetCoverInstance& inst) {
  inst.validate();
  if (inst.m() > 20)
    throw CapacityError("exact_set_cover supports m <= 20; use greedy_set_cover");
  const int m = inst.m();
  const int words = (inst.universe_size + 63) / 64;
  std::vector<std::uint64_t> elem_mask(static_cast<std::size_t>(m) * words, 0);
  for (int j = 0; j < m; ++j)
    for (int e : inst.subsets[j])
      elem_mask[static_cast<std::size_t>(j) * words + (e - 1) / 64] |=
          1ULL << ((e - 1) % 64);

  std::uint32_t best_mask = 0;
  int best_size = m + 1;
  std::vector<std::uint64_t> acc(words);
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    int size = std::popcount(mask);
    if (size >= best_size) continue;
    std::fill(acc.begin(), acc.end(), 0);
    for (std::uint32_t rest = mask; rest;) {
      int j = std::countr_zero(rest);
      rest &= rest - 1;
      for (int w = 0; w < words; ++w)
        acc[w] |= elem_mask[static_cast<std::size_t>(j) * words + w];
    }
    int covered = 0;
    for (int w = 0; w < words; ++w) covered += std::popcount(acc[w]);
    if (covered == inst.universe_size) {
      best_size = size;
      best_mask = mask;
    }
  }
  std::vector<int> picked;
  for (int j = 0; j < m; ++j)
    if (best_mask & (1u << j)) picked.push_back(j + 1);
  return picked;
}

/// Reduction from Set-Cover to synchronization: universe elements become
/// states 1..n, plus a sink state n+1; letter i sends the members of subset i
/// to the sink and fixes everything else. The reset threshold of the result
/// equals the optimal cover size.
inline Dfa reduce_to_automaton(const SetCoverInstance& inst) {
  inst.validate();
  const int n = inst.universe_size;
  const int sink = n + 1;
  Dfa d(n + 1, inst.m());
  for (int x = 1; x <= inst.m(); ++x) {
    for (int q = 1; q <= sink; ++q) d.set(q, x, q);
    for (int e : inst.subsets[x - 1]) d.set(e, x, sink);
    d.set(sink, x, sink);
  }
  return d;
}

/// The constructive direction of the reduction: a reset word of the reduction
/// automaton yields a cover (its distinct letters). Returns nullopt when w is
/// not a reset word.
inline std::optional<std::vector<int>> cover_from_word(const SetCoverInstance& inst,
                                                       const Word& w) {
  Dfa d = reduce_to_automaton(inst);
  if (!is_reset_word(d, w)) return std::nullopt;
  std::vector<int> picked(w.letters);
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  // Sanity: the picked subsets really cover the universe.
  std::vector<std::uint8_t> covered(inst.universe_size + 1, 0);
  for (int j : picked)
    for (int e : inst.subsets[j - 1]) covered[e] = 1;
  for (int e = 1; e <= inst.universe_size; ++e)
    if (!covered[e]) return std::nullopt;
  return picked;
}

}  // namespace synchro
