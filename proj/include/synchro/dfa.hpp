#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace synchro {

// Error categories; the CLI maps them onto distinct exit codes.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A word over the input alphabet. Letters are 1-based; the empty word is valid.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  bool operator==(const Word&) const = default;
};

/// Complete deterministic finite automaton.
///
/// States are 1..n and letters 1..k everywhere (input files, CLI output,
/// and this API). The transition table is stored letter-major.
class Dfa {
 public:
  Dfa(int n, int k) : n_(n), k_(k), delta_(static_cast<std::size_t>(n) * k, 1) {
    if (n < 1) throw ValidationError("state count must be >= 1");
    if (k < 1) throw ValidationError("alphabet size must be >= 1");
  }

  /// Builds from letter-major rows: rows[x-1][q-1] = image of q under x.
  static Dfa from_rows(int n, int k, const std::vector<std::vector<int>>& rows) {
    Dfa d(n, k);
    if (static_cast<int>(rows.size()) != k)
      throw ValidationError("expected one transition row per letter");
    for (int x = 1; x <= k; ++x) {
      if (static_cast<int>(rows[x - 1].size()) != n)
        throw ValidationError("transition row has wrong length");
      for (int q = 1; q <= n; ++q) d.set(q, x, rows[x - 1][q - 1]);
    }
    return d;
  }

  int n() const { return n_; }
  int k() const { return k_; }

  /// Unchecked transition, hot path. Caller guarantees 1 <= q <= n, 1 <= x <= k.
  int step(int q, int x) const {
    assert(q >= 1 && q <= n_ && x >= 1 && x <= k_);
    return delta_[static_cast<std::size_t>(x - 1) * n_ + (q - 1)];
  }

  void set(int q, int x, int target) {
    check_state(q);
    check_letter(x);
    if (target < 1 || target > n_)
      throw ValidationError("transition target out of range");
    delta_[static_cast<std::size_t>(x - 1) * n_ + (q - 1)] = target;
  }

  void check_state(int q) const {
    if (q < 1 || q > n_) throw ValidationError("state out of range");
  }
  void check_letter(int x) const {
    if (x < 1 || x > k_) throw ValidationError("letter out of range");
  }
  void check_word(const Word& w) const {
    for (int x : w.letters) check_letter(x);
  }

  bool operator==(const Dfa&) const = default;

 private:
  int n_;
  int k_;
  std::vector<int> delta_;
};

/// Subset of the state range 1..n, stored as a bitmask. Word-dense for small n,
/// still linear-compact for large n; the interface is purely set-semantic.
class StateSet {
 public:
  explicit StateSet(int n) : n_(n), bits_((n + 64) / 64, 0) {
    if (n < 1) throw ValidationError("universe must have >= 1 states");
  }

  static StateSet full(int n) {
    StateSet s(n);
    for (int q = 1; q <= n; ++q) s.insert(q);
    return s;
  }

  int universe() const { return n_; }

  void insert(int q) {
    check(q);
    bits_[(q - 1) >> 6] |= 1ULL << ((q - 1) & 63);
  }
  void erase(int q) {
    check(q);
    bits_[(q - 1) >> 6] &= ~(1ULL << ((q - 1) & 63));
  }
  bool contains(int q) const {
    if (q < 1 || q > n_) return false;
    return (bits_[(q - 1) >> 6] >> ((q - 1) & 63)) & 1ULL;
  }

  int size() const {
    int c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (std::uint64_t w : bits_)
      if (w) return false;
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      std::uint64_t w = bits_[i];
      while (w) {
        int b = std::countr_zero(w);
        f(static_cast<int>(i * 64 + b + 1));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> v;
    v.reserve(size());
    for_each([&](int q) { v.push_back(q); });
    return v;
  }

  bool operator==(const StateSet&) const = default;

 private:
  void check(int q) const {
    if (q < 1 || q > n_) throw ValidationError("state out of range");
  }

  int n_;
  std::vector<std::uint64_t> bits_;
};

/// State reached from q by reading w left to right.
inline int apply(const Dfa& d, int q, const Word& w) {
  d.check_state(q);
  d.check_word(w);
  for (int x : w.letters) q = d.step(q, x);
  return q;
}

/// Image of a state set under a word; |result| <= |S|.
inline StateSet apply_set(const Dfa& d, const StateSet& s, const Word& w) {
  if (s.universe() != d.n())
    throw ValidationError("state set universe does not match automaton");
  if (s.empty()) throw ValidationError("state set must be non-empty");
  d.check_word(w);
  StateSet cur = s;
  for (int x : w.letters) {
    StateSet next(d.n());
    cur.for_each([&](int q) { next.insert(d.step(q, x)); });
    cur = next;
  }
  return cur;
}

/// True iff w maps every state to one common state.
inline bool is_reset_word(const Dfa& d, const Word& w) {
  return apply_set(d, StateSet::full(d.n()), w).size() == 1;
}

}  // namespace synchro
