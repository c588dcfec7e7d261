#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "synchro/dfa.hpp"

namespace synchro {

namespace detail {

inline ParseError parse_error(int line, const std::string& what) {
  return ParseError("line " + std::to_string(line) + ": " + what);
}

// Strict integer token; rejects junk like "1x".
inline int parse_int(const std::string& tok, int line) {
  if (tok.empty()) throw parse_error(line, "expected integer");
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw parse_error(line, "bad integer '" + tok + "'");
  }
  if (pos != tok.size()) throw parse_error(line, "bad integer '" + tok + "'");
  if (v < -2147483647L || v > 2147483647L)
    throw parse_error(line, "integer out of range '" + tok + "'");
  return static_cast<int>(v);
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace detail

/// DFA v1 text format.
///
///   line 1:        DFA <n> <k>
///   lines 2..k+1:  n space-separated integers; line j+1 lists the images of
///                  states 1..n under letter j
///
/// Canonical output uses single ASCII spaces, no trailing spaces, and a
/// newline after every line.
inline Dfa parse_dfa(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw detail::parse_error(1, "empty input");
  auto head = detail::split_ws(line);
  if (head.size() != 3 || head[0] != "DFA")
    throw detail::parse_error(1, "malformed header, expected 'DFA <n> <k>'");
  int n = detail::parse_int(head[1], 1);
  int k = detail::parse_int(head[2], 1);
  if (n < 1) throw detail::parse_error(1, "state count must be >= 1");
  if (k < 1) throw detail::parse_error(1, "alphabet size must be >= 1");

  Dfa d(n, k);
  for (int x = 1; x <= k; ++x) {
    int lineno = x + 1;
    if (!std::getline(in, line))
      throw detail::parse_error(lineno, "missing transition row");
    auto toks = detail::split_ws(line);
    if (static_cast<int>(toks.size()) != n)
      throw detail::parse_error(lineno, "row has " + std::to_string(toks.size()) +
                                            " entries, expected " + std::to_string(n));
    for (int q = 1; q <= n; ++q) {
      int t = detail::parse_int(toks[q - 1], lineno);
      if (t < 1 || t > n) throw detail::parse_error(lineno, "entry out of range");
      d.set(q, x, t);
    }
  }
  return d;
}

inline Dfa parse_dfa(const std::string& text) {
  std::istringstream in(text);
  return parse_dfa(in);
}

inline std::string serialize_dfa(const Dfa& d) {
  std::ostringstream out;
  out << "DFA " << d.n() << ' ' << d.k() << '\n';
  for (int x = 1; x <= d.k(); ++x) {
    for (int q = 1; q <= d.n(); ++q) {
      if (q > 1) out << ' ';
      out << d.step(q, x);
    }
    out << '\n';
  }
  return out.str();
}

/// Word text form: space-separated 1-based letter indices on one line;
/// the empty word is an empty line.
inline Word parse_word(const std::string& line) {
  Word w;
  for (const auto& tok : detail::split_ws(line)) {
    int x = detail::parse_int(tok, 1);
    if (x < 1) throw detail::parse_error(1, "letter index must be >= 1");
    w.letters.push_back(x);
  }
  return w;
}

inline std::string serialize_word(const Word& w) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out << ' ';
    out << w.letters[i];
  }
  out << '\n';
  return out.str();
}

}  // namespace synchro
