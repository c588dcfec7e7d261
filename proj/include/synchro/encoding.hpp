#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "synchro/dfa.hpp"
#include "synchro/io.hpp"
#include "synchro/reset.hpp"

namespace synchro {

/// Correspondence produced by the binary-alphabet encoding.
///
/// The m-letter automaton A is padded to m_padded = 2^bits letters (the extra
/// letters act as the identity), and every state q of A is expanded into the
/// buffer states (q, w) for all bit strings w with |w| <= bits. Encoded state
/// ids follow
///
///   id(q, w) = (q - 1) * (2^(bits+1) - 1) + idx(w) + 1,
///   idx(lambda) = 0, idx(w) = 2^|w| - 1 + value(w)   (MSB-first value)
///
/// and block w of length bits selects letter rank(w) = value(w) + 1, the
/// lexicographic rank. Encoded letters: 1 feeds bit 0, 2 feeds bit 1.
struct BinaryCodec {
  int bits = 0;
  int m_original = 0;
  int m_padded = 0;
  Dfa source;  // copy of A, used to verify decoded words

  int buffers_per_state() const { return (1 << (bits + 1)) - 1; }
  int encoded_states() const { return source.n() * buffers_per_state(); }

  // idx of a buffer string given as (length, MSB-first value).
  static int buffer_index(int len, int value) { return (1 << len) - 1 + value; }

  int state_id(int q, int len, int value) const {
    return (q - 1) * buffers_per_state() + buffer_index(len, value) + 1;
  }

  int letter_of_block(int value) const { return value + 1; }
};

/// Lemma-style binary encoding. Requires m >= 2 letters; produces a 2-letter
/// automaton B with |Q| * (2^(bits+1) - 1) states satisfying
///   rt(A) * (bits + 1) <= rt(B) <= (bits + 1) * (rt(A) + 1).
inline std::pair<Dfa, BinaryCodec> encode_binary(const Dfa& a) {
  if (a.k() < 2) throw ValidationError("encode_binary requires at least 2 letters");
  int bits = 0;
  while ((1 << bits) < a.k()) ++bits;
  const int m_padded = 1 << bits;

  BinaryCodec codec{bits, a.k(), m_padded, a};
  Dfa b(codec.encoded_states(), 2);

  for (int q = 1; q <= a.n(); ++q) {
    for (int len = 0; len <= bits; ++len) {
      for (int value = 0; value < (1 << len); ++value) {
        int id = codec.state_id(q, len, value);
        if (len < bits) {
          // Append a bit to the buffer.
          b.set(id, 1, codec.state_id(q, len + 1, value << 1));
          b.set(id, 2, codec.state_id(q, len + 1, (value << 1) | 1));
        } else {
          // Full buffer: bit 1 fires letter rank(w), bit 0 self-loops.
          int letter = codec.letter_of_block(value);
          int target = letter <= a.k() ? a.step(q, letter) : q;  // padding = identity
          b.set(id, 1, id);
          b.set(id, 2, codec.state_id(target, 0, 0));
        }
      }
    }
  }
  return {std::move(b), std::move(codec)};
}

namespace detail {

// Raw buffer simulation from the empty buffer: bits fill the buffer, a 1 at a
// full buffer emits the buffered letter, a 0 at a full buffer is a no-op, a
// trailing partial block is dropped, and padding letters are dropped.
inline Word decode_raw(const BinaryCodec& codec, const Word& bw, std::size_t from) {
  Word out;
  int len = 0, value = 0;
  for (std::size_t i = from; i < bw.letters.size(); ++i) {
    int bit = bw.letters[i] - 1;
    if (len < codec.bits) {
      value = (value << 1) | bit;
      ++len;
    } else if (bit == 1) {
      int letter = codec.letter_of_block(value);
      if (letter <= codec.m_original) out.letters.push_back(letter);
      len = 0;
      value = 0;
    }
    // bit 0 at a full buffer: self-loop, nothing to do.
  }
  return out;
}

inline bool has_flush_prefix(const BinaryCodec& codec, const Word& bw) {
  if (bw.letters.size() < static_cast<std::size_t>(codec.bits) + 1) return false;
  for (int i = 0; i < codec.bits; ++i)
    if (bw.letters[i] != 1) return false;
  return bw.letters[codec.bits] == 2;
}

}  // namespace detail

/// Decodes a word over B's two letters back into a word over A's alphabet.
///
/// A leading flush prefix 0^bits 1 is stripped when the remainder still
/// verifies; otherwise the word is parsed as-is from the empty buffer. The
/// decoded word is verified to reset A; nullopt when it does not.
inline std::optional<Word> decode_word(const BinaryCodec& codec, const Word& bw) {
  for (int x : bw.letters)
    if (x != 1 && x != 2)
      throw ValidationError("encoded words use letters 1 and 2 only");
  if (detail::has_flush_prefix(codec, bw)) {
    Word stripped = detail::decode_raw(codec, bw, codec.bits + 1);
    if (is_reset_word(codec.source, stripped)) return stripped;
  }
  Word raw = detail::decode_raw(codec, bw, 0);
  if (is_reset_word(codec.source, raw)) return raw;
  return std::nullopt;
}

/// Canonical encoding of a word of A: the flush prefix 0^bits 1 followed by
/// block(letter) 1 per letter, total length (bits+1)(|u|+1).
///
/// The flush provably aligns every buffer: zeros fill any partial buffer and
/// stall at full ones, so after bits zeros every state sits at a full buffer,
/// and the single 1 fires one letter and lands everything on an empty buffer.
/// The blocks then act on all states uniformly, so the result resets B
/// whenever u resets A.
inline Word encode_word(const BinaryCodec& codec, const Word& u) {
  Word bw;
  bw.letters.assign(codec.bits, 1);
  bw.letters.push_back(2);
  for (int letter : u.letters) {
    int value = letter - 1;
    for (int b = codec.bits - 1; b >= 0; --b)
      bw.letters.push_back(((value >> b) & 1) ? 2 : 1);
    bw.letters.push_back(2);
  }
  return bw;
}

struct EncodedEstimate {
  std::int64_t estimate = 0;          // ceil(f2(B) / (bits + 1)), >= rt(A) for exact f2
  std::optional<Word> witness;        // decoded reset word for A, when available
};

/// Two-letter estimation pipeline: encode A, run the caller's two-letter
/// upper-bound estimator on B, divide out the block length, and decode the
/// estimator's word into a certified witness for A when possible.
template <class Estimator>
std::optional<EncodedEstimate> approx_rt_via_encoding(const Dfa& a, Estimator&& est) {
  auto [b, codec] = encode_binary(a);
  std::optional<ResetResult> f2 = est(b);
  if (!f2) return std::nullopt;
  EncodedEstimate r;
  std::int64_t den = codec.bits + 1;
  r.estimate = (f2->length + den - 1) / den;
  r.witness = decode_word(codec, f2->word);
  return r;
}

/// Codec text file: the block-to-letter map plus the state-map section.
inline std::string serialize_codec(const BinaryCodec& codec) {
  std::ostringstream out;
  out << "CODEC v1 bits=" << codec.bits << " letters=" << codec.m_original
      << " padded=" << codec.m_padded << " states=" << codec.source.n() << '\n';
  for (int value = 0; value < codec.m_padded; ++value) {
    out << "block ";
    for (int b = codec.bits - 1; b >= 0; --b) out << ((value >> b) & 1);
    out << " -> letter " << codec.letter_of_block(value)
        << (codec.letter_of_block(value) > codec.m_original ? " (padding)" : "")
        << '\n';
  }
  out << "statemap\n";
  for (int q = 1; q <= codec.source.n(); ++q)
    for (int len = 0; len <= codec.bits; ++len)
      for (int value = 0; value < (1 << len); ++value) {
        out << "state " << codec.state_id(q, len, value) << " = (" << q << ",";
        if (len == 0) {
          out << '-';
        } else {
          for (int b = len - 1; b >= 0; --b) out << ((value >> b) & 1);
        }
        out << ")\n";
      }
  return out.str();
}

/// Reads back the header of a codec file; the block and state sections are
/// recomputed from it and verified.
inline BinaryCodec parse_codec(std::istream& in, const Dfa& source) {
  std::string line;
  if (!std::getline(in, line)) throw detail::parse_error(1, "empty codec file");
  int bits = -1, letters = -1, padded = -1, states = -1;
  {
    auto toks = detail::split_ws(line);
    if (toks.size() != 6 || toks[0] != "CODEC" || toks[1] != "v1")
      throw detail::parse_error(1, "malformed codec header");
    for (std::size_t i = 2; i < toks.size(); ++i) {
      auto eq = toks[i].find('=');
      if (eq == std::string::npos) throw detail::parse_error(1, "malformed codec header");
      std::string key = toks[i].substr(0, eq);
      int v = detail::parse_int(toks[i].substr(eq + 1), 1);
      if (key == "bits") bits = v;
      else if (key == "letters") letters = v;
      else if (key == "padded") padded = v;
      else if (key == "states") states = v;
    }
  }
  if (bits < 0 || letters < 1 || padded < 2 || states < 1)
    throw detail::parse_error(1, "incomplete codec header");
  if (source.k() != letters)
    throw ParseError("codec letter count does not match the automaton");
  if (source.n() != states)
    throw ParseError("codec state count does not match the automaton");
  if (padded != (1 << bits))
    throw ParseError("codec padding is not a power of two");
  return BinaryCodec{bits, letters, padded, source};
}

}  // namespace synchro
