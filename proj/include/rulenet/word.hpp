#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rulenet {

using u128 = unsigned __int128;

// Raised when a word would not fit into the packed representation.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class Alphabet {
 public:
  explicit Alphabet(int size);

  int size() const { return size_; }
  int bits_per_atom() const { return bits_; }
  // Longest word (in atoms) that fits the packed representation.
  int max_atoms() const;
  int max_level() const { return max_atoms() - 1; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  int size_;
  int bits_;
};

// A linear molecule: a non-empty oriented sequence of atoms.
//
// Layout of the 128-bit value: atom i occupies bits [i*b, (i+1)*b) with
// b = ceil(log2 |A|); bits 116..119 hold b and bits 120..127 the length.
// A default-constructed Word has length 0 and only serves as a sentinel.
class Word {
 public:
  static constexpr int kPayloadBits = 116;

  Word() = default;

  static Word single(int atom, const Alphabet& alphabet);
  static Word from_atoms(const std::vector<int>& atoms, const Alphabet& alphabet);
  // Letters 'a', 'b', ... denote atoms 0, 1, ...; exponents are not parsed.
  static Word parse(std::string_view text, const Alphabet& alphabet);
  static Word from_packed(u128 packed) { return Word(packed); }

  bool empty() const { return length() == 0; }
  int length() const { return static_cast<int>(value_ >> 120); }
  int level() const { return length() - 1; }
  int bits_per_atom() const { return static_cast<int>((value_ >> 116) & 0xF); }
  int atom(int i) const {
    const int b = bits_per_atom();
    return static_cast<int>((value_ >> (i * b)) & ((u128{1} << b) - 1));
  }
  int first() const { return atom(0); }
  int last() const { return atom(length() - 1); }

  Word append(int atom) const;
  Word concat(const Word& tail) const;
  Word prefix(int len) const;
  Word suffix(int len) const;
  Word sub(int start, int len) const;
  Word reversed() const;
  bool contains(const Word& needle) const;

  std::vector<int> atoms() const;
  std::string str() const;
  u128 packed() const { return value_; }
  std::uint64_t low() const { return static_cast<std::uint64_t>(value_); }
  std::uint64_t high() const { return static_cast<std::uint64_t>(value_ >> 64); }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return a.value_ <=> b.value_;
  }

 private:
  explicit Word(u128 value) : value_(value) {}
  static Word make(u128 payload, int length, int bits);

  u128 value_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

// All contiguous factors a_i..a_j of x other than x itself, deduplicated and sorted.
std::vector<Word> strict_subwords(const Word& x);

// Every word of the given level, in lexicographic atom order.
std::vector<Word> all_words(const Alphabet& alphabet, int level);

}  // namespace rulenet
