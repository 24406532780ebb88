#include "rulenet/word.hpp"

#include <algorithm>
#include <bit>

namespace rulenet {

namespace {

u128 payload_mask(int bits) {
  return bits >= 128 ? ~u128{0} : (u128{1} << bits) - 1;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

Alphabet::Alphabet(int size) : size_(size), bits_(0) {
  if (size < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (size > 256) throw std::invalid_argument("alphabet size must be at most 256");
  bits_ = std::bit_width(static_cast<unsigned>(size - 1));
}

int Alphabet::max_atoms() const {
  return std::min(255, Word::kPayloadBits / bits_);
}

Word Word::make(u128 payload, int length, int bits) {
  return Word(payload | (u128(bits) << 116) | (u128(length) << 120));
}

Word Word::single(int atom, const Alphabet& alphabet) {
  if (atom < 0 || atom >= alphabet.size()) throw std::out_of_range("atom outside alphabet");
  return make(u128(atom), 1, alphabet.bits_per_atom());
}

Word Word::from_atoms(const std::vector<int>& atoms, const Alphabet& alphabet) {
  if (atoms.empty()) throw std::invalid_argument("words are non-empty");
  if (static_cast<int>(atoms.size()) > alphabet.max_atoms()) {
    throw CapacityError("word of " + std::to_string(atoms.size()) +
                        " atoms exceeds packing capacity of " +
                        std::to_string(alphabet.max_atoms()));
  }
  const int b = alphabet.bits_per_atom();
  u128 payload = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] < 0 || atoms[i] >= alphabet.size()) {
      throw std::out_of_range("atom outside alphabet");
    }
    payload |= u128(atoms[i]) << (i * b);
  }
  return make(payload, static_cast<int>(atoms.size()), b);
}

Word Word::parse(std::string_view text, const Alphabet& alphabet) {
  std::vector<int> atoms;
  atoms.reserve(text.size());
  for (char c : text) {
    if (c < 'a' || c > 'z') throw std::invalid_argument("word letters must be in a..z");
    atoms.push_back(c - 'a');
  }
  return from_atoms(atoms, alphabet);
}

Word Word::append(int a) const {
  const int b = bits_per_atom();
  const int n = length();
  if ((n + 1) * b > kPayloadBits || n + 1 > 255) {
    throw CapacityError("appending would exceed packing capacity");
  }
  return make((value_ & payload_mask(n * b)) | (u128(a) << (n * b)), n + 1, b);
}

Word Word::concat(const Word& tail) const {
  const int b = bits_per_atom();
  const int n = length();
  const int m = tail.length();
  if ((n + m) * b > kPayloadBits || n + m > 255) {
    throw CapacityError("concatenation would exceed packing capacity");
  }
  return make((value_ & payload_mask(n * b)) | ((tail.value_ & payload_mask(m * b)) << (n * b)),
              n + m, b);
}

Word Word::prefix(int len) const {
  const int b = bits_per_atom();
  return make(value_ & payload_mask(len * b), len, b);
}

Word Word::suffix(int len) const {
  const int b = bits_per_atom();
  const int shift = (length() - len) * b;
  return make((value_ >> shift) & payload_mask(len * b), len, b);
}

Word Word::sub(int start, int len) const {
  const int b = bits_per_atom();
  return make((value_ >> (start * b)) & payload_mask(len * b), len, b);
}

Word Word::reversed() const {
  const int b = bits_per_atom();
  const int n = length();
  u128 payload = 0;
  for (int i = 0; i < n; ++i) payload |= u128(atom(i)) << ((n - 1 - i) * b);
  return make(payload, n, b);
}

bool Word::contains(const Word& needle) const {
  const int m = needle.length();
  for (int i = 0; i + m <= length(); ++i) {
    if (sub(i, m) == needle) return true;
  }
  return false;
}

std::vector<int> Word::atoms() const {
  std::vector<int> out(length());
  for (int i = 0; i < length(); ++i) out[i] = atom(i);
  return out;
}

std::string Word::str() const {
  std::string out;
  for (int i = 0; i < length(); ++i) {
    const int a = atom(i);
    if (a < 26) {
      out.push_back(static_cast<char>('a' + a));
    } else {
      out += "<" + std::to_string(a) + ">";
    }
  }
  return out;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  return static_cast<std::size_t>(mix64(w.low() ^ mix64(w.high())));
}

std::vector<Word> strict_subwords(const Word& x) {
  std::vector<Word> out;
  const int n = x.length();
  for (int len = 1; len < n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      out.push_back(x.sub(i, len));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Word> all_words(const Alphabet& alphabet, int level) {
  std::vector<Word> out;
  std::vector<int> atoms(level + 1, 0);
  while (true) {
    out.push_back(Word::from_atoms(atoms, alphabet));
    int i = level;
    while (i >= 0 && ++atoms[i] == alphabet.size()) atoms[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace rulenet
