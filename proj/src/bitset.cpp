#include "fcr/bitset.hpp"

#include <bit>

namespace fcr {

namespace {

constexpr std::size_t word_count(std::size_t bits) {
  return (bits + BitSet::kWordBits - 1) / BitSet::kWordBits;
}

}  // namespace

BitSet::BitSet(std::size_t size, bool value)
    : size_(size), words_(word_count(size), value ? ~Word{0} : Word{0}) {
  clear_tail();
}

BitSet::BitSet(std::size_t size, std::initializer_list<std::size_t> bits) : BitSet(size) {
  for (std::size_t b : bits) set(b);
}

BitSet BitSet::from_indices(std::size_t size, std::span<const std::size_t> bits) {
  BitSet s(size);
  for (std::size_t b : bits) s.set(b);
  return s;
}

void BitSet::clear_tail() noexcept {
  if (std::size_t rem = size_ % kWordBits; rem != 0) {
    words_.back() &= (Word{1} << rem) - 1;
  }
}

void BitSet::set_all() {
  for (Word& w : words_) w = ~Word{0};
  clear_tail();
}

void BitSet::reset_all() {
  for (Word& w : words_) w = 0;
}

std::size_t BitSet::count() const noexcept {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitSet::any() const noexcept {
  for (Word w : words_) {
    if (w) return true;
  }
  return false;
}

std::size_t BitSet::find_next(std::size_t from) const noexcept {
  if (from >= size_) return npos;
  std::size_t w = from / kWordBits;
  Word bits = words_[w] & (~Word{0} << (from % kWordBits));
  while (true) {
    if (bits) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w == words_.size()) return npos;
    bits = words_[w];
  }
}

bool BitSet::is_subset_of(const BitSet& other) const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & ~other.words_[w]) return false;
  }
  return true;
}

bool BitSet::intersects(const BitSet& other) const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & other.words_[w]) return true;
  }
  return false;
}

bool BitSet::equal_below(const BitSet& other, std::size_t limit) const noexcept {
  std::size_t full = limit / kWordBits;
  for (std::size_t w = 0; w < full; ++w) {
    if (words_[w] != other.words_[w]) return false;
  }
  if (std::size_t rem = limit % kWordBits; rem != 0) {
    Word mask = (Word{1} << rem) - 1;
    if ((words_[full] ^ other.words_[full]) & mask) return false;
  }
  return true;
}

BitSet& BitSet::operator&=(const BitSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

BitSet& BitSet::operator|=(const BitSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

BitSet& BitSet::operator^=(const BitSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitSet& BitSet::subtract(const BitSet& other) noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
  return *this;
}

std::vector<std::size_t> BitSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

std::size_t BitSet::hash() const noexcept {
  // FNV-1a over words, then size.
  std::uint64_t h = 1469598103934665603ull;
  for (Word w : words_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  h ^= size_;
  return static_cast<std::size_t>(h * 1099511628211ull);
}

bool lectic_less(const BitSet& a, const BitSet& b) noexcept {
  auto aw = a.words();
  auto bw = b.words();
  for (std::size_t w = 0; w < aw.size(); ++w) {
    if (BitSet::Word diff = aw[w] ^ bw[w]; diff) {
      BitSet::Word low = diff & (~diff + 1);
      return (bw[w] & low) != 0;
    }
  }
  return false;
}

}  // namespace fcr
