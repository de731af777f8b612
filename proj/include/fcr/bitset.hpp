#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace fcr {

/// Fixed-width dynamic bit set packed into 64-bit words.
///
/// Used both for object/attribute index sets and for incidence rows and
/// columns. Bits beyond size() are always zero, so word-wise comparisons
/// are exact.
class BitSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BitSet() = default;
  explicit BitSet(std::size_t size, bool value = false);
  BitSet(std::size_t size, std::initializer_list<std::size_t> bits);

  static BitSet full(std::size_t size) { return BitSet(size, true); }
  static BitSet from_indices(std::size_t size, std::span<const std::size_t> bits);

  std::size_t size() const noexcept { return size_; }
  bool empty_universe() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void set_all();
  void reset_all();

  std::size_t count() const noexcept;
  bool any() const noexcept;
  bool none() const noexcept { return !any(); }
  bool all() const noexcept { return count() == size_; }

  /// Index of the lowest set bit at or after `from`, or npos.
  std::size_t find_next(std::size_t from) const noexcept;
  std::size_t find_first() const noexcept { return find_next(0); }

  bool is_subset_of(const BitSet& other) const noexcept;
  bool is_proper_subset_of(const BitSet& other) const noexcept {
    return is_subset_of(other) && *this != other;
  }
  bool intersects(const BitSet& other) const noexcept;

  /// True when both sets agree on every bit below `limit`.
  bool equal_below(const BitSet& other, std::size_t limit) const noexcept;

  BitSet& operator&=(const BitSet& other) noexcept;
  BitSet& operator|=(const BitSet& other) noexcept;
  BitSet& operator^=(const BitSet& other) noexcept;
  /// Removes every bit of `other` from this set.
  BitSet& subtract(const BitSet& other) noexcept;

  friend BitSet operator&(BitSet a, const BitSet& b) noexcept { return a &= b; }
  friend BitSet operator|(BitSet a, const BitSet& b) noexcept { return a |= b; }
  friend BitSet operator^(BitSet a, const BitSet& b) noexcept { return a ^= b; }

  bool operator==(const BitSet& other) const noexcept = default;

  std::vector<std::size_t> indices() const;
  std::span<const Word> words() const noexcept { return words_; }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        f(w * kWordBits + static_cast<std::size_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::size_t hash() const noexcept;

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

/// Lectic order: a < b iff the smallest index where they differ is in b.
bool lectic_less(const BitSet& a, const BitSet& b) noexcept;

struct BitSetHash {
  std::size_t operator()(const BitSet& s) const noexcept { return s.hash(); }
};

}  // namespace fcr
