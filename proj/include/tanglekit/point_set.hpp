#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace tanglekit {

/// A subset of the ground set {0, ..., universe-1}, stored as a bitmask.
///
/// Universes of up to 128 points live inline; larger ones spill to the heap.
/// All binary operations assume both operands share a universe (checked in
/// debug builds only; public entry points that accept user sets validate).
class PointSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  PointSet() = default;
  explicit PointSet(std::size_t universe)
      : universe_(universe), words_(word_count_for(universe), Word{0}) {}

  static PointSet full(std::size_t universe);
  /// Throws Error{IndexOutOfRange} for indices >= universe.
  static PointSet from_indices(std::size_t universe, std::span<const std::size_t> indices);
  static PointSet from_indices(std::size_t universe, std::initializer_list<std::size_t> indices) {
    return from_indices(universe, std::span<const std::size_t>(indices.begin(), indices.size()));
  }
  /// Low `universe` bits of `bits`; requires universe <= 64.
  static PointSet from_word(std::size_t universe, Word bits);

  [[nodiscard]] std::size_t universe() const noexcept { return universe_; }
  [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }
  [[nodiscard]] Word word(std::size_t i) const noexcept { return words_[i]; }

  [[nodiscard]] bool test(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

  [[nodiscard]] std::size_t count() const noexcept;
  [[nodiscard]] bool empty() const noexcept;
  [[nodiscard]] bool is_full() const noexcept;
  [[nodiscard]] PointSet complement() const;
  [[nodiscard]] bool is_subset_of(const PointSet& other) const noexcept;
  [[nodiscard]] bool intersects(const PointSet& other) const noexcept;
  [[nodiscard]] std::optional<std::size_t> first() const noexcept;
  /// Smallest member strictly greater than `i`.
  [[nodiscard]] std::optional<std::size_t> next_after(std::size_t i) const noexcept;
  [[nodiscard]] std::vector<std::size_t> indices() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(bits));
        f(w * kWordBits + bit);
        bits &= bits - 1;
      }
    }
  }

  PointSet& operator&=(const PointSet& o) noexcept;
  PointSet& operator|=(const PointSet& o) noexcept;
  PointSet& operator-=(const PointSet& o) noexcept;

  friend PointSet operator&(PointSet a, const PointSet& b) noexcept { return a &= b; }
  friend PointSet operator|(PointSet a, const PointSet& b) noexcept { return a |= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) noexcept { return a -= b; }

  friend bool operator==(const PointSet& a, const PointSet& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }
  /// Numeric order of the masks read as unsigned integers (bit i = point i).
  friend std::strong_ordering operator<=>(const PointSet& a, const PointSet& b) noexcept;

  [[nodiscard]] std::size_t hash() const noexcept;

  /// a ∩ b ∩ c ≠ ∅ without materializing the intersection.
  [[nodiscard]] static bool meet(const PointSet& a, const PointSet& b, const PointSet& c) noexcept;
  /// a ∩ b ∩ c ∩ d ≠ ∅.
  [[nodiscard]] static bool meet(const PointSet& a, const PointSet& b, const PointSet& c,
                                 const PointSet& d) noexcept;

 private:
  static std::size_t word_count_for(std::size_t universe) noexcept {
    return (universe + kWordBits - 1) / kWordBits;
  }
  void clear_tail() noexcept;

  std::size_t universe_ = 0;
  boost::container::small_vector<Word, 2> words_;
};

struct PointSetHash {
  std::size_t operator()(const PointSet& s) const noexcept { return s.hash(); }
};

/// Lexicographic order of the sorted member lists ({0,5} < {1,2}); used for
/// deterministic tie-breaking between sets of equal cardinality.
[[nodiscard]] bool lex_less(const PointSet& a, const PointSet& b) noexcept;

}  // namespace tanglekit
