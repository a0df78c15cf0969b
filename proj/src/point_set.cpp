#include "tanglekit/point_set.hpp"

#include "tanglekit/error.hpp"

#include <string>

namespace tanglekit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::TrivialSeparation: return "TrivialSeparation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
    case ErrorKind::GroundMismatch: return "GroundMismatch";
    case ErrorKind::NotATangle: return "NotATangle";
    case ErrorKind::OrderNotSubmodular: return "OrderNotSubmodular";
    case ErrorKind::NotKTangle: return "NotKTangle";
    case ErrorKind::MissingOrder: return "MissingOrder";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotGuiding: return "NotGuiding";
    case ErrorKind::LPFailure: return "LPFailure";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::InvalidParam: return "InvalidParam";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DegenerateColumn: return "DegenerateColumn";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

PointSet PointSet::full(std::size_t universe) {
  PointSet s(universe);
  for (auto& w : s.words_) w = ~Word{0};
  s.clear_tail();
  return s;
}

PointSet PointSet::from_indices(std::size_t universe, std::span<const std::size_t> indices) {
  PointSet s(universe);
  for (std::size_t i : indices) {
    if (i >= universe) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "point " + std::to_string(i) + " outside ground set of size " +
                      std::to_string(universe));
    }
    s.set(i);
  }
  return s;
}

PointSet PointSet::from_word(std::size_t universe, Word bits) {
  if (universe > kWordBits) {
    throw Error(ErrorKind::InvalidParam, "from_word needs a universe of at most 64 points");
  }
  PointSet s(universe);
  if (universe > 0) {
    s.words_[0] = bits;
    s.clear_tail();
    if (s.words_[0] != bits) {
      throw Error(ErrorKind::IndexOutOfRange, "bitmask wider than ground set");
    }
  } else if (bits != 0) {
    throw Error(ErrorKind::IndexOutOfRange, "bitmask wider than ground set");
  }
  return s;
}

void PointSet::clear_tail() noexcept {
  const std::size_t rem = universe_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (Word{1} << rem) - 1;
}

std::size_t PointSet::count() const noexcept {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool PointSet::empty() const noexcept {
  for (Word w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool PointSet::is_full() const noexcept { return count() == universe_; }

PointSet PointSet::complement() const {
  PointSet s = *this;
  for (auto& w : s.words_) w = ~w;
  s.clear_tail();
  return s;
}

bool PointSet::is_subset_of(const PointSet& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool PointSet::intersects(const PointSet& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

bool PointSet::meet(const PointSet& a, const PointSet& b, const PointSet& c) noexcept {
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    if ((a.words_[i] & b.words_[i] & c.words_[i]) != 0) return true;
  }
  return false;
}

bool PointSet::meet(const PointSet& a, const PointSet& b, const PointSet& c,
                    const PointSet& d) noexcept {
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    if ((a.words_[i] & b.words_[i] & c.words_[i] & d.words_[i]) != 0) return true;
  }
  return false;
}

std::optional<std::size_t> PointSet::first() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) {
      return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> PointSet::next_after(std::size_t i) const noexcept {
  std::size_t start = i + 1;
  if (start >= universe_) return std::nullopt;
  std::size_t w = start / kWordBits;
  Word bits = words_[w] & (~Word{0} << (start % kWordBits));
  while (true) {
    if (bits != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w >= words_.size()) return std::nullopt;
    bits = words_[w];
  }
}

std::vector<std::size_t> PointSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

PointSet& PointSet::operator&=(const PointSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

PointSet& PointSet::operator|=(const PointSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

PointSet& PointSet::operator-=(const PointSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

std::strong_ordering operator<=>(const PointSet& a, const PointSet& b) noexcept {
  if (a.universe_ != b.universe_) return a.universe_ <=> b.universe_;
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
  }
  return std::strong_ordering::equal;
}

std::size_t PointSet::hash() const noexcept {
  // splitmix-style mixing per word
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ universe_;
  for (Word w : words_) {
    std::uint64_t z = w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

bool lex_less(const PointSet& a, const PointSet& b) noexcept {
  // Members below the first differing point p are shared. The set owning p
  // continues its list with p; the other continues with its next member after
  // p, or ends there (making it a proper prefix, hence smaller).
  for (std::size_t w = 0; w < a.word_count(); ++w) {
    const PointSet::Word diff = a.word(w) ^ b.word(w);
    if (diff == 0) continue;
    const auto p = w * PointSet::kWordBits + static_cast<std::size_t>(std::countr_zero(diff));
    if (a.test(p)) return b.next_after(p).has_value();
    return !a.next_after(p).has_value();
  }
  return false;
}

}  // namespace tanglekit
