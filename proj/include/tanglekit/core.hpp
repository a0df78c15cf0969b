#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tanglekit/point_set.hpp"

namespace tanglekit {

struct GroundSet {
  std::size_t size = 0;
  std::vector<std::string> labels;  // empty, or exactly `size` distinct names

  /// Validates size >= 1 and label uniqueness.
  static GroundSet make(std::size_t size, std::vector<std::string> labels = {});

  [[nodiscard]] std::string label(std::size_t v) const;
  [[nodiscard]] std::optional<std::size_t> find_label(const std::string& name) const;
};

/// The representative stored for {side, side^c}: the numerically smaller
/// mask, i.e. the side that does not contain the last point.
[[nodiscard]] PointSet canonical_side(const PointSet& side);

/// An ordered family of distinct nontrivial bipartitions of the ground set.
/// Immutable once built; share it through SystemPtr.
class SeparationSystem {
 public:
  [[nodiscard]] const GroundSet& ground() const noexcept { return ground_; }
  [[nodiscard]] std::size_t ground_size() const noexcept { return ground_.size; }
  [[nodiscard]] std::size_t size() const noexcept { return separations_.size(); }
  [[nodiscard]] const PointSet& separation(std::size_t i) const { return separations_.at(i); }
  [[nodiscard]] std::span<const PointSet> separations() const noexcept { return separations_; }

  [[nodiscard]] bool has_orders() const noexcept { return orders_.has_value(); }
  [[nodiscard]] const std::optional<std::vector<int>>& orders() const noexcept { return orders_; }

  /// Index of the separation having `side` as one of its sides.
  [[nodiscard]] std::optional<std::size_t> find(const PointSet& side) const;

 private:
  friend struct SystemBuilder;

  GroundSet ground_;
  std::vector<PointSet> separations_;
  std::optional<std::vector<int>> orders_;
  std::unordered_map<PointSet, std::size_t, PointSetHash> index_;
};

using SystemPtr = std::shared_ptr<const SeparationSystem>;

struct BuiltSystem {
  SystemPtr system;
  /// mapping[i] = stored index of input side i.
  std::vector<std::size_t> mapping;
};

/// Canonicalizes and deduplicates `sides`, preserving first occurrence.
/// Orders, when given, align with the input sides; on duplicates the first
/// occurrence's order is kept. Throws TrivialSeparation for empty/full sides,
/// IndexOutOfRange for masks over a different universe, InvalidParam for
/// negative orders or misaligned order lists.
BuiltSystem make_system(GroundSet ground, std::span<const PointSet> sides,
                        std::optional<std::vector<int>> orders = std::nullopt);

/// Same separations with an order list attached (or replaced).
SystemPtr with_orders(const SeparationSystem& system, std::vector<int> orders);

/// Every nontrivial bipartition of the ground set, in increasing order of the
/// canonical mask. Throws LimitExceeded above `max_ground` points.
SystemPtr all_separations(GroundSet ground, std::size_t max_ground = 20);

/// orientation[i] == true means the stored canonical side of separation i is
/// the big side.
using Orientation = std::vector<bool>;

struct ConsistencyResult {
  bool consistent = true;
  /// Lexicographically first violating index set (size 2 or 3), sorted.
  std::vector<std::size_t> violation;
};

/// Checks that every at-most-3 subset of the chosen big sides meets.
/// Throws LengthMismatch if the orientation does not cover the system.
ConsistencyResult is_consistent(const SeparationSystem& system, const Orientation& orientation);

/// Big sides selected by `orientation`.
std::vector<PointSet> big_sides_of(const SeparationSystem& system, const Orientation& orientation);

/// Indices whose sides are ⊆-minimal within `sides` (increasing order).
std::vector<std::size_t> minimal_indices(std::span<const PointSet> sides);

class Tangle {
 public:
  /// Validates length and consistency; throws LengthMismatch / NotATangle.
  static Tangle make(SystemPtr system, Orientation orientation);
  /// For orientations that are consistent by construction (e.g. the Lemma
  /// extension); only the length is checked.
  static Tangle assume_consistent(SystemPtr system, Orientation orientation);

  [[nodiscard]] const SeparationSystem& system() const noexcept { return *system_; }
  [[nodiscard]] const SystemPtr& system_ptr() const noexcept { return system_; }
  [[nodiscard]] const Orientation& orientation() const noexcept { return orientation_; }
  [[nodiscard]] std::size_t size() const noexcept { return orientation_.size(); }
  [[nodiscard]] std::size_t ground_size() const noexcept { return system_->ground_size(); }

  /// Throws IndexOutOfRange.
  [[nodiscard]] const PointSet& big_side(std::size_t sep_index) const;
  [[nodiscard]] PointSet small_side(std::size_t sep_index) const { return big_side(sep_index).complement(); }
  [[nodiscard]] std::span<const PointSet> big_sides() const noexcept { return big_sides_; }

  /// Separation indices of the ⊆-minimal big sides (cached, thread-safe).
  [[nodiscard]] const std::vector<std::size_t>& minimal_indices() const;
  [[nodiscard]] std::vector<PointSet> minimal_sides() const;

 private:
  Tangle(SystemPtr system, Orientation orientation);

  struct MinimalCache;

  SystemPtr system_;
  Orientation orientation_;
  std::vector<PointSet> big_sides_;
  std::shared_ptr<MinimalCache> minimal_;
};

/// τ_v: every separation oriented toward the side containing v.
Tangle principal_tangle(SystemPtr system, std::size_t v);

/// The ⊆-minimal big sides of the tangle.
std::vector<PointSet> minimal_elements(const Tangle& tangle);

struct Corners {
  std::optional<PointSet> meet;  // A ∩ B, absent when empty or full
  std::optional<PointSet> join;  // A ∪ B, absent when empty or full
};

/// Throws GroundMismatch when the sides live on different ground sets.
Corners corners(const PointSet& a, const PointSet& b);

struct EnumerateOptions {
  std::size_t max_separations = 24;
  std::size_t max_results = std::numeric_limits<std::size_t>::max();
};

/// All consistent orientations, in DFS order with the canonical side tried
/// first. Throws LimitExceeded above `max_separations`.
std::vector<Tangle> enumerate_tangles(const SystemPtr& system, const EnumerateOptions& options = {});

namespace serial {

/// Plain triple loop; reference for the pruned/parallel check.
ConsistencyResult is_consistent(const SeparationSystem& system, const Orientation& orientation);

/// Single-threaded DFS; reference for the prefix-partitioned search.
std::vector<Tangle> enumerate_tangles(const SystemPtr& system, const EnumerateOptions& options = {});

}  // namespace serial

}  // namespace tanglekit
