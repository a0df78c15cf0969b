#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tanglekit/point_set.hpp"

namespace tanglekit {

struct HittingOptions {
  /// Distinct ⊆-minimal members allowed after reduction.
  std::size_t max_family = 10000;
  /// Search nodes across all probes before LimitExceeded.
  std::size_t max_nodes = 200'000'000;
};

/// Distinct ⊆-minimal members, sorted by size then numerically. A set hits
/// the input family iff it hits the reduced one.
std::vector<PointSet> reduce_family(std::span<const PointSet> family);

/// A minimum-cardinality set meeting every member of `family`; among those,
/// the lexicographically least sorted index list. Throws InvalidParam if a
/// member is empty, LimitExceeded past the option limits.
PointSet minimum_hitting_set(std::size_t universe, std::span<const PointSet> family,
                             const HittingOptions& options = {});

/// Repeatedly adds the point lying in the most unhit members (smallest index
/// on ties). Members count with multiplicity.
PointSet greedy_hitting_set(std::size_t universe, std::span<const PointSet> family);

namespace serial {

PointSet minimum_hitting_set(std::size_t universe, std::span<const PointSet> family,
                             const HittingOptions& options = {});
PointSet greedy_hitting_set(std::size_t universe, std::span<const PointSet> family);

}  // namespace serial

}  // namespace tanglekit
