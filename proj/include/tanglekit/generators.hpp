#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tanglekit/core.hpp"
#include "tanglekit/order.hpp"

namespace tanglekit {

struct InstanceBundle {
  InstanceBundle(SystemPtr sys, Tangle t) : system(std::move(sys)), tangle(std::move(t)) {}

  SystemPtr system;
  Tangle tangle;
  std::optional<OrderAssignment> order;
  /// Every nontrivial separation with the order attached, when it was built.
  SystemPtr full_system;
  /// "min-side" when the order is the min-side order (recomputable on load).
  std::string order_function;
  std::vector<std::pair<std::string, PointSet>> designated_sets;
  /// Triples of separation indices singled out by the construction.
  std::vector<std::array<std::size_t, 3>> spread_triples;

  std::string example;
  std::map<std::string, long long> params;
  std::vector<std::string> flags;

  [[nodiscard]] const PointSet* designated(const std::string& name) const;
};

/// |V| = max(3k−2, 2), min-side order; the tangle orients S_k toward the
/// larger sides. For k <= 6 the full system is built too; above that only
/// S_k is emitted (flag "s_k_only"). Throws InvalidParam for k < 1 and
/// LimitExceeded for k > 8.
InstanceBundle gen_min_order(int k);

/// V = 3-subsets of {1..k}, A_j = {T : j ∈ T}, tangle {A_1..A_k}.
/// Throws InvalidParam for k < 4, LimitExceeded for k > 12.
InstanceBundle gen_triples(int k);

/// V = W ⊎ G over Z/n with W the (k−1)-subsets, G the arcs of `arc_len`
/// (default k) consecutive residues, k = 2n/3; A_j = {v : j ∈ v}.
/// Throws InvalidParam unless n >= 6 and 3 | n.
InstanceBundle gen_arcs(int n, std::optional<int> arc_len = std::nullopt);

/// n = 2k−1, W = 3-subsets of Z/n, G arcs of length k (or `arc_len`), plus the
/// n spread triples {j, j+n/3+1, j+2n/3+2}. Throws InvalidParam unless k >= 5
/// and 3 | (2k−1).
InstanceBundle gen_arcs_witness(int k, std::optional<int> arc_len = std::nullopt);

/// m random nontrivial sides over n points (fewer if the ground set has
/// fewer separations); the tangle is the first one enumerated. Throws
/// InvalidParam unless 2 <= n <= 64 and 1 <= m <= 24.
InstanceBundle gen_random(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace tanglekit
