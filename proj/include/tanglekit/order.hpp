#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tanglekit/core.hpp"

namespace tanglekit {

/// Order values aligned with a system's separations.
struct OrderAssignment {
  SystemPtr system;
  std::vector<int> values;

  /// The system with these values attached as its orders.
  [[nodiscard]] SystemPtr attach() const { return with_orders(*system, values); }
};

/// f({A, A^c}) = min(|A|, |A^c|).
OrderAssignment min_side_order(const SystemPtr& system);

enum class Closure {
  Full,     // system must contain every nontrivial separation of V
  Sampled,  // pairs whose corners have no order are skipped
};

struct SubmodularityResult {
  bool submodular = true;
  /// First violating pair of sides (A, B), in side order: side 2i is the
  /// stored side of separation i, side 2i+1 its complement.
  std::optional<std::pair<PointSet, PointSet>> violation;
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;
};

/// Checks f(A∩B) + f(A∪B) <= f(A) + f(B) over pairs of sides, with trivial
/// corners at order 0. Throws MissingOrder if the system carries no orders,
/// or (Full mode) when some corner is not in the system.
SubmodularityResult is_submodular(const SeparationSystem& system, Closure closure = Closure::Full);

struct Restriction {
  SystemPtr system;
  /// kept[i] = index in the source system of restricted separation i.
  std::vector<std::size_t> kept;
};

/// S_k = {s : f(s) < k}, orders preserved. Throws MissingOrder.
Restriction restrict_sk(const SeparationSystem& system, int k);

/// For all sides A, B of separations in S_k, at least one corner is trivial
/// or a side of some separation of order < k in `system`.
bool corner_closure_check(const SeparationSystem& system, int k);

struct ExtensionData {
  std::vector<PointSet> base_minimals;          // A_1..A_k
  std::vector<std::vector<std::size_t>> point_types;  // T_v = {j : v ∈ A_j}
};

struct Extension {
  int k = 0;
  ExtensionData data;
  /// All nontrivial separations of V carrying f*.
  SystemPtr full;
  /// S*_k together with its indices into `full`.
  Restriction sk;
  /// τ* over sk.system.
  std::optional<Tangle> tau_star;
  /// U sets per separation of `full` (indices into base_minimals).
  std::vector<std::vector<std::size_t>> u_sets;

  [[nodiscard]] const Tangle& tangle() const { return *tau_star; }
};

/// f*(s) = k − |U_s| with U_s the larger of {j : A_j ⊆ side} over the two
/// sides, and τ* orienting each s with f*(s) < k toward the side holding
/// the A_j of U_s. Throws LimitExceeded above `max_ground` points and
/// NotATangle for an inconsistent base.
Extension extend_order(const Tangle& base, std::size_t max_ground = 20);

/// True iff `tangle` (over some subsystem of S_k) admits no consistent
/// extension to all separations of order < k in `full_ordered`. Throws
/// LimitExceeded above `max_ground` points, InvalidParam if a separation of
/// the tangle is missing from `full_ordered` or has order >= k.
bool is_fake(const Tangle& tangle, const SeparationSystem& full_ordered, int k,
             std::size_t max_ground = 16);

namespace serial {

SubmodularityResult is_submodular(const SeparationSystem& system, Closure closure = Closure::Full);

}  // namespace serial

}  // namespace tanglekit
