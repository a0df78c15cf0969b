#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tanglekit/core.hpp"
#include "tanglekit/hitting_set.hpp"

namespace tanglekit {

enum class WitnessMethod { Exact, Greedy, Inductive };
std::string to_string(WitnessMethod method);

struct WitnessReport {
  PointSet set;
  WitnessMethod method = WitnessMethod::Exact;
  bool certified_minimal = false;
  /// Number of at-most-3 subsets of the minimal big sides that were checked.
  std::size_t triple_count = 0;
};

struct WitnessCheck {
  bool witnessing = true;
  /// Separation indices (increasing) of the first unwitnessed subset.
  std::vector<std::size_t> unwitnessed;
};

/// Intersections of all subsets of size 1..3 of the minimal big sides, in
/// lexicographic order of the index subsets (a prefix precedes its extensions).
std::vector<PointSet> witness_family(const Tangle& tangle);

/// W meets every intersection of at most three minimal big sides.
WitnessCheck is_witnessing(const Tangle& tangle, const PointSet& w);
/// Same question over all big sides; oracle for the reduction to minimal sides.
WitnessCheck is_witnessing_direct(const Tangle& tangle, const PointSet& w);

bool is_cover(const Tangle& tangle, const PointSet& u);

/// Minimum cover (exact), lexicographically least among minimum ones.
PointSet min_cover(const Tangle& tangle, const HittingOptions& options = {});

WitnessReport min_witnessing(const Tangle& tangle, const HittingOptions& options = {});
WitnessReport greedy_witnessing(const Tangle& tangle);

/// One 3-part class of the inductive construction; `point` is v_X when some
/// triple separated by the class remains.
struct PartitionClass {
  std::array<PointSet, 3> parts;
  std::optional<std::size_t> point;
};

struct InductiveLevel {
  int level = 0;
  PointSet witness_points;  // W_i
  std::vector<PartitionClass> partitions;
  PointSet new_points;  // N_i
};

struct InductiveResult {
  WitnessReport report;
  PointSet base_cover;  // W_k
  std::vector<InductiveLevel> trace;
};

struct InductiveOptions {
  int max_k = 4;
  bool keep_trace = true;
  HittingOptions cover;
};

/// Builds W_{3k−2} from a minimum cover W_k by splitting W_i into ordered
/// 3-part classes and adding, per class, the least point of the intersection
/// of its sides B_{X,j}. `tangle` must orient exactly the separations of
/// `full_ordered` with order < k. Throws MissingOrder, LimitExceeded,
/// OrderNotSubmodular (also when some B_{X,j} is not unique) and NotKTangle.
InductiveResult inductive_witnessing(const Tangle& tangle, const SeparationSystem& full_ordered, int k,
                                     const InductiveOptions& options = {});

struct IntersectionChain {
  std::vector<std::size_t> sequence;     // separation indices of minimal big sides
  std::vector<PointSet> intersections;   // running intersections of complements
  [[nodiscard]] std::size_t length() const { return sequence.size(); }
};

/// Longest chain of minimal big sides whose complements' running
/// intersections strictly shrink. Throws LimitExceeded for more than
/// `max_minimals` minimal sides.
IntersectionChain max_intersection_chain(const Tangle& tangle, std::size_t max_minimals = 64);

struct BoundValues {
  int k = 0;
  std::optional<mpz_class> gs_theta;  // θ(3k−2), when representable
  std::string gs_theta_text;
  mpz_class first_bound;   // (3^{3k−2} − 3^k)/2 + k
  mpz_class second_bound;  // (3^k − 1)/2
  mpz_class lower_bound;   // C(k, 3)
};

/// Throws InvalidParam for k < 1.
BoundValues bound_values(int k);

namespace serial {

InductiveResult inductive_witnessing(const Tangle& tangle, const SeparationSystem& full_ordered, int k,
                                     const InductiveOptions& options = {});

}  // namespace serial

}  // namespace tanglekit
