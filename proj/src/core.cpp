#include "tanglekit/core.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_set>

#include <omp.h>

#include "tanglekit/error.hpp"
#include "tanglekit/parallel.hpp"

namespace tanglekit {

int thread_count() noexcept { return omp_get_max_threads(); }

void set_thread_count(int threads) noexcept {
  if (threads >= 1) omp_set_num_threads(threads);
}

GroundSet GroundSet::make(std::size_t size, std::vector<std::string> labels) {
  if (size == 0) throw Error(ErrorKind::InvalidParam, "ground set must contain at least one point");
  if (!labels.empty()) {
    if (labels.size() != size) {
      throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(size) + " labels, got " +
                                                 std::to_string(labels.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw Error(ErrorKind::InvalidParam, "duplicate label '" + l + "'");
    }
  }
  return GroundSet{size, std::move(labels)};
}

std::string GroundSet::label(std::size_t v) const {
  if (v < labels.size()) return labels[v];
  return std::to_string(v);
}

std::optional<std::size_t> GroundSet::find_label(const std::string& name) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return i;
  }
  return std::nullopt;
}

PointSet canonical_side(const PointSet& side) {
  PointSet other = side.complement();
  return other < side ? other : side;
}

std::optional<std::size_t> SeparationSystem::find(const PointSet& side) const {
  if (side.universe() != ground_.size) return std::nullopt;
  auto it = index_.find(canonical_side(side));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

struct SystemBuilder {
  static std::shared_ptr<SeparationSystem> empty(GroundSet ground) {
    auto sys = std::make_shared<SeparationSystem>();
    sys->ground_ = std::move(ground);
    return sys;
  }

  // Returns the stored index; `fresh` reports whether it was new.
  static std::size_t add(SeparationSystem& sys, PointSet canonical, bool& fresh) {
    auto [it, inserted] = sys.index_.try_emplace(canonical, sys.separations_.size());
    fresh = inserted;
    if (inserted) sys.separations_.push_back(std::move(canonical));
    return it->second;
  }

  static void set_orders(SeparationSystem& sys, std::optional<std::vector<int>> orders) {
    sys.orders_ = std::move(orders);
  }
};

BuiltSystem make_system(GroundSet ground, std::span<const PointSet> sides,
                        std::optional<std::vector<int>> orders) {
  if (orders && orders->size() != sides.size()) {
    throw Error(ErrorKind::LengthMismatch, "order list does not align with the separations");
  }
  const std::size_t n = ground.size;
  auto sys = SystemBuilder::empty(std::move(ground));
  BuiltSystem out;
  out.mapping.reserve(sides.size());
  std::vector<int> kept_orders;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const PointSet& side = sides[i];
    if (side.universe() != n) {
      throw Error(ErrorKind::IndexOutOfRange, "separation " + std::to_string(i) +
                                                  " is over a universe of " +
                                                  std::to_string(side.universe()) + " points, expected " +
                                                  std::to_string(n));
    }
    if (side.empty() || side.is_full()) {
      throw Error(ErrorKind::TrivialSeparation, "separation " + std::to_string(i) + " is {∅, V}");
    }
    if (orders && (*orders)[i] < 0) {
      throw Error(ErrorKind::InvalidParam, "order values must be non-negative");
    }
    bool fresh = false;
    out.mapping.push_back(SystemBuilder::add(*sys, canonical_side(side), fresh));
    if (fresh && orders) kept_orders.push_back((*orders)[i]);
  }
  if (orders) SystemBuilder::set_orders(*sys, std::move(kept_orders));
  out.system = std::move(sys);
  return out;
}

SystemPtr with_orders(const SeparationSystem& system, std::vector<int> orders) {
  if (orders.size() != system.size()) {
    throw Error(ErrorKind::LengthMismatch, "order list does not align with the separations");
  }
  for (int o : orders) {
    if (o < 0) throw Error(ErrorKind::InvalidParam, "order values must be non-negative");
  }
  auto sys = std::make_shared<SeparationSystem>(system);
  SystemBuilder::set_orders(*sys, std::move(orders));
  return sys;
}

SystemPtr all_separations(GroundSet ground, std::size_t max_ground) {
  const std::size_t n = ground.size;
  if (n > max_ground || n > 62) {
    throw Error(ErrorKind::LimitExceeded, "all separations of " + std::to_string(n) +
                                              " points requested; limit is " +
                                              std::to_string(std::min<std::size_t>(max_ground, 62)));
  }
  auto sys = SystemBuilder::empty(std::move(ground));
  if (n < 2) return sys;
  const std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
  for (std::uint64_t mask = 1; mask <= count; ++mask) {
    bool fresh = false;
    SystemBuilder::add(*sys, PointSet::from_word(n, mask), fresh);
  }
  return sys;
}

std::vector<PointSet> big_sides_of(const SeparationSystem& system, const Orientation& orientation) {
  if (orientation.size() != system.size()) {
    throw Error(ErrorKind::LengthMismatch, "orientation has " + std::to_string(orientation.size()) +
                                               " entries for " + std::to_string(system.size()) +
                                               " separations");
  }
  std::vector<PointSet> sides;
  sides.reserve(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    sides.push_back(orientation[i] ? system.separation(i) : system.separation(i).complement());
  }
  return sides;
}

std::vector<std::size_t> minimal_indices(std::span<const PointSet> sides) {
  std::vector<std::size_t> order(sides.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> counts(sides.size());
  for (std::size_t i = 0; i < sides.size(); ++i) counts[i] = sides[i].count();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
  // A side is minimal iff no kept minimal side lies inside it: any subset
  // chain bottoms out at a minimal element already seen.
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return sides[k].is_subset_of(sides[idx]);
    });
    if (!dominated) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

namespace {

// First violating index set among subsets of {i, j, l} with leading index i,
// in lexicographic order (pairs precede their extensions).
std::optional<std::vector<std::size_t>> first_violation_from(std::span<const PointSet> sides,
                                                             std::size_t i) {
  const std::size_t m = sides.size();
  for (std::size_t j = i + 1; j < m; ++j) {
    if (!sides[i].intersects(sides[j])) return std::vector<std::size_t>{i, j};
    for (std::size_t l = j + 1; l < m; ++l) {
      if (!PointSet::meet(sides[i], sides[j], sides[l])) return std::vector<std::size_t>{i, j, l};
    }
  }
  return std::nullopt;
}

bool minimal_sides_meet(std::span<const PointSet> sides) {
  const std::vector<std::size_t> mins = minimal_indices(sides);
  const auto count = static_cast<std::ptrdiff_t>(mins.size());
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < count; ++a) {
    if (!ok.load(std::memory_order_relaxed)) continue;
    const PointSet& x = sides[mins[a]];
    for (std::size_t b = static_cast<std::size_t>(a) + 1; b < mins.size() && ok; ++b) {
      const PointSet& y = sides[mins[b]];
      if (!x.intersects(y)) {
        ok = false;
        break;
      }
      for (std::size_t c = b + 1; c < mins.size(); ++c) {
        if (!PointSet::meet(x, y, sides[mins[c]])) {
          ok = false;
          break;
        }
      }
    }
  }
  return ok;
}

}  // namespace

ConsistencyResult is_consistent(const SeparationSystem& system, const Orientation& orientation) {
  const std::vector<PointSet> sides = big_sides_of(system, orientation);
  // Supersets of meeting sides meet, so the minimal sides decide consistency.
  if (minimal_sides_meet(sides)) return {};

  const auto m = static_cast<std::ptrdiff_t>(sides.size());
  std::vector<std::optional<std::vector<std::size_t>>> found(sides.size());
  std::atomic<std::ptrdiff_t> best{m};
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    if (i > best.load(std::memory_order_relaxed)) continue;
    found[i] = first_violation_from(sides, static_cast<std::size_t>(i));
    if (found[i]) {
      std::ptrdiff_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  }
  for (auto& f : found) {
    if (f) return {false, std::move(*f)};
  }
  throw Error(ErrorKind::InternalError, "minimal sides fail to meet but no violation was found");
}

namespace serial {

ConsistencyResult is_consistent(const SeparationSystem& system, const Orientation& orientation) {
  const std::vector<PointSet> sides = big_sides_of(system, orientation);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (auto v = first_violation_from(sides, i)) return {false, std::move(*v)};
  }
  return {};
}

}  // namespace serial

struct Tangle::MinimalCache {
  std::once_flag once;
  std::vector<std::size_t> indices;
};

Tangle::Tangle(SystemPtr system, Orientation orientation)
    : system_(std::move(system)),
      orientation_(std::move(orientation)),
      minimal_(std::make_shared<MinimalCache>()) {
  big_sides_ = big_sides_of(*system_, orientation_);
}

Tangle Tangle::make(SystemPtr system, Orientation orientation) {
  if (!system) throw Error(ErrorKind::InvalidParam, "tangle needs a separation system");
  auto check = is_consistent(*system, orientation);
  if (!check.consistent) {
    std::string idx;
    for (std::size_t i : check.violation) idx += (idx.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorKind::NotATangle, "big sides {" + idx + "} have empty intersection");
  }
  return Tangle(std::move(system), std::move(orientation));
}

Tangle Tangle::assume_consistent(SystemPtr system, Orientation orientation) {
  if (!system) throw Error(ErrorKind::InvalidParam, "tangle needs a separation system");
  return Tangle(std::move(system), std::move(orientation));
}

const PointSet& Tangle::big_side(std::size_t sep_index) const {
  if (sep_index >= big_sides_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "separation index " + std::to_string(sep_index) +
                                                " out of range (" + std::to_string(big_sides_.size()) +
                                                " separations)");
  }
  return big_sides_[sep_index];
}

const std::vector<std::size_t>& Tangle::minimal_indices() const {
  std::call_once(minimal_->once, [this] { minimal_->indices = tanglekit::minimal_indices(big_sides_); });
  return minimal_->indices;
}

std::vector<PointSet> Tangle::minimal_sides() const {
  std::vector<PointSet> out;
  for (std::size_t i : minimal_indices()) out.push_back(big_sides_[i]);
  return out;
}

std::vector<PointSet> minimal_elements(const Tangle& tangle) { return tangle.minimal_sides(); }

Tangle principal_tangle(SystemPtr system, std::size_t v) {
  if (!system) throw Error(ErrorKind::InvalidParam, "tangle needs a separation system");
  if (v >= system->ground_size()) {
    throw Error(ErrorKind::IndexOutOfRange, "point " + std::to_string(v) + " outside ground set");
  }
  Orientation o(system->size());
  for (std::size_t i = 0; i < system->size(); ++i) o[i] = system->separation(i).test(v);
  return Tangle::assume_consistent(std::move(system), std::move(o));
}

Corners corners(const PointSet& a, const PointSet& b) {
  if (a.universe() != b.universe()) {
    throw Error(ErrorKind::GroundMismatch, "sides come from ground sets of sizes " +
                                               std::to_string(a.universe()) + " and " +
                                               std::to_string(b.universe()));
  }
  auto nontrivial = [](PointSet s) -> std::optional<PointSet> {
    if (s.empty() || s.is_full()) return std::nullopt;
    return s;
  };
  return {nontrivial(a & b), nontrivial(a | b)};
}

namespace {

class TangleSearch {
 public:
  TangleSearch(const SeparationSystem& system, std::size_t max_results)
      : system_(system), max_results_(max_results), chosen_(system.size()), orientation_(system.size()) {}

  // Try to fix separation `depth` to `canonical`; false if it breaks consistency.
  bool place(std::size_t depth, bool canonical) {
    orientation_[depth] = canonical;
    chosen_[depth] = canonical ? system_.separation(depth) : system_.separation(depth).complement();
    const PointSet& side = chosen_[depth];
    for (std::size_t i = 0; i < depth; ++i) {
      if (!side.intersects(chosen_[i])) return false;
      for (std::size_t j = i + 1; j < depth; ++j) {
        if (!PointSet::meet(side, chosen_[i], chosen_[j])) return false;
      }
    }
    return true;
  }

  void run(std::size_t depth, std::vector<Orientation>& out) {
    if (out.size() >= max_results_) return;
    if (depth == system_.size()) {
      out.push_back(orientation_);
      return;
    }
    for (bool canonical : {true, false}) {
      if (place(depth, canonical)) run(depth + 1, out);
      if (out.size() >= max_results_) return;
    }
  }

 private:
  const SeparationSystem& system_;
  std::size_t max_results_;
  std::vector<PointSet> chosen_;
  Orientation orientation_;
};

std::vector<Tangle> wrap(const SystemPtr& system, std::vector<Orientation>&& found) {
  std::vector<Tangle> out;
  out.reserve(found.size());
  for (auto& o : found) out.push_back(Tangle::assume_consistent(system, std::move(o)));
  return out;
}

void check_enumeration_limit(const SystemPtr& system, const EnumerateOptions& options) {
  if (!system) throw Error(ErrorKind::InvalidParam, "null separation system");
  if (system->size() > options.max_separations) {
    throw Error(ErrorKind::LimitExceeded, std::to_string(system->size()) +
                                              " separations exceed the enumeration limit of " +
                                              std::to_string(options.max_separations));
  }
}

}  // namespace

namespace serial {

std::vector<Tangle> enumerate_tangles(const SystemPtr& system, const EnumerateOptions& options) {
  check_enumeration_limit(system, options);
  std::vector<Orientation> found;
  TangleSearch search(*system, options.max_results);
  search.run(0, found);
  return wrap(system, std::move(found));
}

}  // namespace serial

std::vector<Tangle> enumerate_tangles(const SystemPtr& system, const EnumerateOptions& options) {
  check_enumeration_limit(system, options);
  const std::size_t m = system->size();
  // Early-exit requests and tiny systems gain nothing from splitting.
  if (options.max_results != std::numeric_limits<std::size_t>::max() || m < 8 || thread_count() == 1) {
    return serial::enumerate_tangles(system, options);
  }
  const std::size_t prefix = std::min<std::size_t>(m, 8);
  const auto tasks = static_cast<std::ptrdiff_t>(std::size_t{1} << prefix);
  std::vector<std::vector<Orientation>> buckets(static_cast<std::size_t>(tasks));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    TangleSearch search(*system, options.max_results);
    bool ok = true;
    // Task t encodes the prefix with bit value 0 meaning "canonical side",
    // so increasing t follows the sequential DFS order.
    for (std::size_t d = 0; d < prefix && ok; ++d) {
      const bool canonical = ((static_cast<std::size_t>(t) >> (prefix - 1 - d)) & 1U) == 0;
      ok = search.place(d, canonical);
    }
    if (ok) search.run(prefix, buckets[static_cast<std::size_t>(t)]);
  }
  std::vector<Orientation> found;
  for (auto& b : buckets) {
    for (auto& o : b) found.push_back(std::move(o));
  }
  return wrap(system, std::move(found));
}

}  // namespace tanglekit
