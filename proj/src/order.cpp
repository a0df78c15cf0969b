#include "tanglekit/order.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "tanglekit/error.hpp"

namespace tanglekit {

OrderAssignment min_side_order(const SystemPtr& system) {
  if (!system) throw Error(ErrorKind::InvalidParam, "null separation system");
  OrderAssignment out{system, {}};
  out.values.reserve(system->size());
  const std::size_t n = system->ground_size();
  for (const PointSet& s : system->separations()) {
    const std::size_t c = s.count();
    out.values.push_back(static_cast<int>(std::min(c, n - c)));
  }
  return out;
}

namespace {

const std::vector<int>& require_orders(const SeparationSystem& system) {
  if (!system.has_orders()) throw Error(ErrorKind::MissingOrder, "separation system has no order values");
  return *system.orders();
}

class PairChecker {
 public:
  PairChecker(const SeparationSystem& system, Closure closure)
      : system_(system), orders_(require_orders(system)), closure_(closure) {
    if (closure == Closure::Full) {
      const std::size_t n = system.ground_size();
      const bool full = n < 63 && system.size() == (std::size_t{1} << (n - 1)) - 1;
      if (!full) {
        throw Error(ErrorKind::MissingOrder,
                    "full submodularity check needs every nontrivial separation of the ground set");
      }
    }
  }

  [[nodiscard]] std::size_t side_count() const { return 2 * system_.size(); }

  [[nodiscard]] PointSet side(std::size_t s) const {
    const PointSet& p = system_.separation(s / 2);
    return s % 2 == 0 ? p : p.complement();
  }

  // Order of a corner; nullopt when the corner has no order available.
  [[nodiscard]] std::optional<int> corner_order(const PointSet& c) const {
    if (c.empty() || c.is_full()) return 0;
    auto idx = system_.find(c);
    if (!idx) {
      if (closure_ == Closure::Full) {
        throw Error(ErrorKind::MissingOrder, "corner has no order in the system");
      }
      return std::nullopt;
    }
    return orders_[*idx];
  }

  struct Scan {
    std::optional<std::size_t> violating_b;
    std::size_t checked = 0;
    std::size_t skipped = 0;
  };

  // Pairs (a, b) with b > a, stopping at the first violation.
  [[nodiscard]] Scan scan_from(std::size_t a) const {
    Scan out;
    const PointSet A = side(a);
    const int fa = orders_[a / 2];
    for (std::size_t b = a + 1; b < side_count(); ++b) {
      const PointSet B = side(b);
      const auto meet = corner_order(A & B);
      const auto join = corner_order(A | B);
      if (!meet || !join) {
        ++out.skipped;
        continue;
      }
      ++out.checked;
      if (*meet + *join > fa + orders_[b / 2]) {
        out.violating_b = b;
        return out;
      }
    }
    return out;
  }

 private:
  const SeparationSystem& system_;
  const std::vector<int>& orders_;
  Closure closure_;
};

}  // namespace

SubmodularityResult is_submodular(const SeparationSystem& system, Closure closure) {
  const PairChecker checker(system, closure);
  const auto sides = static_cast<std::ptrdiff_t>(checker.side_count());
  std::vector<PairChecker::Scan> scans(static_cast<std::size_t>(sides));
  std::atomic<std::ptrdiff_t> best{sides};
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < sides; ++a) {
    if (a > best.load(std::memory_order_relaxed)) continue;
    scans[a] = checker.scan_from(static_cast<std::size_t>(a));
    if (scans[a].violating_b) {
      std::ptrdiff_t cur = best.load();
      while (a < cur && !best.compare_exchange_weak(cur, a)) {
      }
    }
  }
  // Tallies cover the prefix a sequential scan would have visited.
  SubmodularityResult out;
  for (std::size_t a = 0; a < scans.size(); ++a) {
    out.pairs_checked += scans[a].checked;
    out.pairs_skipped += scans[a].skipped;
    if (scans[a].violating_b) {
      out.submodular = false;
      out.violation = std::make_pair(checker.side(a), checker.side(*scans[a].violating_b));
      break;
    }
  }
  return out;
}

namespace serial {

SubmodularityResult is_submodular(const SeparationSystem& system, Closure closure) {
  const PairChecker checker(system, closure);
  SubmodularityResult out;
  for (std::size_t a = 0; a < checker.side_count(); ++a) {
    const auto scan = checker.scan_from(a);
    out.pairs_checked += scan.checked;
    out.pairs_skipped += scan.skipped;
    if (scan.violating_b) {
      out.submodular = false;
      out.violation = std::make_pair(checker.side(a), checker.side(*scan.violating_b));
      break;
    }
  }
  return out;
}

}  // namespace serial

Restriction restrict_sk(const SeparationSystem& system, int k) {
  const auto& orders = require_orders(system);
  std::vector<PointSet> sides;
  std::vector<int> kept_orders;
  Restriction out;
  for (std::size_t i = 0; i < system.size(); ++i) {
    if (orders[i] < k) {
      sides.push_back(system.separation(i));
      kept_orders.push_back(orders[i]);
      out.kept.push_back(i);
    }
  }
  out.system = make_system(system.ground(), sides, std::move(kept_orders)).system;
  return out;
}

bool corner_closure_check(const SeparationSystem& system, int k) {
  const auto& orders = require_orders(system);
  std::vector<PointSet> sides;
  for (std::size_t i = 0; i < system.size(); ++i) {
    if (orders[i] < k) {
      sides.push_back(system.separation(i));
      sides.push_back(system.separation(i).complement());
    }
  }
  auto present = [&](const PointSet& c) {
    if (c.empty() || c.is_full()) return true;
    auto idx = system.find(c);
    return idx && orders[*idx] < k;
  };
  const auto count = static_cast<std::ptrdiff_t>(sides.size());
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < count; ++a) {
    for (std::size_t b = static_cast<std::size_t>(a) + 1; b < sides.size() && ok.load(std::memory_order_relaxed);
         ++b) {
      if (!present(sides[a] & sides[b]) && !present(sides[a] | sides[b])) ok = false;
    }
  }
  return ok;
}

Extension extend_order(const Tangle& base, std::size_t max_ground) {
  const std::size_t n = base.ground_size();
  if (n > max_ground) {
    throw Error(ErrorKind::LimitExceeded, "extension enumerates all separations; " + std::to_string(n) +
                                              " points exceed the limit of " + std::to_string(max_ground));
  }
  auto check = is_consistent(base.system(), base.orientation());
  if (!check.consistent) throw Error(ErrorKind::NotATangle, "base orientation is inconsistent");

  Extension ext;
  ext.data.base_minimals = base.minimal_sides();
  const std::size_t k = ext.data.base_minimals.size();
  ext.k = static_cast<int>(k);
  ext.data.point_types.resize(n);
  for (std::size_t j = 0; j < k; ++j) {
    ext.data.base_minimals[j].for_each([&](std::size_t v) { ext.data.point_types[v].push_back(j); });
  }

  SystemPtr all = all_separations(base.system().ground(), max_ground);
  const auto m = static_cast<std::ptrdiff_t>(all->size());
  std::vector<int> f(all->size());
  std::vector<signed char> toward(all->size(), -1);  // 1: stored side, 0: complement, -1: none
  ext.u_sets.resize(all->size());
  std::atomic<bool> both{false};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const PointSet& p = all->separation(static_cast<std::size_t>(i));
    const PointSet q = p.complement();
    std::vector<std::size_t> up, uq;
    for (std::size_t j = 0; j < k; ++j) {
      if (ext.data.base_minimals[j].is_subset_of(p)) up.push_back(j);
      if (ext.data.base_minimals[j].is_subset_of(q)) uq.push_back(j);
    }
    if (!up.empty() && !uq.empty()) both = true;
    // Equal sizes fall to the stored (numerically smaller) side.
    const bool use_p = up.size() >= uq.size();
    auto& u = use_p ? up : uq;
    f[i] = static_cast<int>(k - u.size());
    if (!u.empty()) toward[i] = use_p ? 1 : 0;
    ext.u_sets[i] = std::move(u);
  }
  if (both) {
    throw Error(ErrorKind::InternalError, "a separation has base minimal sides on both of its sides");
  }
  ext.full = with_orders(*all, f);
  ext.sk = restrict_sk(*ext.full, ext.k);
  Orientation o;
  o.reserve(ext.sk.kept.size());
  for (std::size_t idx : ext.sk.kept) o.push_back(toward[idx] == 1);
  ext.tau_star = Tangle::make(ext.sk.system, std::move(o));
  return ext;
}

namespace {

// Backtracking over the free separations; `chosen` holds the big sides fixed
// so far and is consistent on entry.
class FakeSearch {
 public:
  explicit FakeSearch(std::vector<PointSet> free) : free_(std::move(free)) {}

  bool fits(const std::vector<PointSet>& chosen, const PointSet& side) const {
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (!side.intersects(chosen[i])) return false;
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        if (!PointSet::meet(side, chosen[i], chosen[j])) return false;
      }
    }
    return true;
  }

  bool extend(std::vector<PointSet>& chosen, std::size_t depth) const {
    if (depth == free_.size()) return true;
    for (const PointSet& side : {free_[depth], free_[depth].complement()}) {
      if (!fits(chosen, side)) continue;
      chosen.push_back(side);
      if (extend(chosen, depth + 1)) return true;
      chosen.pop_back();
    }
    return false;
  }

 private:
  std::vector<PointSet> free_;
};

}  // namespace

bool is_fake(const Tangle& tangle, const SeparationSystem& full_ordered, int k, std::size_t max_ground) {
  const std::size_t n = tangle.ground_size();
  if (n > max_ground) {
    throw Error(ErrorKind::LimitExceeded, std::to_string(n) + " points exceed the fake-tangle search limit of " +
                                              std::to_string(max_ground));
  }
  if (full_ordered.ground_size() != n) {
    throw Error(ErrorKind::GroundMismatch, "tangle and order live on different ground sets");
  }
  const auto& orders = require_orders(full_ordered);
  if (!is_consistent(tangle.system(), tangle.orientation()).consistent) return true;

  std::vector<bool> fixed(full_ordered.size(), false);
  std::vector<PointSet> chosen;
  for (std::size_t i = 0; i < tangle.size(); ++i) {
    auto idx = full_ordered.find(tangle.system().separation(i));
    if (!idx || orders[*idx] >= k) {
      throw Error(ErrorKind::InvalidParam, "separation " + std::to_string(i) + " of the tangle is not in S_k");
    }
    fixed[*idx] = true;
    chosen.push_back(tangle.big_side(i));
  }
  std::vector<PointSet> free;
  for (std::size_t i = 0; i < full_ordered.size(); ++i) {
    if (!fixed[i] && orders[i] < k) free.push_back(full_ordered.separation(i));
  }
  return !FakeSearch(std::move(free)).extend(chosen, 0);
}

}  // namespace tanglekit
