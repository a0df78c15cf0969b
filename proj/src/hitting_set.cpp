#include "tanglekit/hitting_set.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <optional>
#include <string>

#include "tanglekit/error.hpp"

namespace tanglekit {

std::vector<PointSet> reduce_family(std::span<const PointSet> family) {
  std::vector<PointSet> sorted(family.begin(), family.end());
  std::sort(sorted.begin(), sorted.end(), [](const PointSet& a, const PointSet& b) {
    const auto ca = a.count();
    const auto cb = b.count();
    return ca != cb ? ca < cb : a < b;
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<PointSet> kept;
  for (const PointSet& s : sorted) {
    const bool dominated =
        std::any_of(kept.begin(), kept.end(), [&](const PointSet& k) { return k.is_subset_of(s); });
    if (!dominated) kept.push_back(s);
  }
  return kept;
}

namespace {

class Solver {
 public:
  Solver(std::size_t universe, std::span<const PointSet> family, const HittingOptions& options)
      : universe_(universe), options_(options) {
    for (const PointSet& s : family) {
      if (s.universe() != universe) throw Error(ErrorKind::GroundMismatch, "family member over another universe");
      if (s.empty()) throw Error(ErrorKind::InvalidParam, "an empty set cannot be hit");
    }
    family_ = reduce_family(family);
    if (family_.size() > options.max_family) {
      throw Error(ErrorKind::LimitExceeded, "hitting-set family of " + std::to_string(family_.size()) +
                                                " minimal members exceeds the limit of " +
                                                std::to_string(options.max_family));
    }
  }

  [[nodiscard]] const std::vector<PointSet>& family() const { return family_; }

  // Can `chosen` be completed with at most `budget` points from `allowed`?
  bool feasible(const PointSet& chosen, std::size_t budget, const PointSet& allowed) const {
    count_node();
    std::vector<PointSet> open;
    for (const PointSet& s : family_) {
      if (s.intersects(chosen)) continue;
      PointSet part = s & allowed;
      if (part.empty()) return false;
      open.push_back(std::move(part));
    }
    if (open.empty()) return true;
    if (budget == 0) return false;
    std::sort(open.begin(), open.end(),
              [](const PointSet& a, const PointSet& b) { return a.count() < b.count(); });
    // Pairwise-disjoint open members each need their own point.
    PointSet used(universe_);
    std::size_t packing = 0;
    for (const PointSet& s : open) {
      if (!s.intersects(used)) {
        used |= s;
        if (++packing > budget) return false;
      }
    }
    PointSet remaining = allowed;
    bool found = false;
    open.front().for_each([&](std::size_t v) {
      if (found) return;
      PointSet next = chosen;
      next.set(v);
      if (feasible(next, budget - 1, remaining)) found = true;
      // Solutions containing v were covered by this branch.
      remaining.reset(v);
    });
    return found;
  }

  std::size_t minimum_size() const {
    const PointSet none(universe_);
    const PointSet all = PointSet::full(universe_);
    for (std::size_t t = 0;; ++t) {
      if (feasible(none, t, all)) return t;
    }
  }

  // Points strictly above v.
  PointSet above(std::size_t v) const {
    PointSet s = PointSet::full(universe_);
    for (std::size_t i = 0; i <= v; ++i) s.reset(i);
    return s;
  }

  template <bool Parallel>
  PointSet lex_min(std::size_t size) const {
    PointSet chosen(universe_);
    std::optional<std::size_t> last;
    for (std::size_t step = 0; step < size; ++step) {
      const std::size_t lo = last ? *last + 1 : 0;
      const std::size_t budget = size - step - 1;
      auto probe = [&](std::size_t v) {
        PointSet next = chosen;
        next.set(v);
        return feasible(next, budget, above(v));
      };
      std::size_t pick = universe_;
      if constexpr (Parallel) {
        std::atomic<std::size_t> best{universe_};
        std::exception_ptr failure;
        const auto hi = static_cast<std::ptrdiff_t>(universe_);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t v = static_cast<std::ptrdiff_t>(lo); v < hi; ++v) {
          const auto uv = static_cast<std::size_t>(v);
          if (uv > best.load(std::memory_order_relaxed)) continue;
          try {
            if (probe(uv)) {
              std::size_t cur = best.load();
              while (uv < cur && !best.compare_exchange_weak(cur, uv)) {
              }
            }
          } catch (...) {
#pragma omp critical(tanglekit_probe_failure)
            if (!failure) failure = std::current_exception();
            best = 0;
          }
        }
        if (failure) std::rethrow_exception(failure);
        pick = best;
      } else {
        for (std::size_t v = lo; v < universe_; ++v) {
          if (probe(v)) {
            pick = v;
            break;
          }
        }
      }
      if (pick == universe_) throw Error(ErrorKind::InternalError, "lex-min reconstruction lost feasibility");
      chosen.set(pick);
      last = pick;
    }
    return chosen;
  }

 private:
  void count_node() const {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) >= options_.max_nodes) {
      throw Error(ErrorKind::LimitExceeded, "hitting-set search exceeded " + std::to_string(options_.max_nodes) +
                                                " nodes");
    }
  }

  std::size_t universe_;
  HittingOptions options_;
  std::vector<PointSet> family_;
  mutable std::atomic<std::size_t> nodes_{0};
};

template <bool Parallel>
PointSet greedy(std::size_t universe, std::span<const PointSet> family) {
  for (const PointSet& s : family) {
    if (s.universe() != universe) throw Error(ErrorKind::GroundMismatch, "family member over another universe");
    if (s.empty()) throw Error(ErrorKind::InvalidParam, "an empty set cannot be hit");
  }
  std::vector<bool> hit(family.size(), false);
  std::size_t open = family.size();
  PointSet chosen(universe);
  const auto n = static_cast<std::ptrdiff_t>(universe);
  std::vector<std::size_t> gain(universe);
  while (open > 0) {
    auto count_for = [&](std::size_t v) {
      std::size_t g = 0;
      for (std::size_t i = 0; i < family.size(); ++i) {
        if (!hit[i] && family[i].test(v)) ++g;
      }
      return g;
    };
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t v = 0; v < n; ++v) gain[v] = count_for(static_cast<std::size_t>(v));
    } else {
      for (std::size_t v = 0; v < universe; ++v) gain[v] = count_for(v);
    }
    const auto best = static_cast<std::size_t>(std::max_element(gain.begin(), gain.end()) - gain.begin());
    chosen.set(best);
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (!hit[i] && family[i].test(best)) {
        hit[i] = true;
        --open;
      }
    }
  }
  return chosen;
}

}  // namespace

PointSet minimum_hitting_set(std::size_t universe, std::span<const PointSet> family,
                             const HittingOptions& options) {
  const Solver solver(universe, family, options);
  return solver.lex_min<true>(solver.minimum_size());
}

PointSet greedy_hitting_set(std::size_t universe, std::span<const PointSet> family) {
  return greedy<true>(universe, family);
}

namespace serial {

PointSet minimum_hitting_set(std::size_t universe, std::span<const PointSet> family,
                             const HittingOptions& options) {
  const Solver solver(universe, family, options);
  return solver.lex_min<false>(solver.minimum_size());
}

PointSet greedy_hitting_set(std::size_t universe, std::span<const PointSet> family) {
  return greedy<false>(universe, family);
}

}  // namespace serial

}  // namespace tanglekit
