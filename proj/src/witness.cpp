#include "tanglekit/witness.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>

#include "omp_util.hpp"
#include "tanglekit/error.hpp"
#include "tanglekit/order.hpp"

namespace tanglekit {

std::string to_string(WitnessMethod method) {
  switch (method) {
    case WitnessMethod::Exact: return "exact";
    case WitnessMethod::Greedy: return "greedy";
    case WitnessMethod::Inductive: return "inductive";
  }
  return "unknown";
}

namespace {

// Visits subsets of size 1..3 of `sides` in lexicographic order; stops when
// `visit` returns false. Returns the stopping subset, if any.
template <class Visit>
std::optional<std::vector<std::size_t>> for_each_small_subset(std::span<const PointSet> sides, Visit&& visit) {
  const std::size_t m = sides.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!visit(sides[i])) return std::vector<std::size_t>{i};
    for (std::size_t j = i + 1; j < m; ++j) {
      const PointSet ij = sides[i] & sides[j];
      if (!visit(ij)) return std::vector<std::size_t>{i, j};
      for (std::size_t l = j + 1; l < m; ++l) {
        if (!visit(ij & sides[l])) return std::vector<std::size_t>{i, j, l};
      }
    }
  }
  return std::nullopt;
}

void check_universe(const Tangle& tangle, const PointSet& s) {
  if (s.universe() != tangle.ground_size()) {
    throw Error(ErrorKind::GroundMismatch, "point set over " + std::to_string(s.universe()) +
                                               " points for a ground set of " +
                                               std::to_string(tangle.ground_size()));
  }
}

std::vector<PointSet> family_or_throw(const Tangle& tangle) {
  std::vector<PointSet> family = witness_family(tangle);
  for (const PointSet& s : family) {
    if (s.empty()) throw Error(ErrorKind::NotATangle, "minimal big sides with empty intersection");
  }
  return family;
}

}  // namespace

std::vector<PointSet> witness_family(const Tangle& tangle) {
  const std::vector<PointSet> mins = tangle.minimal_sides();
  std::vector<PointSet> family;
  for_each_small_subset(mins, [&](const PointSet& s) {
    family.push_back(s);
    return true;
  });
  return family;
}

WitnessCheck is_witnessing(const Tangle& tangle, const PointSet& w) {
  check_universe(tangle, w);
  const std::vector<PointSet> mins = tangle.minimal_sides();
  auto miss = for_each_small_subset(mins, [&](const PointSet& s) { return s.intersects(w); });
  if (!miss) return {};
  WitnessCheck out{false, {}};
  const auto& idx = tangle.minimal_indices();
  for (std::size_t t : *miss) out.unwitnessed.push_back(idx[t]);
  return out;
}

WitnessCheck is_witnessing_direct(const Tangle& tangle, const PointSet& w) {
  check_universe(tangle, w);
  auto miss = for_each_small_subset(tangle.big_sides(), [&](const PointSet& s) { return s.intersects(w); });
  if (!miss) return {};
  return {false, std::move(*miss)};
}

bool is_cover(const Tangle& tangle, const PointSet& u) {
  check_universe(tangle, u);
  for (std::size_t i : tangle.minimal_indices()) {
    if (!tangle.big_side(i).intersects(u)) return false;
  }
  return true;
}

PointSet min_cover(const Tangle& tangle, const HittingOptions& options) {
  return minimum_hitting_set(tangle.ground_size(), tangle.minimal_sides(), options);
}

WitnessReport min_witnessing(const Tangle& tangle, const HittingOptions& options) {
  const std::vector<PointSet> family = family_or_throw(tangle);
  WitnessReport out;
  out.set = minimum_hitting_set(tangle.ground_size(), family, options);
  out.method = WitnessMethod::Exact;
  out.certified_minimal = true;
  out.triple_count = family.size();
  if (!is_witnessing(tangle, out.set).witnessing) {
    throw Error(ErrorKind::InternalError, "exact witnessing set failed verification");
  }
  return out;
}

WitnessReport greedy_witnessing(const Tangle& tangle) {
  const std::vector<PointSet> family = family_or_throw(tangle);
  WitnessReport out;
  out.set = greedy_hitting_set(tangle.ground_size(), family);
  out.method = WitnessMethod::Greedy;
  out.triple_count = family.size();
  if (!is_witnessing(tangle, out.set).witnessing) {
    throw Error(ErrorKind::InternalError, "greedy witnessing set failed verification");
  }
  return out;
}

namespace {

using Parts = std::array<PointSet, 3>;

class Inductive {
 public:
  Inductive(const Tangle& tangle, const SeparationSystem& full, int k, const InductiveOptions& options)
      : tangle_(tangle), k_(k), options_(options) {
    if (k < 1) throw Error(ErrorKind::InvalidParam, "k must be at least 1");
    if (k > options.max_k) {
      throw Error(ErrorKind::LimitExceeded, "inductive construction limited to k <= " +
                                                std::to_string(options.max_k));
    }
    if (!full.has_orders()) throw Error(ErrorKind::MissingOrder, "inductive construction needs an order");
    if (full.ground_size() != tangle.ground_size()) {
      throw Error(ErrorKind::GroundMismatch, "tangle and order live on different ground sets");
    }
    const auto sub = is_submodular(full, Closure::Full);
    if (!sub.submodular) throw Error(ErrorKind::OrderNotSubmodular, "order function is not submodular");

    const auto& f = *full.orders();
    std::size_t below = 0;
    for (int o : f) below += o < k ? 1 : 0;
    if (below != tangle.size()) {
      throw Error(ErrorKind::NotKTangle, "tangle does not orient exactly the separations of order < k");
    }
    orders_.reserve(tangle.size());
    for (std::size_t i = 0; i < tangle.size(); ++i) {
      auto idx = full.find(tangle.system().separation(i));
      if (!idx || f[*idx] >= k) {
        throw Error(ErrorKind::NotKTangle, "separation " + std::to_string(i) + " is not of order < k");
      }
      orders_.push_back(f[*idx]);
    }
    if (!is_consistent(tangle.system(), tangle.orientation()).consistent) {
      throw Error(ErrorKind::NotKTangle, "orientation is inconsistent");
    }
  }

  // B_{X,j}: among big sides avoiding `part`, the ⊆-minimal one of least order.
  std::optional<PointSet> side_avoiding(const PointSet& part) const {
    std::optional<int> best;
    std::vector<const PointSet*> cands;
    const auto sides = tangle_.big_sides();
    for (std::size_t i = 0; i < sides.size(); ++i) {
      if (sides[i].intersects(part)) continue;
      if (!best || orders_[i] < *best) {
        best = orders_[i];
        cands.clear();
      }
      if (orders_[i] == *best) cands.push_back(&sides[i]);
    }
    if (cands.empty()) return std::nullopt;
    const PointSet* minimal = nullptr;
    for (const PointSet* c : cands) {
      const bool has_smaller = std::any_of(cands.begin(), cands.end(), [&](const PointSet* d) {
        return d != c && d->is_subset_of(*c);
      });
      if (has_smaller) continue;
      if (minimal) throw Error(ErrorKind::OrderNotSubmodular, "side avoiding a class part is not unique");
      minimal = c;
    }
    return *minimal;
  }

  // v_X, or nothing when some nonempty part is avoided by no big side.
  std::optional<std::size_t> class_point(const Parts& parts) const {
    PointSet meet = PointSet::full(tangle_.ground_size());
    for (const PointSet& part : parts) {
      if (part.empty()) continue;
      auto b = side_avoiding(part);
      if (!b) return std::nullopt;
      meet &= *b;
    }
    auto v = meet.first();
    if (!v) throw Error(ErrorKind::NotKTangle, "sides B_{X,j} have empty intersection");
    return v;
  }

  template <bool Parallel>
  InductiveResult run() const {
    InductiveResult out;
    out.base_cover = min_cover(tangle_, options_.cover);
    PointSet w = out.base_cover;

    std::vector<Parts> classes = initial_classes(w);
    for (int level = k_; level <= 3 * k_ - 3 && !classes.empty(); ++level) {
      std::vector<std::optional<std::size_t>> points(classes.size());
      auto body = [&](std::ptrdiff_t c) { points[c] = class_point(classes[c]); };
      if constexpr (Parallel) {
        detail::parallel_for(static_cast<std::ptrdiff_t>(classes.size()), body);
      } else {
        for (std::size_t c = 0; c < classes.size(); ++c) body(static_cast<std::ptrdiff_t>(c));
      }
      InductiveLevel record;
      record.level = level;
      record.witness_points = w;
      record.new_points = PointSet(tangle_.ground_size());
      std::set<Parts> next;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        if (points[c]) {
          record.new_points.set(*points[c]);
          for (std::size_t j = 0; j < 3; ++j) {
            Parts child = classes[c];
            child[j].set(*points[c]);
            next.insert(std::move(child));
          }
        }
        if (options_.keep_trace) record.partitions.push_back({classes[c], points[c]});
      }
      w |= record.new_points;
      if (options_.keep_trace) out.trace.push_back(std::move(record));
      classes.assign(next.begin(), next.end());
    }

    out.report.set = w;
    out.report.method = WitnessMethod::Inductive;
    out.report.triple_count = witness_family(tangle_).size();
    if (!is_witnessing(tangle_, w).witnessing) {
      throw Error(ErrorKind::InternalError, "inductive witnessing set failed verification");
    }
    if (mpz_class(static_cast<unsigned long>(w.count())) > bound_values(k_).first_bound) {
      throw Error(ErrorKind::InternalError, "inductive witnessing set exceeds its proven size bound");
    }
    return out;
  }

 private:
  // All ordered splits of `w` into three parts, in base-3 counting order.
  std::vector<Parts> initial_classes(const PointSet& w) const {
    const std::vector<std::size_t> pts = w.indices();
    std::size_t total = 1;
    for (std::size_t i = 0; i < pts.size(); ++i) total *= 3;
    std::vector<Parts> out;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
      Parts parts{PointSet(w.universe()), PointSet(w.universe()), PointSet(w.universe())};
      std::size_t c = code;
      for (std::size_t p : pts) {
        parts[c % 3].set(p);
        c /= 3;
      }
      out.push_back(std::move(parts));
    }
    return out;
  }

  const Tangle& tangle_;
  int k_;
  InductiveOptions options_;
  std::vector<int> orders_;
};

}  // namespace

InductiveResult inductive_witnessing(const Tangle& tangle, const SeparationSystem& full_ordered, int k,
                                     const InductiveOptions& options) {
  return Inductive(tangle, full_ordered, k, options).run<true>();
}

namespace serial {

InductiveResult inductive_witnessing(const Tangle& tangle, const SeparationSystem& full_ordered, int k,
                                     const InductiveOptions& options) {
  return Inductive(tangle, full_ordered, k, options).run<false>();
}

}  // namespace serial

IntersectionChain max_intersection_chain(const Tangle& tangle, std::size_t max_minimals) {
  const auto& idx = tangle.minimal_indices();
  if (idx.size() > max_minimals) {
    throw Error(ErrorKind::LimitExceeded, std::to_string(idx.size()) + " minimal sides exceed the chain limit of " +
                                              std::to_string(max_minimals));
  }
  struct Best {
    std::size_t length = 0;
    std::optional<std::size_t> next;  // position in idx
  };
  std::unordered_map<PointSet, Best, PointSetHash> memo;
  // Longest continuation from running intersection `cur`.
  auto solve = [&](auto&& self, const PointSet& cur) -> std::size_t {
    if (auto it = memo.find(cur); it != memo.end()) return it->second.length;
    Best best;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const PointSet& a = tangle.big_side(idx[t]);
      if (!cur.intersects(a)) continue;
      const std::size_t len = 1 + self(self, cur - a);
      if (len > best.length) best = {len, t};
    }
    memo[cur] = best;
    return best.length;
  };
  PointSet cur = PointSet::full(tangle.ground_size());
  solve(solve, cur);
  IntersectionChain chain;
  while (true) {
    const Best& b = memo.at(cur);
    if (!b.next) break;
    cur -= tangle.big_side(idx[*b.next]);
    chain.sequence.push_back(idx[*b.next]);
    chain.intersections.push_back(cur);
  }
  return chain;
}

BoundValues bound_values(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParam, "k must be at least 1");
  BoundValues out;
  out.k = k;
  auto pow3 = [](unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 3, e);
    return r;
  };
  const auto uk = static_cast<unsigned long>(k);
  out.first_bound = (pow3(3 * uk - 2) - pow3(uk)) / 2 + k;
  out.second_bound = (pow3(uk) - 1) / 2;
  out.lower_bound = k >= 3 ? mpz_class(uk * (uk - 1) * (uk - 2) / 6) : mpz_class(0);

  // θ(i+1) = θ(i) + 3^θ(i); θ(4) = 85 + 3^85 is the last value worth storing.
  const int target = 3 * k - 2;
  if (target <= 4) {
    mpz_class theta = 0;
    for (int i = 0; i < target; ++i) theta += pow3(theta.get_ui());
    out.gs_theta = theta;
    out.gs_theta_text = theta.get_str();
  } else {
    out.gs_theta_text = "theta(" + std::to_string(target) + ") > 3^(3^85) (not representable)";
  }
  return out;
}

}  // namespace tanglekit
