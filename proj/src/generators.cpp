#include "tanglekit/generators.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "tanglekit/error.hpp"

namespace tanglekit {

const PointSet* InstanceBundle::designated(const std::string& name) const {
  for (const auto& [key, set] : designated_sets) {
    if (key == name) return &set;
  }
  return nullptr;
}

namespace {

// Calls f(indices) for every r-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_combination(std::size_t n, std::size_t r, F&& f) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::string join(const std::vector<std::size_t>& xs, std::size_t offset, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s += sep;
    s += std::to_string(xs[i] + offset);
  }
  return s;
}

// Orientation selecting `sides[i]` as big side for each stored separation.
Orientation orient_toward(const BuiltSystem& built, const std::vector<PointSet>& sides) {
  Orientation o(built.system->size());
  for (std::size_t i = 0; i < sides.size(); ++i) {
    o[built.mapping[i]] = built.system->separation(built.mapping[i]) == sides[i];
  }
  return o;
}

// Points of Z/n-based instances: `sets` tagged with their origin.
struct CyclicPoints {
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::string> labels;
  std::size_t w_count = 0;
};

InstanceBundle cyclic_bundle(std::size_t n, std::size_t w_size, std::size_t arc_len, const std::string& example) {
  CyclicPoints pts;
  for_each_combination(n, w_size, [&](const std::vector<std::size_t>& t) {
    pts.members.push_back(t);
    pts.labels.push_back("W:" + join(t, 0, ","));
  });
  pts.w_count = pts.members.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> arc;
    for (std::size_t i = 0; i < arc_len; ++i) arc.push_back((j + i) % n);
    pts.labels.push_back("G:" + join(arc, 0, ","));
    pts.members.push_back(std::move(arc));
  }
  const std::size_t size = pts.members.size();
  std::vector<PointSet> sides(n, PointSet(size));
  for (std::size_t v = 0; v < size; ++v) {
    for (std::size_t j : pts.members[v]) sides[j].set(v);
  }
  PointSet w(size), g(size);
  for (std::size_t v = 0; v < size; ++v) (v < pts.w_count ? w : g).set(v);

  BuiltSystem built = make_system(GroundSet::make(size, std::move(pts.labels)), sides);
  Tangle tangle = Tangle::make(built.system, orient_toward(built, sides));
  InstanceBundle b{built.system, std::move(tangle)};
  b.example = example;
  b.designated_sets = {{"W", w}, {"G", g}};
  b.params["n"] = static_cast<long long>(n);
  b.params["arc_len"] = static_cast<long long>(arc_len);
  return b;
}

}  // namespace

InstanceBundle gen_min_order(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParam, "k must be at least 1");
  if (k > 8) throw Error(ErrorKind::LimitExceeded, "minorder instances are limited to k <= 8");
  const std::size_t n = std::max<std::size_t>(3 * static_cast<std::size_t>(k) - 2, 2);
  const GroundSet ground = GroundSet::make(n);

  SystemPtr full;
  SystemPtr sk;
  if (k <= 6) {
    const OrderAssignment f = min_side_order(all_separations(ground));
    full = f.attach();
    sk = restrict_sk(*full, k).system;
  } else {
    std::vector<PointSet> sides;
    std::vector<int> orders;
    for (std::size_t r = 1; r < static_cast<std::size_t>(k); ++r) {
      for_each_combination(n, r, [&](const std::vector<std::size_t>& t) {
        sides.push_back(PointSet::from_indices(n, t));
        orders.push_back(static_cast<int>(r));
      });
    }
    sk = make_system(ground, sides, orders).system;
  }
  Orientation o(sk->size());
  for (std::size_t i = 0; i < sk->size(); ++i) o[i] = 2 * sk->separation(i).count() > n;
  // Small sides have at most k-1 points, so any three of them miss at most
  // 3k-3 < n points and the big sides always meet. The cubic check is skipped
  // because S_k has thousands of separations from k = 5 on.
  InstanceBundle b{sk, Tangle::assume_consistent(sk, std::move(o))};
  b.full_system = full;
  b.order = OrderAssignment{full ? full : sk, *(full ? full : sk)->orders()};
  b.order_function = "min-side";
  b.example = "minorder";
  b.params["k"] = k;
  b.params["n"] = static_cast<long long>(n);
  if (!full) b.flags.push_back("s_k_only");
  if (sk->size() == 0) b.flags.push_back("degenerate");
  return b;
}

InstanceBundle gen_triples(int k) {
  if (k < 4) throw Error(ErrorKind::InvalidParam, "triples instances need k >= 4");
  if (k > 12) throw Error(ErrorKind::LimitExceeded, "triples instances are limited to k <= 12");
  const auto uk = static_cast<std::size_t>(k);
  std::vector<std::vector<std::size_t>> points;
  std::vector<std::string> labels;
  for_each_combination(uk, 3, [&](const std::vector<std::size_t>& t) {
    points.push_back(t);
    labels.push_back(join(t, 1, k <= 9 ? "" : ","));
  });
  const std::size_t n = points.size();
  std::vector<PointSet> sides(uk, PointSet(n));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t j : points[v]) sides[j].set(v);
  }
  BuiltSystem built = make_system(GroundSet::make(n, std::move(labels)), sides);
  InstanceBundle b{built.system, Tangle::make(built.system, orient_toward(built, sides))};
  b.example = "triples";
  b.params["k"] = k;
  b.params["n"] = static_cast<long long>(n);
  return b;
}

InstanceBundle gen_arcs(int n, std::optional<int> arc_len) {
  if (n < 6 || n % 3 != 0) throw Error(ErrorKind::InvalidParam, "arcs instances need n >= 6 with 3 | n");
  if (n > 12) throw Error(ErrorKind::LimitExceeded, "arcs instances are limited to n <= 12");
  const int k = 2 * n / 3;
  const int len = arc_len.value_or(k);
  if (len < 1 || len >= n) throw Error(ErrorKind::InvalidParam, "arc length must lie in [1, n)");
  InstanceBundle b = cyclic_bundle(static_cast<std::size_t>(n), static_cast<std::size_t>(k - 1),
                                   static_cast<std::size_t>(len), "arcs");
  b.params["k"] = k;
  return b;
}

InstanceBundle gen_arcs_witness(int k, std::optional<int> arc_len) {
  if (k < 5 || (2 * k - 1) % 3 != 0) {
    throw Error(ErrorKind::InvalidParam, "arcs-witness instances need k >= 5 with 3 | (2k-1)");
  }
  if (k > 20) throw Error(ErrorKind::LimitExceeded, "arcs-witness instances are limited to k <= 20");
  const int n = 2 * k - 1;
  const int len = arc_len.value_or(k);
  if (len < 1 || len >= n) throw Error(ErrorKind::InvalidParam, "arc length must lie in [1, n)");
  InstanceBundle b = cyclic_bundle(static_cast<std::size_t>(n), 3, static_cast<std::size_t>(len), "arcs-witness");
  b.params["k"] = k;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t j = 0; j < un; ++j) {
    std::array<std::size_t, 3> t{j, (j + un / 3 + 1) % un, (j + 2 * un / 3 + 2) % un};
    std::sort(t.begin(), t.end());
    b.spread_triples.push_back(t);
  }
  return b;
}

InstanceBundle gen_random(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2 || n > 64) throw Error(ErrorKind::InvalidParam, "random instances need 2 <= n <= 64");
  if (m < 1 || m > 24) throw Error(ErrorKind::InvalidParam, "random instances need 1 <= m <= 24");
  const std::uint64_t available = n >= 25 ? ~std::uint64_t{0} : (std::uint64_t{1} << (n - 1)) - 1;
  const std::size_t target = static_cast<std::size_t>(std::min<std::uint64_t>(m, available));
  const GroundSet ground = GroundSet::make(n);
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  std::vector<PointSet> sides;
  std::vector<PointSet> seen;
  while (sides.size() < target) {
    const PointSet s = PointSet::from_word(n, rng() & mask);
    if (s.empty() || s.is_full()) continue;
    const PointSet c = canonical_side(s);
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    sides.push_back(s);
  }
  BuiltSystem built = make_system(ground, sides);
  EnumerateOptions opts;
  opts.max_results = 1;
  std::vector<Tangle> found = enumerate_tangles(built.system, opts);
  InstanceBundle b{built.system, found.empty() ? principal_tangle(built.system, 0) : std::move(found.front())};
  b.example = "random";
  b.params["n"] = static_cast<long long>(n);
  b.params["m"] = static_cast<long long>(m);
  b.params["seed"] = static_cast<long long>(seed);
  return b;
}

}  // namespace tanglekit
