#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tanglekit/error.hpp"
#include "tanglekit/generators.hpp"
#include "tanglekit/hitting_set.hpp"
#include "tanglekit/order.hpp"
#include "tanglekit/witness.hpp"

using namespace tanglekit;

namespace {

std::vector<PointSet> triple_intersections(const std::vector<PointSet>& big) {
  std::vector<PointSet> out;
  for (std::size_t i = 0; i < big.size(); ++i)
    for (std::size_t j = i; j < big.size(); ++j)
      for (std::size_t l = j; l < big.size(); ++l) out.push_back(big[i] & big[j] & big[l]);
  return out;
}

// Longest strictly shrinking chain of complement intersections, by trying
// every sequence of distinct minimal sides.
std::size_t oracle_chain(const std::vector<PointSet>& mins, std::size_t n) {
  std::size_t best = 0;
  std::vector<bool> used(mins.size(), false);
  std::function<void(const PointSet&, std::size_t)> go = [&](const PointSet& cur, std::size_t len) {
    best = std::max(best, len);
    for (std::size_t i = 0; i < mins.size(); ++i) {
      if (used[i]) continue;
      const PointSet next = cur & mins[i].complement();
      if (next == cur) continue;
      used[i] = true;
      go(next, len + 1);
      used[i] = false;
    }
  };
  go(PointSet::full(n), 0);
  return best;
}

}  // namespace

TEST_SUITE("hitting_set") {

TEST_CASE("exact hitting set equals the lexicographic brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 3 + trial % 10;
    std::vector<PointSet> family;
    const std::size_t members = 1 + rng() % 12;
    for (std::size_t i = 0; i < members; ++i) {
      PointSet s(n);
      while (s.empty()) {
        for (std::size_t v = 0; v < n; ++v) {
          if (rng() % 3 == 0) s.set(v);
        }
      }
      family.push_back(s);
    }
    const PointSet got = minimum_hitting_set(n, family);
    const auto ref = oracle::min_hitting(n, family);
    REQUIRE(ref.has_value());
    CHECK(got == *ref);
    CHECK(serial::minimum_hitting_set(n, family) == got);

    const PointSet greedy = greedy_hitting_set(n, family);
    CHECK(oracle::hits_all(family, greedy));
    CHECK(greedy.count() >= got.count());
    CHECK(serial::greedy_hitting_set(n, family) == greedy);

    const auto reduced = reduce_family(family);
    CHECK(reduced.size() <= family.size());
    CHECK(oracle::hits_all(family, got) == oracle::hits_all(reduced, got));
    for (const PointSet& r : reduced) {
      CHECK(std::find(family.begin(), family.end(), r) != family.end());
    }
  }
}

TEST_CASE("an empty member cannot be hit") {
  std::vector<PointSet> family{PointSet::from_indices(3, {0}), PointSet(3)};
  CHECK_THROWS_AS((void)minimum_hitting_set(3, family), Error);
}

TEST_CASE("node limit is enforced") {
  std::vector<PointSet> family;
  for (std::size_t v = 0; v < 30; v += 2) family.push_back(PointSet::from_indices(30, {v, v + 1}));
  HittingOptions tiny;
  tiny.max_nodes = 3;
  CHECK_THROWS_AS((void)minimum_hitting_set(30, family, tiny), Error);
}

}  // TEST_SUITE

TEST_SUITE("witness") {

TEST_CASE("triple reduction to minimal sides matches the direct definition") {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SystemPtr s = fixture::random_system(7, 8, seed);
    for (const Tangle& t : enumerate_tangles(s)) {
      const auto big = fixture::big_sides(t);
      for (int rep = 0; rep < 6; ++rep) {
        PointSet w = PointSet::from_word(7, rng() & 0x7f);
        const bool ref = oracle::witnessing(big, w);
        CHECK(is_witnessing(t, w).witnessing == ref);
        CHECK(is_witnessing_direct(t, w).witnessing == ref);
        if (ref) CHECK(is_cover(t, w));
      }
    }
  }
}

TEST_CASE("exact witnessing and cover against brute force") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SystemPtr s = fixture::random_system(8, 7, seed + 500);
    const auto found = enumerate_tangles(s);
    for (const Tangle& t : found) {
      const auto big = fixture::big_sides(t);
      const WitnessReport r = min_witnessing(t);
      CHECK(r.certified_minimal);
      CHECK(oracle::witnessing(big, r.set));
      CHECK(r.set == *oracle::min_hitting(8, triple_intersections(big)));
      const PointSet c = min_cover(t);
      CHECK(c == *oracle::min_hitting(8, big));
      const WitnessReport g = greedy_witnessing(t);
      CHECK(oracle::witnessing(big, g.set));
      CHECK(g.set.count() >= r.set.count());
    }
  }
}

TEST_CASE("unwitnessed report names an unmet intersection") {
  const InstanceBundle b = gen_triples(4);
  const PointSet w = PointSet::from_indices(4, {0, 1, 2});
  const WitnessCheck c = is_witnessing(b.tangle, w);
  REQUIRE_FALSE(c.witnessing);
  PointSet meet = PointSet::full(4);
  for (std::size_t i : c.unwitnessed) meet &= b.tangle.big_side(i);
  CHECK_FALSE(meet.intersects(w));
}

TEST_CASE("witness family lists index subsets lexicographically, prefixes first") {
  const InstanceBundle b = gen_triples(4);
  const auto fam = witness_family(b.tangle);
  CHECK(fam.size() == 4 + 6 + 4);
  const auto& mins = b.tangle.minimal_indices();
  auto side = [&](std::size_t i) { return b.tangle.big_side(mins[i]); };
  CHECK(fam[0] == side(0));
  CHECK(fam[1] == (side(0) & side(1)));
  CHECK(fam[2] == (side(0) & side(1) & side(2)));
  CHECK(fam[3] == (side(0) & side(1) & side(3)));
  CHECK(fam[4] == (side(0) & side(2)));
  CHECK(fam.back() == side(3));
}

TEST_CASE("inductive construction on min-order instances") {
  for (int k : {2, 3}) {
    const InstanceBundle b = gen_min_order(k);
    const InductiveResult r = inductive_witnessing(b.tangle, *b.full_system, k);
    const auto big = fixture::big_sides(b.tangle);
    CHECK(oracle::witnessing(big, r.report.set));
    CHECK(r.base_cover.is_subset_of(r.report.set));
    CHECK(r.base_cover.count() == static_cast<std::size_t>(k));
    CHECK(mpz_class(static_cast<unsigned long>(r.report.set.count())) <= bound_values(k).first_bound);
    CHECK(r.trace.size() == static_cast<std::size_t>(2 * k - 2));
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i - 1].witness_points.is_subset_of(r.trace[i].witness_points));
    }
    const InductiveResult s = serial::inductive_witnessing(b.tangle, *b.full_system, k);
    CHECK(s.report.set == r.report.set);
  }
  CHECK(inductive_witnessing(gen_min_order(2).tangle, *gen_min_order(2).full_system, 2).report.set.count() == 4);
  CHECK(inductive_witnessing(gen_min_order(3).tangle, *gen_min_order(3).full_system, 3).report.set.count() == 7);
}

TEST_CASE("inductive construction rejects bad inputs") {
  const InstanceBundle b = gen_min_order(2);
  CHECK_THROWS_AS((void)inductive_witnessing(b.tangle, *all_separations(GroundSet::make(4)), 2), Error);
  CHECK_THROWS_AS((void)inductive_witnessing(b.tangle, *b.full_system, 3), Error);
  InductiveOptions small;
  small.max_k = 1;
  CHECK_THROWS_AS((void)inductive_witnessing(b.tangle, *b.full_system, 2, small), Error);
}

TEST_CASE("intersection chains against brute force") {
  for (int k : {2, 3}) {
    const InstanceBundle b = gen_min_order(k);
    const IntersectionChain c = max_intersection_chain(b.tangle);
    CHECK(c.length() == static_cast<std::size_t>(k));
  }
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SystemPtr s = fixture::random_system(7, 8, seed + 900);
    for (const Tangle& t : enumerate_tangles(s)) {
      const IntersectionChain c = max_intersection_chain(t);
      CHECK(c.length() == oracle_chain(t.minimal_sides(), 7));
      PointSet cur = PointSet::full(7);
      for (std::size_t i = 0; i < c.length(); ++i) {
        const PointSet next = cur & t.big_side(c.sequence[i]).complement();
        CHECK(next != cur);
        CHECK(next == c.intersections[i]);
        cur = next;
      }
    }
  }
}

TEST_CASE("closed-form bound values") {
  const BoundValues b2 = bound_values(2);
  CHECK(b2.first_bound == 38);
  CHECK(b2.second_bound == 4);
  CHECK(b2.lower_bound == 0);
  CHECK(b2.gs_theta.has_value());
  const BoundValues b3 = bound_values(3);
  CHECK(b3.first_bound == 1083);
  CHECK(b3.second_bound == 13);
  CHECK(b3.lower_bound == 1);
  CHECK_FALSE(b3.gs_theta.has_value());
  CHECK(bound_values(4).second_bound == 40);
  CHECK(bound_values(5).second_bound == 121);
  CHECK(bound_values(5).lower_bound == 10);
  CHECK_THROWS_AS((void)bound_values(0), Error);
}

}  // TEST_SUITE
