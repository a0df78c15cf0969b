#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tanglekit/error.hpp"
#include "tanglekit/generators.hpp"
#include "tanglekit/guide.hpp"
#include "tanglekit/parallel.hpp"

using namespace tanglekit;

namespace {

// Side masses of a guiding function, recomputed here.
mpq_class min_side_mass(const Tangle& t, const std::vector<mpq_class>& w) {
  mpq_class best(1);
  bool first = true;
  for (const PointSet& a : t.big_sides()) {
    mpq_class m(0);
    a.for_each([&](std::size_t v) { m += w[v]; });
    if (first || m < best) best = m;
    first = false;
  }
  return best;
}

// Largest per-point incident mass of separation weights.
mpq_class max_point_mass(const Tangle& t, const std::vector<mpq_class>& h) {
  mpq_class best(0);
  for (std::size_t v = 0; v < t.ground_size(); ++v) {
    mpq_class m(0);
    for (std::size_t s = 0; s < t.size(); ++s) {
      if (t.big_side(s).test(v)) m += h[s];
    }
    if (m > best) best = m;
  }
  return best;
}

void check_certificate(const Tangle& t, const GuidanceCertificate& c) {
  CHECK(c.verified);
  CHECK(verify_certificate(t, c));
  if (c.branch == Branch::Guiding) {
    REQUIRE(c.guiding.has_value());
    mpq_class sum(0);
    for (const auto& w : c.guiding->weights) {
      CHECK(w >= 0);
      sum += w;
    }
    CHECK(sum == 1);
    CHECK(min_side_mass(t, c.guiding->weights) >= c.rho);
  } else {
    REQUIRE(c.witness.has_value());
    mpq_class sum(0);
    for (const auto& h : c.witness->weights) {
      CHECK(h >= 0);
      sum += h;
    }
    CHECK(sum == 1);
    CHECK(max_point_mass(t, c.witness->weights) < c.rho);
  }
}

}  // namespace

TEST_SUITE("guide") {

TEST_CASE("guiding functions validate their weights") {
  CHECK_THROWS_AS((void)GuidingFunction::make(2, {mpq_class(1)}), Error);
  CHECK_THROWS_AS((void)GuidingFunction::make(2, {mpq_class(-1), mpq_class(2)}), Error);
  CHECK_THROWS_AS((void)GuidingFunction::make(2, {mpq_class(1, 3), mpq_class(1, 3)}), Error);
  CHECK(GuidingFunction::uniform(4).max_weight() == mpq_class(1, 4));
  CHECK(GuidingFunction::indicator(PointSet::from_indices(5, {1, 3})).weights[3] == mpq_class(1, 2));
  CHECK_THROWS_AS((void)GuidingFunction::indicator(PointSet(5)), Error);
}

TEST_CASE("reliability agrees with the oracle") {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SystemPtr s = fixture::random_system(7, 6, seed + 70);
    for (const Tangle& t : enumerate_tangles(s)) {
      PointSet g(7);
      while (g.empty()) g = PointSet::from_word(7, rng() & 0x7f);
      CHECK(set_reliability(t, g) == oracle::set_reliability(fixture::big_sides(t), g));
      const GuidingFunction f = GuidingFunction::indicator(g);
      CHECK(function_reliability(t, f) == set_reliability(t, g));
      CHECK(function_reliability_minimal(t, f) == function_reliability(t, f));
    }
  }
}

TEST_CASE("triples(4) flips branch exactly at 3/4") {
  const InstanceBundle b = gen_triples(4);
  const MaxReliability m = max_reliability(b.tangle);
  CHECK(m.rho_star == mpq_class(3, 4));
  CHECK(function_reliability(b.tangle, m.g_star) == m.rho_star);
  const auto at = guiding_duality(b.tangle, mpq_class(3, 4));
  CHECK(at.branch == Branch::Guiding);
  check_certificate(b.tangle, at);
  const auto above = guiding_duality(b.tangle, mpq_class(3, 4) + mpq_class(1, 1000));
  CHECK(above.branch == Branch::Witness);
  check_certificate(b.tangle, above);
}

TEST_CASE("duality always yields exactly one verified certificate") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SystemPtr s = fixture::random_system(6, 6, seed + 300);
    for (const Tangle& t : enumerate_tangles(s)) {
      const MaxReliability m = max_reliability(t);
      for (const mpq_class& rho : {mpq_class(0), mpq_class(1, 3), mpq_class(1, 2), m.rho_star, mpq_class(1)}) {
        if (rho > 1) continue;
        const GuidanceCertificate c = guiding_duality(t, rho);
        check_certificate(t, c);
        CHECK((c.branch == Branch::Guiding) == (rho <= m.rho_star));
      }
    }
  }
}

TEST_CASE("float mode agrees on the branch") {
  const InstanceBundle b = gen_triples(5);
  for (const mpq_class& rho : {mpq_class(1, 2), mpq_class(3, 5), mpq_class(7, 10)}) {
    const auto q = guiding_duality(b.tangle, rho, ArithmeticMode::Rational);
    const auto f = guiding_duality(b.tangle, rho, ArithmeticMode::Float);
    CHECK(q.branch == f.branch);
    CHECK(f.mode == ArithmeticMode::Float);
    CHECK(verify_certificate(b.tangle, f));
  }
  CHECK(max_reliability(b.tangle).rho_star == mpq_class(3, 5));
  CHECK(std::abs(max_reliability(b.tangle, ArithmeticMode::Float).rho_star.get_d() - 0.6) < 1e-9);
}

TEST_CASE("rho outside the unit interval is rejected") {
  const InstanceBundle b = gen_triples(4);
  CHECK_THROWS_AS((void)guiding_duality(b.tangle, mpq_class(-1, 2)), Error);
  CHECK_THROWS_AS((void)guiding_duality(b.tangle, mpq_class(3, 2)), Error);
}

TEST_CASE("sampler on the arcs instance") {
  const InstanceBundle b = gen_arcs(6);
  const PointSet g = *b.designated("G");
  const GuidingFunction f = GuidingFunction::indicator(g);
  const SamplerCondition cond = sampler_condition(b.tangle, f);
  CHECK(cond.lhs == 0);
  CHECK(cond.holds);
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL, 123456789ULL}) {
    const SampleResult r = sample_guiding_set(b.tangle, f, {seed, 100});
    REQUIRE(r.set.has_value());
    CHECK(r.trial == 1);
    CHECK(*r.set == g);
  }
  const CorollaryCondition cor = corollary_condition(b.tangle, f);
  CHECK(cor.rhs == mpq_class(2, 13));
  CHECK_FALSE(cor.holds);
}

TEST_CASE("sampler output is reproducible and thread independent") {
  const InstanceBundle b = gen_triples(5);
  const GuidingFunction g = max_reliability(b.tangle).g_star;
  const int before = thread_count();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SampleResult ref = serial::sample_guiding_set(b.tangle, g, {seed, 500});
    for (int threads : {1, 3}) {
      set_thread_count(threads);
      const SampleResult r = sample_guiding_set(b.tangle, g, {seed, 500});
      CHECK(r.trial == ref.trial);
      CHECK(r.set == ref.set);
    }
    if (ref.set) {
      CHECK(set_reliability(b.tangle, *ref.set) > mpq_class(1, 2));
      CHECK(sampler_draw(g, seed, ref.trial) == *ref.set);
    }
  }
  set_thread_count(before);
  CHECK(sampler_draw(g, 5, 7) == sampler_draw(g, 5, 7));
}

TEST_CASE("conditions need a guiding function") {
  const InstanceBundle b = gen_triples(6);
  const GuidingFunction u = GuidingFunction::uniform(b.system->ground_size());
  CHECK(function_reliability(b.tangle, u) == mpq_class(1, 2));
  CHECK_THROWS_AS((void)sampler_condition(b.tangle, u), Error);
  CHECK_THROWS_AS((void)corollary_condition(b.tangle, u), Error);
  CHECK(max_reliability(b.tangle).rho_star == mpq_class(1, 2));
}

}  // TEST_SUITE
