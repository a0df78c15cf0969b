#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tanglekit/error.hpp"
#include "tanglekit/lp.hpp"

using namespace tanglekit;

namespace {

LinearProgram<mpq_class> random_lp(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  LinearProgram<mpq_class> lp;
  lp.A.assign(m, std::vector<mpq_class>(n));
  for (auto& row : lp.A) {
    for (auto& v : row) v = mpq_class(static_cast<long>(rng() % 11) - 3, 1 + static_cast<long>(rng() % 3));
  }
  // A bounding row keeps the problem bounded; some b entries are negative.
  lp.A.push_back(std::vector<mpq_class>(n, mpq_class(1)));
  for (std::size_t i = 0; i < m; ++i) lp.b.push_back(mpq_class(static_cast<long>(rng() % 13) - 2));
  lp.b.push_back(mpq_class(10 + static_cast<long>(rng() % 5)));
  for (std::size_t j = 0; j < n; ++j) lp.c.push_back(mpq_class(static_cast<long>(rng() % 9) - 2, 1 + static_cast<long>(rng() % 2)));
  for (auto& row : lp.A) {
    for (auto& v : row) v.canonicalize();
  }
  for (auto& v : lp.c) v.canonicalize();
  return lp;
}

LinearProgram<double> to_double(const LinearProgram<mpq_class>& q) {
  LinearProgram<double> d;
  for (const auto& row : q.A) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get_d());
    d.A.push_back(r);
  }
  for (const auto& v : q.b) d.b.push_back(v.get_d());
  for (const auto& v : q.c) d.c.push_back(v.get_d());
  return d;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("random programs match vertex enumeration and verify exactly") {
  std::mt19937_64 rng(41);
  int optimal = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto lp = random_lp(rng, 1 + trial % 4, 1 + trial % 3);
    const auto sol = solve(lp);
    const auto ref = oracle::vertex_max(lp.A, lp.b, lp.c);
    if (!ref) {
      CHECK(sol.status == LPStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(sol.status == LPStatus::Optimal);
    ++optimal;
    CHECK(sol.objective == *ref);
    CHECK(verify(lp, sol));
    // Dual program solved on its own reaches the same value.
    const auto dual = solve(dualize(lp));
    REQUIRE(dual.status == LPStatus::Optimal);
    CHECK(-dual.objective == sol.objective);
    // Float mode lands within tolerance.
    const auto fsol = solve(to_double(lp));
    REQUIRE(fsol.status == LPStatus::Optimal);
    CHECK(std::abs(fsol.objective - sol.objective.get_d()) < 1e-7);
    CHECK(verify(to_double(lp), fsol));
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 0);
}

TEST_CASE("dualizing twice returns the program") {
  std::mt19937_64 rng(2);
  const auto lp = random_lp(rng, 3, 2);
  const auto back = dualize(dualize(lp));
  CHECK(back.A == lp.A);
  CHECK(back.b == lp.b);
  CHECK(back.c == lp.c);
}

TEST_CASE("unbounded and infeasible programs") {
  LinearProgram<mpq_class> unb{{{mpq_class(-1)}}, {mpq_class(1)}, {mpq_class(1)}};
  CHECK(solve(unb).status == LPStatus::Unbounded);
  LinearProgram<mpq_class> inf{{{mpq_class(1)}}, {mpq_class(-1)}, {mpq_class(1)}};
  CHECK(solve(inf).status == LPStatus::Infeasible);
}

TEST_CASE("degenerate cycling example terminates under the smallest-index rule") {
  // Beale's example, which cycles under the textbook largest-coefficient rule.
  LinearProgram<mpq_class> lp;
  lp.A = {{mpq_class(1, 4), mpq_class(-8), mpq_class(-1), mpq_class(9)},
          {mpq_class(1, 2), mpq_class(-12), mpq_class(-1, 2), mpq_class(3)},
          {mpq_class(0), mpq_class(0), mpq_class(1), mpq_class(0)}};
  lp.b = {mpq_class(0), mpq_class(0), mpq_class(1)};
  lp.c = {mpq_class(3, 4), mpq_class(-20), mpq_class(1, 2), mpq_class(-6)};
  const auto sol = solve(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.objective == mpq_class(5, 4));
  CHECK(verify(lp, sol));
}

TEST_CASE("non-canonical input fractions are accepted") {
  LinearProgram<mpq_class> lp{{{mpq_class(2, 4)}}, {mpq_class(3, 6)}, {mpq_class(4, 2)}};
  const auto sol = solve(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.objective == 2);
  CHECK(verify(lp, sol));
}

TEST_CASE("a wrong dual vector fails verification") {
  LinearProgram<mpq_class> lp{{{mpq_class(1), mpq_class(1)}}, {mpq_class(2)}, {mpq_class(1), mpq_class(1)}};
  auto sol = solve(lp);
  REQUIRE(verify(lp, sol));
  sol.y[0] += 1;
  CHECK_FALSE(verify(lp, sol));
}

TEST_CASE("dimension mismatch is reported") {
  LinearProgram<mpq_class> lp{{{mpq_class(1)}}, {mpq_class(1), mpq_class(2)}, {mpq_class(1)}};
  CHECK_THROWS_AS(lp.validate(), Error);
}

}  // TEST_SUITE
