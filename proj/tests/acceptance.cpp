// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria, exit 1 if any fails
//   acceptance 3 7        run the listed criteria only
//   acceptance 5a 5b      the two halves of criterion 5 (min-order, triples)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tanglekit/core.hpp"
#include "tanglekit/generators.hpp"
#include "tanglekit/guide.hpp"
#include "tanglekit/lp.hpp"
#include "tanglekit/order.hpp"
#include "tanglekit/witness.hpp"

using namespace tanglekit;

namespace {

// Wall-clock budgets in seconds, as the criteria state them.
const std::map<std::string, double> kBudget = {
    {"1", 5},    {"2", 30},  {"3", 60},  {"4", 120}, {"5", 60}, {"5a", 60}, {"5b", 60},
    {"6", 10},   {"7", 30},  {"8", 30},  {"9", 30},  {"10", 10}, {"11", 10}, {"12", 120},
};

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string q(const mpq_class& v) { return v.get_str(); }

std::size_t count_of(const PointSet& s) { return s.count(); }

// A_j of the cyclic instances: points whose member list contains residue j.
PointSet residue_side(const SeparationSystem& s, std::size_t j) {
  PointSet out(s.ground_size());
  for (std::size_t v = 0; v < s.ground_size(); ++v) {
    const std::string label = s.ground().label(v);
    std::stringstream ss(label.substr(label.find(':') + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (std::stoul(item) == j) out.set(v);
    }
  }
  return out;
}

bool is_big(const Tangle& t, const PointSet& side) {
  const auto i = t.system().find(side);
  return i && t.big_side(*i) == side;
}

void criterion_1(Outcome& o) {
  for (int k : {2, 3, 4}) {
    const InstanceBundle b = gen_min_order(k);
    const std::size_t c = count_of(min_cover(b.tangle));
    o.detail << "M" << k << " cover=" << c << " ";
    o.expect(c == static_cast<std::size_t>(k), "cover size of M" + std::to_string(k));
  }
}

void criterion_2(Outcome& o) {
  for (int k : {4, 5}) {
    const InstanceBundle b = gen_triples(k);
    const WitnessReport r = min_witnessing(b.tangle);
    const BoundValues bv = bound_values(k);
    o.detail << "T" << k << " min witnessing=" << r.set.count() << " ";
    o.expect(r.certified_minimal, "exactness certificate");
    o.expect(mpz_class(static_cast<unsigned long>(r.set.count())) == bv.lower_bound, "equals C(k,3)");
    o.expect(mpz_class(static_cast<unsigned long>(r.set.count())) <= bv.second_bound, "within (3^k-1)/2");
  }
}

void criterion_3(Outcome& o) {
  struct Fixture {
    std::string name;
    Tangle tangle;
    SystemPtr ordered;  // full system carrying the order
    int k;
  };
  std::vector<Fixture> fixtures;
  for (int k : {2, 3, 4}) {
    const InstanceBundle b = gen_min_order(k);
    fixtures.push_back({"M" + std::to_string(k), b.tangle, b.full_system, k});
  }
  const Extension e = extend_order(gen_triples(4).tangle);
  fixtures.push_back({"T4*", e.tangle(), e.full, e.k});
  for (const Fixture& f : fixtures) {
    o.expect(is_submodular(*f.ordered).submodular, f.name + " order submodular");
    const WitnessReport r = min_witnessing(f.tangle);
    const mpz_class bound = bound_values(f.k).second_bound;
    o.detail << f.name << "=" << r.set.count() << "<=" << bound.get_str() << " ";
    o.expect(r.certified_minimal && mpz_class(static_cast<unsigned long>(r.set.count())) <= bound, f.name + " bound");
    if (f.name == "M2") o.expect(r.set.count() == 4, "M2 equality at 4");
  }
}

void criterion_4(Outcome& o) {
  for (int k : {2, 3}) {
    const InstanceBundle b = gen_min_order(k);
    const InductiveResult r = inductive_witnessing(b.tangle, *b.full_system, k);
    const mpz_class bound = bound_values(k).first_bound;
    o.detail << "M" << k << " inductive=" << r.report.set.count() << "<=" << bound.get_str() << " ";
    o.expect(is_witnessing(b.tangle, r.report.set).witnessing, "witnessing");
    o.expect(is_witnessing_direct(b.tangle, r.report.set).witnessing, "witnessing (direct)");
    o.expect(mpz_class(static_cast<unsigned long>(r.report.set.count())) <= bound, "first bound");
  }
}

void criterion_5a(Outcome& o) {
  for (int k : {2, 3}) {
    const InstanceBundle b = gen_min_order(k);
    const std::size_t len = max_intersection_chain(b.tangle).length();
    o.detail << "M" << k << " chain=" << len << " ";
    o.expect(len == static_cast<std::size_t>(k), "chain length equals k");
  }
}

void criterion_5b(Outcome& o) {
  const Extension e = extend_order(gen_triples(4).tangle);
  const std::size_t len = max_intersection_chain(e.tangle()).length();
  o.detail << "T4* k=" << e.k << " chain=" << len << " ";
  o.expect(len == static_cast<std::size_t>(e.k), "chain length equals k");
}

void criterion_5(Outcome& o) {
  criterion_5a(o);
  criterion_5b(o);
}

void criterion_6(Outcome& o) {
  const InstanceBundle b = gen_triples(4);
  const Extension e = extend_order(b.tangle);
  const Tangle& star = e.tangle();
  o.expect(e.full->size() == 7, "all 7 separations of the 4-point set carry f*");
  o.expect(is_submodular(*e.full, Closure::Full).submodular, "f* submodular");
  o.expect(is_consistent(star.system(), star.orientation()).consistent, "tau* consistent");
  bool contains = true;
  for (std::size_t i = 0; i < b.tangle.size(); ++i) contains = contains && is_big(star, b.tangle.big_side(i));
  o.expect(contains, "tau inside tau*");
  std::vector<PointSet> before = b.tangle.minimal_sides();
  std::vector<PointSet> after = star.minimal_sides();
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  o.expect(before == after, "minimal elements preserved");
  o.detail << "k=" << e.k << " |S*_k|=" << star.size() << " ";
}

void criterion_7(Outcome& o) {
  std::mt19937_64 rng(20240607);
  int optimal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng() % 4;
    const std::size_t n = 2 + rng() % 4;
    LinearProgram<mpq_class> lp;
    lp.A.assign(m, std::vector<mpq_class>(n));
    for (auto& row : lp.A) {
      for (auto& v : row) {
        v = mpq_class(static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 4));
        v.canonicalize();
      }
    }
    for (std::size_t i = 0; i < m; ++i) lp.b.push_back(mpq_class(1 + static_cast<long>(rng() % 9)));
    for (std::size_t j = 0; j < n; ++j) lp.c.push_back(mpq_class(static_cast<long>(rng() % 7) - 1));
    // Column sums > 0 keep every program bounded.
    for (std::size_t j = 0; j < n; ++j) lp.A[0][j] += 1;
    const LPSolution<mpq_class> sol = solve(lp);
    if (sol.status != LPStatus::Optimal) {
      o.expect(false, "random LP not optimal");
      continue;
    }
    mpq_class dual_value(0);
    for (std::size_t i = 0; i < m; ++i) dual_value += lp.b[i] * sol.y[i];
    o.expect(verify(lp, sol) && dual_value == sol.objective, "zero duality gap");
    ++optimal;
  }
  o.detail << optimal << "/100 LPs verified ";
  const InstanceBundle t4 = gen_triples(4);
  const GuidanceCertificate at = guiding_duality(t4.tangle, mpq_class(3, 4), ArithmeticMode::Rational);
  const GuidanceCertificate above =
      guiding_duality(t4.tangle, mpq_class(3, 4) + mpq_class(1, 1000), ArithmeticMode::Rational);
  o.expect(at.branch == Branch::Guiding, "guiding branch at 3/4");
  o.expect(above.branch == Branch::Witness, "witness branch at 3/4+1/1000");
  o.expect(verify_certificate(t4.tangle, at) && verify_certificate(t4.tangle, above), "certificates re-verify");
  o.detail << "T4 branches " << to_string(at.branch) << "/" << to_string(above.branch) << " ";
}

void criterion_8(Outcome& o) {
  const mpq_class r4 = max_reliability(gen_triples(4).tangle, ArithmeticMode::Rational).rho_star;
  const mpq_class r6 = max_reliability(gen_triples(6).tangle, ArithmeticMode::Rational).rho_star;
  o.detail << "rho*(T4)=" << q(r4) << " rho*(T6)=" << q(r6) << " ";
  o.expect(r4 == mpq_class(3, 4), "rho*(T4) = 3/4");
  o.expect(r6 == mpq_class(1, 2), "rho*(T6) = 1/2");
}

void criterion_9(Outcome& o) {
  const InstanceBundle b = gen_arcs(6);
  const PointSet g = *b.designated("G");
  const PointSet w = *b.designated("W");
  const mpq_class rg = set_reliability(b.tangle, g);
  o.expect(rg == mpq_class(2, 3), "rho_G = 2/3");
  std::mt19937_64 rng(9);
  const std::size_t n = b.system->ground_size();
  mpq_class worst(0);
  for (int i = 0; i < 10000; ++i) {
    PointSet s(n);
    while (s.empty()) s = PointSet::from_word(n, rng() & ((std::uint64_t{1} << n) - 1));
    const mpq_class r = set_reliability(b.tangle, s);
    if (r > worst) worst = r;
  }
  o.expect(worst <= mpq_class(2, 3), "random subsets stay at or below 2/3");
  const PointSet a1 = residue_side(*b.system, 1);
  const PointSet a3 = residue_side(*b.system, 3);
  const PointSet a5 = residue_side(*b.system, 5);
  o.expect(is_big(b.tangle, a1) && is_big(b.tangle, a3) && is_big(b.tangle, a5), "A_1, A_3, A_5 are big sides");
  const PointSet meet = a1 & a3 & a5;
  o.expect(!meet.intersects(g), "G misses A_1 ∩ A_3 ∩ A_5");
  o.expect(meet.intersects(w), "W meets A_1 ∩ A_3 ∩ A_5");
  o.detail << "rho_G=" << q(rg) << " best random=" << q(worst) << " ";
}

void criterion_10(Outcome& o) {
  const InstanceBundle b = gen_arcs_witness(5);
  const PointSet g = *b.designated("G");
  const PointSet w = *b.designated("W");
  std::size_t good = 0;
  for (const auto& t : b.spread_triples) {
    const PointSet meet =
        residue_side(*b.system, t[0]) & residue_side(*b.system, t[1]) & residue_side(*b.system, t[2]);
    if (!meet.intersects(g) && (meet & w).count() == 1) ++good;
  }
  o.expect(good == 9, "all 9 spread triples avoid G and have one W witness");
  bool bound = true;
  for (long wc = 9; wc <= 84; ++wc) {
    for (long ac = 0; ac <= 9; ++ac) {
      if (mpq_class(3 * wc + 5 * ac, 9 * (wc + ac)) >= mpq_class(1, 2)) bound = false;
    }
  }
  o.expect(bound, "(3w+5a)/(9(w+a)) < 1/2 on the grid");
  o.detail << good << "/9 spread triples, composition bound " << (bound ? "holds" : "fails") << " ";
}

void criterion_11(Outcome& o) {
  const InstanceBundle arcs = gen_arcs(6);
  const PointSet g = *arcs.designated("G");
  const GuidingFunction ind = GuidingFunction::indicator(g);
  const SamplerCondition cond = sampler_condition(arcs.tangle, ind);
  o.expect(cond.lhs == 0, "condition lhs = 0");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SampleResult r = sample_guiding_set(arcs.tangle, ind, {seed, 10});
    o.expect(r.set && *r.set == g && r.trial == 1, "G on the first trial");
  }
  // Fuzz grid: every returned set is a guiding set.
  std::vector<std::pair<Tangle, GuidingFunction>> grid;
  for (int k : {4, 5}) {
    const InstanceBundle t = gen_triples(k);
    grid.emplace_back(t.tangle, max_reliability(t.tangle).g_star);
  }
  grid.emplace_back(arcs.tangle, max_reliability(arcs.tangle).g_star);
  std::size_t returned = 0;
  for (const auto& [t, f] : grid) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const SampleResult r = sample_guiding_set(t, f, {seed, 2000});
      if (!r.set) continue;
      ++returned;
      o.expect(set_reliability(t, *r.set) > mpq_class(1, 2), "returned set is guiding");
    }
  }
  o.expect(returned > 0, "fuzz grid returned sets");
  o.detail << "lhs=" << q(cond.lhs) << " fuzz returns=" << returned << " ";
}

void criterion_12(Outcome& o) {
  std::size_t tangles = 0;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 5 + seed % 5;
    const std::size_t m = 1 + seed % 10;
    std::vector<PointSet> sides;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    while (sides.size() < m) {
      const std::uint64_t x = rng() & full;
      if (x != 0 && x != full) sides.push_back(PointSet::from_word(n, x));
    }
    const SystemPtr s = make_system(GroundSet::make(n), sides).system;
    std::vector<Orientation> brute;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s->size()); ++mask) {
      Orientation ori(s->size());
      for (std::size_t i = 0; i < ori.size(); ++i) ori[i] = (mask >> i) & 1U;
      if (is_consistent(*s, ori).consistent) brute.push_back(ori);
    }
    std::vector<Orientation> got;
    for (const Tangle& t : enumerate_tangles(s)) got.push_back(t.orientation());
    std::sort(brute.begin(), brute.end());
    std::sort(got.begin(), got.end());
    o.expect(brute == got, "enumeration matches filtered orientations");
    tangles += got.size();
    for (const Orientation& ori : got) {
      const Tangle t = Tangle::make(s, ori);
      for (int rep = 0; rep < 10; ++rep) {
        const PointSet w = PointSet::from_word(n, rng() & full);
        ++checks;
        o.expect(is_witnessing(t, w).witnessing == is_witnessing_direct(t, w).witnessing,
                 "triple reduction agrees with direct definition");
      }
    }
  }
  o.detail << tangles << " tangles, " << checks << " witnessing checks ";
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria = {
    {"1", criterion_1},   {"2", criterion_2},   {"3", criterion_3},   {"4", criterion_4},   {"5", criterion_5},
    {"6", criterion_6},   {"7", criterion_7},   {"8", criterion_8},   {"9", criterion_9},
    {"10", criterion_10}, {"11", criterion_11}, {"12", criterion_12},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> plan;
  if (argc == 1) plan = kCriteria;
  for (int i = 1; i < argc; ++i) {
    const std::string id = argv[i];
    if (id == "5a") {
      plan.emplace_back(id, criterion_5a);
    } else if (id == "5b") {
      plan.emplace_back(id, criterion_5b);
    } else {
      auto it = std::find_if(kCriteria.begin(), kCriteria.end(), [&](const auto& c) { return c.first == id; });
      if (it == kCriteria.end()) {
        std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
        return 2;
      }
      plan.push_back(*it);
    }
  }
  bool all_ok = true;
  for (const auto& [id, run] : plan) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "[exception: " << e.what() << "] ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > kBudget.at(id)) o.expect(false, "over the time budget");
    all_ok = all_ok && o.ok;
    std::printf("%s criterion %s (%.2fs): %s\n", o.ok ? "PASS" : "FAIL", id.c_str(), secs, o.detail.str().c_str());
  }
  return all_ok ? 0 : 1;
}
