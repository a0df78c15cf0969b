#include "tanglekit/guide.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>

#include "omp_util.hpp"
#include "tanglekit/error.hpp"
#include "tanglekit/lp.hpp"

namespace tanglekit {

std::string to_string(ArithmeticMode mode) {
  switch (mode) {
    case ArithmeticMode::Auto: return "auto";
    case ArithmeticMode::Rational: return "rational";
    case ArithmeticMode::Float: return "float";
  }
  return "unknown";
}

std::string to_string(Branch branch) { return branch == Branch::Guiding ? "guiding" : "witness"; }

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kFloatSlack = 1e-9;

bool normalized(const mpq_class& sum, ArithmeticMode mode) {
  if (mode == ArithmeticMode::Float) return std::abs(sum.get_d() - 1.0) <= kNormTolerance;
  return sum == 1;
}

mpq_class sum_of(const std::vector<mpq_class>& v) {
  mpq_class s = 0;
  for (const auto& x : v) s += x;
  return s;
}

mpq_class side_mass(const PointSet& side, const std::vector<mpq_class>& w) {
  mpq_class s = 0;
  side.for_each([&](std::size_t v) { s += w[v]; });
  return s;
}

void require_normalized(const Tangle& tangle, const GuidingFunction& g) {
  if (g.weights.size() != tangle.ground_size()) {
    throw Error(ErrorKind::LengthMismatch, "guiding function has " + std::to_string(g.weights.size()) +
                                               " weights for " + std::to_string(tangle.ground_size()) + " points");
  }
  if (!normalized(sum_of(g.weights), g.mode)) throw Error(ErrorKind::NotNormalized, "weights do not sum to 1");
}

}  // namespace

GuidingFunction GuidingFunction::make(std::size_t ground_size, std::vector<mpq_class> weights, ArithmeticMode mode) {
  if (weights.size() != ground_size) {
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(ground_size) + " weights, got " +
                                               std::to_string(weights.size()));
  }
  for (auto& w : weights) {
    w.canonicalize();
    if (sgn(w) < 0) throw Error(ErrorKind::InvalidParam, "negative weight");
  }
  if (!normalized(sum_of(weights), mode)) throw Error(ErrorKind::NotNormalized, "weights do not sum to 1");
  return GuidingFunction{std::move(weights), mode};
}

GuidingFunction GuidingFunction::uniform(std::size_t ground_size) {
  if (ground_size == 0) throw Error(ErrorKind::EmptySet, "empty ground set");
  return GuidingFunction{std::vector<mpq_class>(ground_size, mpq_class(1, ground_size)), ArithmeticMode::Rational};
}

GuidingFunction GuidingFunction::indicator(const PointSet& g) {
  const std::size_t c = g.count();
  if (c == 0) throw Error(ErrorKind::EmptySet, "indicator of the empty set");
  std::vector<mpq_class> w(g.universe(), mpq_class(0));
  g.for_each([&](std::size_t v) { w[v] = mpq_class(1, c); });
  return GuidingFunction{std::move(w), ArithmeticMode::Rational};
}

mpq_class GuidingFunction::max_weight() const {
  mpq_class m = 0;
  for (const auto& w : weights) {
    if (w > m) m = w;
  }
  return m;
}

mpq_class set_reliability(const Tangle& tangle, const PointSet& g) {
  if (g.universe() != tangle.ground_size()) throw Error(ErrorKind::GroundMismatch, "set over another ground set");
  const std::size_t size = g.count();
  if (size == 0) throw Error(ErrorKind::EmptySet, "reliability of the empty set");
  std::size_t best = size;
  for (const PointSet& a : tangle.big_sides()) best = std::min(best, (a & g).count());
  mpq_class r(best, size);
  r.canonicalize();
  return r;
}

mpq_class function_reliability(const Tangle& tangle, const GuidingFunction& g) {
  require_normalized(tangle, g);
  mpq_class best = 1;
  bool first = true;
  for (const PointSet& a : tangle.big_sides()) {
    mpq_class m = side_mass(a, g.weights);
    if (first || m < best) best = m;
    first = false;
  }
  return best;
}

mpq_class function_reliability_minimal(const Tangle& tangle, const GuidingFunction& g) {
  require_normalized(tangle, g);
  mpq_class best = 1;
  bool first = true;
  for (std::size_t i : tangle.minimal_indices()) {
    mpq_class m = side_mass(tangle.big_side(i), g.weights);
    if (first || m < best) best = m;
    first = false;
  }
  return best;
}

bool verify_certificate(const Tangle& tangle, const GuidanceCertificate& cert) {
  const bool flt = cert.mode == ArithmeticMode::Float;
  if (cert.branch == Branch::Guiding) {
    if (!cert.guiding || cert.witness) return false;
    const auto& w = cert.guiding->weights;
    if (w.size() != tangle.ground_size()) return false;
    if (std::any_of(w.begin(), w.end(), [](const mpq_class& x) { return sgn(x) < 0; })) return false;
    if (!normalized(sum_of(w), cert.mode)) return false;
    for (const PointSet& a : tangle.big_sides()) {
      const mpq_class m = side_mass(a, w);
      if (flt ? m.get_d() < cert.rho.get_d() - kFloatSlack : m < cert.rho) return false;
    }
    return true;
  }
  if (!cert.witness || cert.guiding) return false;
  const auto& h = cert.witness->weights;
  if (h.size() != tangle.size()) return false;
  if (std::any_of(h.begin(), h.end(), [](const mpq_class& x) { return sgn(x) < 0; })) return false;
  if (!normalized(sum_of(h), cert.mode)) return false;
  std::vector<mpq_class> incident(tangle.ground_size(), mpq_class(0));
  for (std::size_t s = 0; s < tangle.size(); ++s) {
    if (sgn(h[s]) == 0) continue;
    tangle.big_side(s).for_each([&](std::size_t v) { incident[v] += h[s]; });
  }
  // Strict in both modes.
  return std::all_of(incident.begin(), incident.end(), [&](const mpq_class& x) { return x < cert.rho; });
}

ArithmeticMode resolve_mode(const Tangle& tangle, ArithmeticMode requested) {
  if (requested != ArithmeticMode::Auto) return requested;
  return tangle.ground_size() <= 64 && tangle.size() <= 64 ? ArithmeticMode::Rational : ArithmeticMode::Float;
}

namespace {

struct GuideLP {
  mpq_class optimum;           // c*_ρ
  std::vector<mpq_class> h;    // primal, per separation
  std::vector<mpq_class> y;    // dual, per point
};

// max Σ h(s) s.t. Σ_{s: v∈τ(s)} h(s) <= ρ for every point v.
template <class T>
GuideLP solve_guide(const Tangle& tangle, const T& rho) {
  const std::size_t n = tangle.ground_size();
  const std::size_t m = tangle.size();
  LinearProgram<T> lp;
  lp.A.assign(n, std::vector<T>(m, T(0)));
  for (std::size_t s = 0; s < m; ++s) {
    tangle.big_side(s).for_each([&](std::size_t v) { lp.A[v][s] = T(1); });
  }
  lp.b.assign(n, rho);
  lp.c.assign(m, T(1));
  const LPSolution<T> sol = solve(lp);
  if (sol.status != LPStatus::Optimal) {
    throw Error(ErrorKind::LPFailure, "guiding LP ended " + to_string(sol.status));
  }
  if (!verify(lp, sol)) throw Error(ErrorKind::LPFailure, "guiding LP solution failed verification");
  // Float pivots leave residues like -1e-16 where the exact value is 0.
  auto clean = [](const T& v) -> mpq_class {
    if constexpr (std::is_same_v<T, double>) {
      if (v < 0 && v > -kFloatSlack) return mpq_class(0);
    }
    return mpq_class(v);
  };
  GuideLP out;
  out.optimum = mpq_class(sol.objective);
  for (const T& v : sol.x) out.h.push_back(clean(v));
  for (const T& v : sol.y) out.y.push_back(clean(v));
  return out;
}

GuideLP solve_guide_mode(const Tangle& tangle, const mpq_class& rho, ArithmeticMode mode) {
  if (mode == ArithmeticMode::Float) return solve_guide<double>(tangle, rho.get_d());
  return solve_guide<mpq_class>(tangle, rho);
}

}  // namespace

GuidanceCertificate guiding_duality(const Tangle& tangle, const mpq_class& rho, ArithmeticMode mode) {
  if (rho < 0 || rho > 1) throw Error(ErrorKind::InvalidParam, "rho must lie in [0, 1]");
  GuidanceCertificate cert;
  cert.rho = rho;
  cert.mode = resolve_mode(tangle, mode);
  const GuideLP lp = solve_guide_mode(tangle, rho, cert.mode);
  cert.lp_optimum = lp.optimum;
  const bool flt = cert.mode == ArithmeticMode::Float;
  const bool guiding = flt ? lp.optimum.get_d() <= 1.0 + kFloatSlack : lp.optimum <= 1;

  if (guiding) {
    cert.branch = Branch::Guiding;
    if (sgn(lp.optimum) == 0) {
      GuidingFunction g = GuidingFunction::uniform(tangle.ground_size());
      g.mode = cert.mode;
      cert.guiding = std::move(g);
    } else {
      // g = ρ·y lies in N_ρ with total mass c*; rescale to mass 1.
      std::vector<mpq_class> w;
      w.reserve(lp.y.size());
      for (const auto& yv : lp.y) w.emplace_back(rho * yv / lp.optimum);
      cert.guiding = GuidingFunction{std::move(w), cert.mode};
    }
  } else {
    cert.branch = Branch::Witness;
    std::vector<mpq_class> w;
    w.reserve(lp.h.size());
    for (const auto& hv : lp.h) w.emplace_back(hv / lp.optimum);
    cert.witness = DualWitness{std::move(w), rho};
  }
  cert.verified = verify_certificate(tangle, cert);
  if (!cert.verified) {
    throw Error(flt ? ErrorKind::NumericalInstability : ErrorKind::InternalError,
                "guidance certificate failed re-verification");
  }
  return cert;
}

MaxReliability max_reliability(const Tangle& tangle, ArithmeticMode mode) {
  MaxReliability out;
  out.mode = resolve_mode(tangle, mode);
  const GuideLP lp = solve_guide_mode(tangle, mpq_class(1), out.mode);
  out.c_star_one = lp.optimum;
  if (sgn(lp.optimum) == 0) {
    out.rho_star = 1;
    out.g_star = GuidingFunction::uniform(tangle.ground_size());
    out.g_star.mode = out.mode;
    return out;
  }
  out.rho_star = lp.optimum <= 1 ? mpq_class(1) : mpq_class(1 / lp.optimum);
  // c*_ρ = ρ·c*_1, so the normalized dual optimum serves every ρ.
  std::vector<mpq_class> w;
  w.reserve(lp.y.size());
  const mpq_class total = sum_of(lp.y);
  for (const auto& yv : lp.y) w.emplace_back(yv / total);
  out.g_star = GuidingFunction{std::move(w), out.mode};
  return out;
}

SamplerCondition sampler_condition(const Tangle& tangle, const GuidingFunction& g) {
  const mpq_class rho = function_reliability(tangle, g);
  if (rho <= mpq_class(1, 2)) throw Error(ErrorKind::NotGuiding, "reliability " + rho.get_str() + " is not above 1/2");
  const mpq_class eta = 1 / g.max_weight();
  mpq_class pre = 0;
  for (const auto& w : g.weights) pre += w * (1 - w * eta);
  pre /= 4 * eta;
  mpq_class inv = 0;
  for (std::size_t i : tangle.minimal_indices()) {
    const mpq_class d = side_mass(tangle.big_side(i), g.weights) - mpq_class(1, 2);
    inv += 1 / (d * d);
  }
  SamplerCondition out;
  out.lhs = pre * inv;
  out.holds = out.lhs < 1;
  return out;
}

CorollaryCondition corollary_condition(const Tangle& tangle, const GuidingFunction& g) {
  const mpq_class rho = function_reliability(tangle, g);
  if (rho <= mpq_class(1, 2)) throw Error(ErrorKind::NotGuiding, "reliability " + rho.get_str() + " is not above 1/2");
  CorollaryCondition out;
  const auto n = static_cast<unsigned long>(tangle.ground_size());
  out.delta = rho - mpq_class(1, 2);
  out.epsilon = 1 / (n * g.max_weight());
  out.rhs = 4 * out.delta * out.delta * out.epsilon * out.epsilon * n;
  out.minimal_count = tangle.minimal_indices().size();
  out.holds = mpq_class(static_cast<unsigned long>(out.minimal_count)) < out.rhs;
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> inclusion_probabilities(const GuidingFunction& g) {
  const mpq_class eta = 1 / g.max_weight();
  std::vector<double> p;
  p.reserve(g.weights.size());
  for (const auto& w : g.weights) p.push_back(mpq_class(w * eta).get_d());
  return p;
}

PointSet draw(const std::vector<double>& p, std::uint64_t seed, std::size_t trial) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
  PointSet g(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < p[v]) g.set(v);
  }
  return g;
}

bool guides(const Tangle& tangle, const PointSet& g, mpq_class& reliability) {
  if (g.empty()) return false;
  reliability = set_reliability(tangle, g);
  return reliability > mpq_class(1, 2);
}

SampleResult prepare(const Tangle& tangle, const GuidingFunction& g) {
  require_normalized(tangle, g);
  SampleResult out;
  try {
    out.condition_held = sampler_condition(tangle, g).holds;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotGuiding) throw;
  }
  return out;
}

}  // namespace

PointSet sampler_draw(const GuidingFunction& g, std::uint64_t seed, std::size_t trial) {
  return draw(inclusion_probabilities(g), seed, trial);
}

SampleResult sample_guiding_set(const Tangle& tangle, const GuidingFunction& g, const SamplerConfig& config) {
  SampleResult out = prepare(tangle, g);
  const std::vector<double> p = inclusion_probabilities(g);
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 1; start <= config.max_trials; start += kChunk) {
    const std::size_t len = std::min(kChunk, config.max_trials - start + 1);
    std::vector<std::optional<PointSet>> hits(len);
    std::vector<mpq_class> rel(len);
    std::atomic<std::size_t> best{len};
    detail::parallel_for(static_cast<std::ptrdiff_t>(len), [&](std::ptrdiff_t i) {
      const auto ui = static_cast<std::size_t>(i);
      if (ui > best.load(std::memory_order_relaxed)) return;
      PointSet s = draw(p, config.seed, start + ui);
      if (guides(tangle, s, rel[ui])) {
        hits[ui] = std::move(s);
        std::size_t cur = best.load();
        while (ui < cur && !best.compare_exchange_weak(cur, ui)) {
        }
      }
    });
    if (best < len) {
      out.set = std::move(hits[best]);
      out.trial = start + best;
      out.reliability = rel[best];
      return out;
    }
  }
  return out;
}

namespace serial {

SampleResult sample_guiding_set(const Tangle& tangle, const GuidingFunction& g, const SamplerConfig& config) {
  SampleResult out = prepare(tangle, g);
  const std::vector<double> p = inclusion_probabilities(g);
  for (std::size_t t = 1; t <= config.max_trials; ++t) {
    PointSet s = draw(p, config.seed, t);
    mpq_class rel;
    if (guides(tangle, s, rel)) {
      out.set = std::move(s);
      out.trial = t;
      out.reliability = rel;
      return out;
    }
  }
  return out;
}

}  // namespace serial

}  // namespace tanglekit
