#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tanglekit/core.hpp"

namespace tanglekit {

enum class ArithmeticMode { Auto, Rational, Float };
std::string to_string(ArithmeticMode mode);

/// Weights are held as exact rationals in both modes; in float mode they are
/// the exact values of the doubles the solver produced.
struct GuidingFunction {
  std::vector<mpq_class> weights;  // one per point
  ArithmeticMode mode = ArithmeticMode::Rational;

  /// Throws LengthMismatch, InvalidParam (negative weight), NotNormalized.
  static GuidingFunction make(std::size_t ground_size, std::vector<mpq_class> weights,
                              ArithmeticMode mode = ArithmeticMode::Rational);
  static GuidingFunction uniform(std::size_t ground_size);
  /// 1/|G| on G. Throws EmptySet.
  static GuidingFunction indicator(const PointSet& g);

  [[nodiscard]] mpq_class max_weight() const;
};

struct DualWitness {
  std::vector<mpq_class> weights;  // one per separation
  mpq_class rho;
};

enum class Branch { Guiding, Witness };
std::string to_string(Branch branch);

struct GuidanceCertificate {
  Branch branch = Branch::Guiding;
  mpq_class rho;
  mpq_class lp_optimum;  // c*_ρ
  ArithmeticMode mode = ArithmeticMode::Rational;
  std::optional<GuidingFunction> guiding;
  std::optional<DualWitness> witness;
  bool verified = false;
};

/// min over big sides of |G ∩ A| / |G| (1 for an empty system). Throws EmptySet.
mpq_class set_reliability(const Tangle& tangle, const PointSet& g);
/// min over big sides of Σ_{v∈A} g(v). Throws NotNormalized.
mpq_class function_reliability(const Tangle& tangle, const GuidingFunction& g);
/// Same minimum taken over the minimal big sides only.
mpq_class function_reliability_minimal(const Tangle& tangle, const GuidingFunction& g);

/// Independent re-check of a certificate against the tangle: side masses
/// >= ρ for a guiding function, point masses < ρ (strictly) for a witness.
bool verify_certificate(const Tangle& tangle, const GuidanceCertificate& cert);

/// Exactly one of: a guiding function of reliability >= ρ, or weights h on
/// separations with every point's incident mass < ρ. Throws InvalidParam for
/// ρ outside [0,1], LPFailure if the LP is not solved to optimality.
GuidanceCertificate guiding_duality(const Tangle& tangle, const mpq_class& rho,
                                    ArithmeticMode mode = ArithmeticMode::Auto);

struct MaxReliability {
  mpq_class rho_star;
  mpq_class c_star_one;  // c*_1
  GuidingFunction g_star;
  ArithmeticMode mode = ArithmeticMode::Rational;
};

/// ρ* = min(1, 1/c*_1) from a single LP solve at ρ = 1.
MaxReliability max_reliability(const Tangle& tangle, ArithmeticMode mode = ArithmeticMode::Auto);

/// Rational for at most 64 points and 64 separations, float otherwise.
ArithmeticMode resolve_mode(const Tangle& tangle, ArithmeticMode requested);

struct SamplerCondition {
  mpq_class lhs;
  bool holds = false;
};

/// Σ_v g(v)(1 − g(v)η)/(4η) · Σ_{A∈τ_min} 1/(ρ_A − ½)² compared to 1, with
/// η = 1/max g. Throws NotGuiding when ρ_g <= 1/2.
SamplerCondition sampler_condition(const Tangle& tangle, const GuidingFunction& g);

struct CorollaryCondition {
  mpq_class delta;    // ρ_g − ½
  mpq_class epsilon;  // 1/(n · max g)
  mpq_class rhs;      // 4δ²ε²|V|
  std::size_t minimal_count = 0;
  bool holds = false;
};

/// |τ_min| < 4δ²ε²|V| as printed. Throws NotGuiding when ρ_g <= 1/2.
CorollaryCondition corollary_condition(const Tangle& tangle, const GuidingFunction& g);

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t max_trials = 10000;
};

struct SampleResult {
  std::optional<PointSet> set;  // nullopt: not found within max_trials
  std::size_t trial = 0;        // 1-based index of the returned draw
  mpq_class reliability;
  bool condition_held = false;
};

/// Draws G with independent inclusions of probability g(v)·η per trial and
/// returns the first draw with reliability > 1/2. Trial t uses its own RNG
/// stream derived from (seed, t), so the outcome does not depend on threads.
SampleResult sample_guiding_set(const Tangle& tangle, const GuidingFunction& g, const SamplerConfig& config);

/// The draw of trial `trial` (1-based); exposed for reproducibility tests.
PointSet sampler_draw(const GuidingFunction& g, std::uint64_t seed, std::size_t trial);

namespace serial {

SampleResult sample_guiding_set(const Tangle& tangle, const GuidingFunction& g, const SamplerConfig& config);

}  // namespace serial

}  // namespace tanglekit
