#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tanglekit {

/// max cᵀx subject to Ax <= b, x >= 0, with a dense m×n matrix.
template <class T>
struct LinearProgram {
  std::vector<std::vector<T>> A;
  std::vector<T> b;
  std::vector<T> c;

  [[nodiscard]] std::size_t num_constraints() const noexcept { return b.size(); }
  [[nodiscard]] std::size_t num_vars() const noexcept { return c.size(); }

  /// Throws LengthMismatch on inconsistent dimensions.
  void validate() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };
std::string to_string(LPStatus status);

template <class T>
struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  std::vector<T> x;  // primal, length n
  std::vector<T> y;  // dual, length m
  T objective{};
};

/// Two-phase tableau simplex with the smallest-index pivot rule. At an
/// optimum the dual vector is read off the slack reduced costs. In floating
/// mode the result is re-verified and NumericalInstability is thrown if the
/// check fails.
template <class T>
LPSolution<T> solve(const LinearProgram<T>& lp);

/// min bᵀy s.t. Aᵀy >= c, y >= 0, written back in max form:
/// max −bᵀy s.t. −Aᵀy <= −c. Applying it twice returns the original.
template <class T>
LinearProgram<T> dualize(const LinearProgram<T>& lp);

/// Independent check of an optimal solution: x and y feasible, cᵀx = bᵀy
/// (exactly for rationals, within 1e−8 for doubles).
template <class T>
bool verify(const LinearProgram<T>& lp, const LPSolution<T>& solution);

/// Tolerance used by the floating-point verify().
inline constexpr double kFloatGapTolerance = 1e-8;

extern template struct LinearProgram<mpq_class>;
extern template struct LinearProgram<double>;
extern template LPSolution<mpq_class> solve(const LinearProgram<mpq_class>&);
extern template LPSolution<double> solve(const LinearProgram<double>&);
extern template LinearProgram<mpq_class> dualize(const LinearProgram<mpq_class>&);
extern template LinearProgram<double> dualize(const LinearProgram<double>&);
extern template bool verify(const LinearProgram<mpq_class>&, const LPSolution<mpq_class>&);
extern template bool verify(const LinearProgram<double>&, const LPSolution<double>&);

}  // namespace tanglekit
