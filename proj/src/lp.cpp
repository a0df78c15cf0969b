#include "tanglekit/lp.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "tanglekit/error.hpp"

namespace tanglekit {

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

template <class T>
void LinearProgram<T>::validate() const {
  if (A.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch, "matrix has " + std::to_string(A.size()) + " rows but b has " +
                                               std::to_string(b.size()) + " entries");
  }
  for (const auto& row : A) {
    if (row.size() != c.size()) {
      throw Error(ErrorKind::LengthMismatch, "matrix row of length " + std::to_string(row.size()) +
                                                 " for " + std::to_string(c.size()) + " variables");
    }
  }
  if constexpr (std::is_same_v<T, double>) {
    auto finite = [](double v) { return std::isfinite(v); };
    for (const auto& row : A) {
      for (double v : row) {
        if (!finite(v)) throw Error(ErrorKind::InvalidParam, "non-finite matrix entry");
      }
    }
    for (double v : b) {
      if (!finite(v)) throw Error(ErrorKind::InvalidParam, "non-finite bound");
    }
    for (double v : c) {
      if (!finite(v)) throw Error(ErrorKind::InvalidParam, "non-finite objective coefficient");
    }
  }
}

namespace {

template <class T>
struct Num;

template <>
struct Num<mpq_class> {
  static bool pos(const mpq_class& v) { return sgn(v) > 0; }
  static bool neg(const mpq_class& v) { return sgn(v) < 0; }
  static bool zero(const mpq_class& v) { return sgn(v) == 0; }
};

template <>
struct Num<double> {
  static constexpr double eps = 1e-9;
  static bool pos(double v) { return v > eps; }
  static bool neg(double v) { return v < -eps; }
  static bool zero(double v) { return std::abs(v) <= eps; }
};

template <class T>
class Tableau {
 public:
  explicit Tableau(const LinearProgram<T>& lp) : m_(lp.num_constraints()), n_(lp.num_vars()) {
    std::size_t artificial = 0;
    for (const T& bi : lp.b) artificial += Num<T>::neg(bi) ? 1 : 0;
    cols_ = n_ + m_ + artificial;
    rows_.assign(m_, std::vector<T>(cols_ + 1, T(0)));
    basis_.resize(m_);
    std::size_t next_art = n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      // Rows with negative right-hand side are negated and get an artificial.
      const bool flip = Num<T>::neg(lp.b[i]);
      const T sign = flip ? T(-1) : T(1);
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign * lp.A[i][j];
      rows_[i][n_ + i] = sign;
      rows_[i][cols_] = sign * lp.b[i];
      if (flip) {
        rows_[i][next_art] = T(1);
        basis_[i] = next_art++;
      } else {
        basis_[i] = n_ + i;
      }
    }
  }

  [[nodiscard]] bool artificial(std::size_t j) const { return j >= n_ + m_; }

  // Loads reduced costs for objective `cost` (length cols_) given the basis.
  void load_objective(const std::vector<T>& cost) {
    obj_.assign(cols_ + 1, T(0));
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const T& cb = cost[basis_[i]];
      if (Num<T>::zero(cb)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * rows_[i][j];
    }
  }

  // Runs Bland's rule to optimality; false on unboundedness.
  bool optimize(bool allow_artificial) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && artificial(j)) continue;
        if (Num<T>::pos(obj_[j])) {
          enter = j;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      T best_ratio{};
      for (std::size_t i = 0; i < m_; ++i) {
        const T& a = rows_[i][*enter];
        if (!Num<T>::pos(a)) continue;
        T ratio = rows_[i][cols_] / a;
        if (!leave || ratio < best_ratio ||
            (!Num<T>::pos(ratio - best_ratio) && !Num<T>::neg(ratio - best_ratio) &&
             basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    const T p = rows_[r][e];
    for (std::size_t j = 0; j <= cols_; ++j) rows_[r][j] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const T f = rows_[i][e];
      if (Num<T>::zero(f)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][e] = T(0);
    }
    const T f = obj_[e];
    if (!Num<T>::zero(f)) {
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * rows_[r][j];
    }
    obj_[e] = T(0);
    rows_[r][e] = T(1);
    basis_[r] = e;
  }

  // Pivots zero-level artificials out of the basis where a real column allows.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (!Num<T>::zero(rows_[i][j])) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  [[nodiscard]] T objective_value() const { return -obj_[cols_]; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  [[nodiscard]] std::vector<T> primal() const {
    std::vector<T> x(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    }
    return x;
  }

  // y_i = −(reduced cost of slack i); the tableau column of slack i already
  // carries the row's sign.
  [[nodiscard]] std::vector<T> dual() const {
    std::vector<T> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = -obj_[n_ + i];
    return y;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t cols_ = 0;
  std::vector<std::vector<T>> rows_;
  std::vector<T> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace

namespace {

// GMP arithmetic assumes canonical operands; callers may hand in e.g. 2/4.
template <class T>
LinearProgram<T> normalized(const LinearProgram<T>& lp) {
  LinearProgram<T> out = lp;
  if constexpr (std::is_same_v<T, mpq_class>) {
    for (auto& row : out.A) {
      for (auto& v : row) v.canonicalize();
    }
    for (auto& v : out.b) v.canonicalize();
    for (auto& v : out.c) v.canonicalize();
  }
  return out;
}

}  // namespace

template <class T>
LPSolution<T> solve(const LinearProgram<T>& input) {
  input.validate();
  const LinearProgram<T> lp = normalized(input);
  Tableau<T> tab(lp);
  LPSolution<T> out;

  std::vector<T> phase1(tab.cols(), T(0));
  bool any_artificial = false;
  for (std::size_t j = 0; j < tab.cols(); ++j) {
    if (tab.artificial(j)) {
      phase1[j] = T(-1);
      any_artificial = true;
    }
  }
  if (any_artificial) {
    tab.load_objective(phase1);
    tab.optimize(true);
    if (Num<T>::neg(tab.objective_value())) {
      out.status = LPStatus::Infeasible;
      return out;
    }
    tab.expel_artificials();
  }

  std::vector<T> phase2(tab.cols(), T(0));
  for (std::size_t j = 0; j < lp.num_vars(); ++j) phase2[j] = lp.c[j];
  tab.load_objective(phase2);
  if (!tab.optimize(false)) {
    out.status = LPStatus::Unbounded;
    return out;
  }
  out.status = LPStatus::Optimal;
  out.x = tab.primal();
  out.y = tab.dual();
  out.objective = tab.objective_value();
  if constexpr (std::is_same_v<T, double>) {
    if (!verify(lp, out)) {
      throw Error(ErrorKind::NumericalInstability, "floating simplex result failed verification; retry in rational mode");
    }
  }
  return out;
}

template <class T>
LinearProgram<T> dualize(const LinearProgram<T>& lp) {
  lp.validate();
  LinearProgram<T> d;
  const std::size_t m = lp.num_constraints();
  const std::size_t n = lp.num_vars();
  d.A.assign(n, std::vector<T>(m, T(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) d.A[j][i] = -lp.A[i][j];
  }
  d.b.reserve(n);
  for (const T& v : lp.c) d.b.push_back(-v);
  d.c.reserve(m);
  for (const T& v : lp.b) d.c.push_back(-v);
  return d;
}

template <class T>
bool verify(const LinearProgram<T>& input, const LPSolution<T>& s) {
  const LinearProgram<T> lp = normalized(input);
  if (s.status != LPStatus::Optimal) return false;
  const std::size_t m = lp.num_constraints();
  const std::size_t n = lp.num_vars();
  if (s.x.size() != n || s.y.size() != m) return false;
  // Exact comparisons for rationals; absolute tolerance for doubles.
  auto le = [](const T& a, const T& b) {
    if constexpr (std::is_same_v<T, double>) {
      return a <= b + kFloatGapTolerance;
    } else {
      return a <= b;
    }
  };
  for (const T& v : s.x) {
    if (!le(T(0), v)) return false;
  }
  for (const T& v : s.y) {
    if (!le(T(0), v)) return false;
  }
  for (std::size_t i = 0; i < m; ++i) {
    T lhs(0);
    for (std::size_t j = 0; j < n; ++j) lhs += lp.A[i][j] * s.x[j];
    if (!le(lhs, lp.b[i])) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    T lhs(0);
    for (std::size_t i = 0; i < m; ++i) lhs += lp.A[i][j] * s.y[i];
    if (!le(lp.c[j], lhs)) return false;
  }
  T primal(0);
  T dual(0);
  for (std::size_t j = 0; j < n; ++j) primal += lp.c[j] * s.x[j];
  for (std::size_t i = 0; i < m; ++i) dual += lp.b[i] * s.y[i];
  return le(primal, dual) && le(dual, primal);
}

template struct LinearProgram<mpq_class>;
template struct LinearProgram<double>;
template LPSolution<mpq_class> solve(const LinearProgram<mpq_class>&);
template LPSolution<double> solve(const LinearProgram<double>&);
template LinearProgram<mpq_class> dualize(const LinearProgram<mpq_class>&);
template LinearProgram<double> dualize(const LinearProgram<double>&);
template bool verify(const LinearProgram<mpq_class>&, const LPSolution<mpq_class>&);
template bool verify(const LinearProgram<double>&, const LPSolution<double>&);

}  // namespace tanglekit
