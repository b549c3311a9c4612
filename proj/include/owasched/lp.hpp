#pragma once

// Small dense LP layer: a two-phase primal simplex over doubles, a residual
// checker, a plain-text dump for debugging, and the builder for the
// cumulative-cost LP pair.  The solver is deterministic: identical inputs
// take identical pivots, so repeated solves agree bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "owasched/errors.hpp"
#include "owasched/rational.hpp"

namespace owasched {

struct LinearProgram {
  enum class Rel { Le, Eq, Ge };
  struct Row {
    std::vector<double> a;
    Rel rel = Rel::Le;
    double rhs = 0.0;
  };

  std::vector<double> objective;  // always minimized
  std::vector<Row> rows;
  std::vector<double> lower;  // must be finite
  std::vector<double> upper;  // +infinity allowed

  int vars() const { return static_cast<int>(objective.size()); }

  int add_variable(double lo, double hi, double cost) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return vars() - 1;
  }

  void add_row(std::vector<double> a, Rel rel, double rhs) {
    rows.push_back(Row{std::move(a), rel, rhs});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double value = 0.0;
  std::vector<double> x;  // populated only when optimal
  std::int64_t pivots = 0;
};

// Largest absolute violation of the rows and bounds at x.
inline double lp_max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (int j = 0; j < lp.vars(); ++j) lhs += row.a[j] * x[j];
    double gap = 0.0;
    if (row.rel == LinearProgram::Rel::Le) gap = lhs - row.rhs;
    if (row.rel == LinearProgram::Rel::Ge) gap = row.rhs - lhs;
    if (row.rel == LinearProgram::Rel::Eq) gap = std::abs(lhs - row.rhs);
    worst = std::max(worst, gap);
  }
  for (int j = 0; j < lp.vars(); ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

inline std::string write_lp_format(const LinearProgram& lp) {
  std::ostringstream os;
  auto term = [&](double c, int j, bool lead) {
    if (c >= 0 && !lead) os << " +";
    if (c < 0) os << " -";
    if (lead && c < 0) os << "-";
    os << std::abs(c) << " x" << j;
  };
  os << "Minimize\n obj:";
  for (int j = 0; j < lp.vars(); ++j)
    if (lp.objective[j] != 0.0) term(lp.objective[j], j, false);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    os << " r" << i << ":";
    bool any = false;
    for (int j = 0; j < lp.vars(); ++j)
      if (row.a[j] != 0.0) {
        term(row.a[j], j, false);
        any = true;
      }
    if (!any) os << " 0 x0";
    switch (row.rel) {
      case LinearProgram::Rel::Le: os << " <= "; break;
      case LinearProgram::Rel::Eq: os << " = "; break;
      case LinearProgram::Rel::Ge: os << " >= "; break;
    }
    os << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.vars(); ++j) {
    if (std::isfinite(lp.upper[j]))
      os << " " << lp.lower[j] << " <= x" << j << " <= " << lp.upper[j] << "\n";
    else
      os << " x" << j << " >= " << lp.lower[j] << "\n";
  }
  os << "End\n";
  return os.str();
}

namespace detail {

constexpr double kLpPivotEps = 1e-9;
constexpr double kLpCostEps = 1e-9;
constexpr double kLpPhase1Eps = 1e-7;

}  // namespace detail

// Two-phase primal simplex.  Fixed variables are substituted away, the rest
// are shifted to start at zero, and finite spans become explicit rows, so
// the core works on the standard form min c y, Ay = b, y >= 0.  Entering
// columns follow Dantzig's rule and fall back to Bland's once the pivot
// count passes a size-dependent mark, which rules out cycling; the leaving
// row always breaks ties toward the smallest basic variable index.
inline LpSolution lp_solve(const LinearProgram& lp, std::int64_t max_pivots = 0) {
  using Rel = LinearProgram::Rel;
  const int n = lp.vars();
  if (static_cast<int>(lp.lower.size()) != n || static_cast<int>(lp.upper.size()) != n)
    throw PreconditionError("lp_solve: bound arrays must match the variable count");
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.a.size()) != n)
      throw PreconditionError("lp_solve: row width must match the variable count");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j]))
      throw PreconditionError("lp_solve: lower bounds must be finite");
    if (std::isnan(lp.upper[j]) || std::isnan(lp.objective[j]))
      throw PreconditionError("lp_solve: objective and bounds must not be NaN");
  }

  LpSolution sol;
  for (int j = 0; j < n; ++j)
    if (lp.lower[j] > lp.upper[j]) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }

  // Substitute fixed variables, shift the rest down to zero.
  std::vector<int> live;
  std::vector<double> base(n);
  for (int j = 0; j < n; ++j) {
    base[j] = lp.lower[j];
    if (lp.upper[j] - lp.lower[j] > 1e-12) live.push_back(j);
  }
  const int nl = static_cast<int>(live.size());

  struct NormRow {
    std::vector<double> a;
    Rel rel;
    double rhs;
  };
  std::vector<NormRow> work;
  work.reserve(lp.rows.size() + live.size());
  for (const auto& row : lp.rows) {
    NormRow r{std::vector<double>(nl), row.rel, row.rhs};
    for (int j = 0; j < n; ++j) r.rhs -= row.a[j] * base[j];
    for (int q = 0; q < nl; ++q) r.a[q] = row.a[live[q]];
    work.push_back(std::move(r));
  }
  for (int q = 0; q < nl; ++q) {
    double span = lp.upper[live[q]] - lp.lower[live[q]];
    if (!std::isfinite(span)) continue;
    NormRow r{std::vector<double>(nl, 0.0), Rel::Le, span};
    r.a[q] = 1.0;
    work.push_back(std::move(r));
  }

  int m = static_cast<int>(work.size());
  int slacks = 0;
  for (const auto& r : work)
    if (r.rel != Rel::Eq) ++slacks;
  const int cols = nl + slacks;  // artificial columns appended below

  std::vector<std::vector<double>> T(m);
  std::vector<double> rhs(m);
  std::vector<int> basis(m, -1);
  {
    int s = 0;
    for (int i = 0; i < m; ++i) {
      T[i].assign(cols, 0.0);
      for (int q = 0; q < nl; ++q) T[i][q] = work[i].a[q];
      rhs[i] = work[i].rhs;
      int sc = -1;
      if (work[i].rel != Rel::Eq) {
        sc = nl + s++;
        T[i][sc] = work[i].rel == Rel::Le ? 1.0 : -1.0;
      }
      if (rhs[i] < 0) {
        for (auto& v : T[i]) v = -v;
        rhs[i] = -rhs[i];
      }
      if (sc >= 0 && T[i][sc] > 0.5) basis[i] = sc;
    }
  }
  int art = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] < 0) ++art;
  const int total = cols + art;
  {
    int a = 0;
    for (int i = 0; i < m; ++i) {
      T[i].resize(total, 0.0);
      if (basis[i] < 0) {
        basis[i] = cols + a++;
        T[i][basis[i]] = 1.0;
      }
    }
  }

  if (max_pivots <= 0) max_pivots = 10000 + 50LL * (m + total);
  const std::int64_t bland_after = 100 + 10LL * (m + total);

  auto pivot = [&](int row, int col) {
    double inv = 1.0 / T[row][col];
    for (int j = 0; j < total; ++j) T[row][j] *= inv;
    rhs[row] *= inv;
    if (rhs[row] < 0 && rhs[row] > -detail::kLpPivotEps) rhs[row] = 0.0;
    T[row][col] = 1.0;  // keep the unit entry exact
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double factor = T[i][col];
      if (factor == 0.0) continue;
      for (int j = 0; j < total; ++j) T[i][j] -= factor * T[row][j];
      T[i][col] = 0.0;
      rhs[i] -= factor * rhs[row];
      if (rhs[i] < 0 && rhs[i] > -detail::kLpPivotEps) rhs[i] = 0.0;
    }
    basis[row] = col;
    ++sol.pivots;
  };

  // Runs the simplex loop for the given costs over the first `width`
  // columns.  Returns Optimal, Unbounded or IterationLimit.
  auto run = [&](const std::vector<double>& costs, int width) -> LpStatus {
    std::vector<double> red(costs.begin(), costs.begin() + width);
    for (int i = 0; i < m; ++i) {
      double cb = costs[basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < width; ++j) red[j] -= cb * T[i][j];
    }
    for (;;) {
      int enter = -1;
      if (sol.pivots < bland_after) {
        double best = -detail::kLpCostEps;
        for (int j = 0; j < width; ++j)
          if (red[j] < best) {
            best = red[j];
            enter = j;
          }
      } else {
        for (int j = 0; j < width; ++j)
          if (red[j] < -detail::kLpCostEps) {
            enter = j;
            break;
          }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (T[i][enter] <= detail::kLpPivotEps) continue;
        double ratio = rhs[i] / T[i][enter];
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      if (sol.pivots >= max_pivots) return LpStatus::IterationLimit;

      double enter_red = red[enter];
      pivot(leave, enter);
      for (int j = 0; j < width; ++j) red[j] -= enter_red * T[leave][j];
      red[enter] = 0.0;
    }
  };

  // Phase 1: drive the artificial variables to zero.
  if (art > 0) {
    std::vector<double> costs(total, 0.0);
    for (int j = cols; j < total; ++j) costs[j] = 1.0;
    LpStatus st = run(costs, total);
    if (st == LpStatus::IterationLimit) {
      sol.status = st;
      return sol;
    }
    if (st == LpStatus::Unbounded)
      throw LpError("lp_solve: phase 1 reported unbounded, which cannot happen");
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= cols) infeas += rhs[i];
    if (infeas > detail::kLpPhase1Eps) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Pivot leftover artificials out of the basis; rows that cannot be
    // pivoted are linearly dependent and can be dropped.
    for (int i = m - 1; i >= 0; --i) {
      if (basis[i] < cols) continue;
      int col = -1;
      for (int j = 0; j < cols; ++j)
        if (std::abs(T[i][j]) > detail::kLpPivotEps) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
      } else {
        T.erase(T.begin() + i);
        rhs.erase(rhs.begin() + i);
        basis.erase(basis.begin() + i);
        --m;
      }
    }
  }

  // Phase 2: the real objective; artificial columns are out of bounds.
  {
    std::vector<double> costs(total, 0.0);
    for (int q = 0; q < nl; ++q) costs[q] = lp.objective[live[q]];
    LpStatus st = run(costs, cols);
    if (st != LpStatus::Optimal) {
      sol.status = st;
      return sol;
    }
  }

  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) sol.x[j] = base[j];
  for (int i = 0; i < m; ++i)
    if (basis[i] < nl) sol.x[live[basis[i]]] = base[live[basis[i]]] + rhs[i];
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
  sol.status = LpStatus::Optimal;
  return sol;
}

// The LP pair behind the cumulative-cost identity.  For nonnegative costs f
// and 1 <= k <= K, both programs' optima equal the sum of the k largest
// entries of f.  The second program is a maximization returned in negated
// form, so lp_solve(pair.dual).value == -lp_solve(pair.primal).value.
struct ThetaLpPair {
  LinearProgram primal;
  LinearProgram dual;
};

inline ThetaLpPair theta_lp_pair(const std::vector<Rational>& f, int k) {
  const int K = static_cast<int>(f.size());
  if (K < 1) throw PreconditionError("theta_lp_pair: cost vector must be nonempty");
  if (k < 1 || k > K)
    throw PreconditionError("theta_lp_pair: k must lie in [1, K], got " + std::to_string(k));
  for (const auto& fi : f)
    if (fi.is_negative()) throw PreconditionError("theta_lp_pair: costs must be nonnegative");

  const double inf = std::numeric_limits<double>::infinity();
  ThetaLpPair out;

  // min sum_i u_i - (K-k) r  s.t.  r <= u_i,  u_i >= f_i,  r >= 0
  auto& P = out.primal;
  for (int i = 0; i < K; ++i) P.add_variable(f[i].to_double(), inf, 1.0);
  int r = P.add_variable(0.0, inf, -static_cast<double>(K - k));
  for (int i = 0; i < K; ++i) {
    std::vector<double> row(P.vars(), 0.0);
    row[r] = 1.0;
    row[i] = -1.0;
    P.add_row(std::move(row), LinearProgram::Rel::Le, 0.0);
  }

  // max sum_i f_i b_i  s.t.  a_i + b_i <= 1,  sum_i a_i >= K - k,  a, b >= 0
  auto& D = out.dual;
  for (int i = 0; i < K; ++i) D.add_variable(0.0, inf, 0.0);                  // a_i
  for (int i = 0; i < K; ++i) D.add_variable(0.0, inf, -f[i].to_double());    // b_i
  for (int i = 0; i < K; ++i) {
    std::vector<double> row(2 * K, 0.0);
    row[i] = 1.0;
    row[K + i] = 1.0;
    D.add_row(std::move(row), LinearProgram::Rel::Le, 1.0);
  }
  std::vector<double> cover(2 * K, 0.0);
  for (int i = 0; i < K; ++i) cover[i] = 1.0;
  D.add_row(std::move(cover), LinearProgram::Rel::Ge, static_cast<double>(K - k));

  return out;
}

}  // namespace owasched
