#pragma once

// Solvers and approximations for the weighted completion time objective:
// per-scenario WSPT, the scenario-aggregation heuristic, LP-relaxation
// rounding for deterministic processing times (or weights, via inversion),
// and the Hurwicz wrapper on top of the rounding scheme.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "owasched/errors.hpp"
#include "owasched/lp.hpp"
#include "owasched/model.hpp"
#include "owasched/owa.hpp"

namespace owasched {

namespace detail {

inline void require_wct(const Instance& inst, const char* who) {
  if (inst.objective != Objective::WeightedCompletionSum)
    throw PreconditionError(std::string(who) + " requires the sum_wc objective");
}

inline void require_no_precedence(const Instance& inst, const char* who) {
  if (!inst.prec.empty())
    throw PreconditionError(std::string(who) + " does not support precedence constraints");
}

}  // namespace detail

// Classic smallest-ratio-first order for one scenario: p_j / w_j
// nondecreasing, zero-weight jobs last, ties toward the lower index.
inline Schedule solve_deterministic_wspt(const std::vector<Rational>& p,
                                         const std::vector<Rational>& w,
                                         const std::vector<std::pair<int, int>>& prec = {}) {
  if (p.size() != w.size() || p.empty())
    throw PreconditionError("solve_deterministic_wspt: p and w must be nonempty and equal length");
  if (!prec.empty())
    throw PreconditionError("solve_deterministic_wspt: precedence constraints are not supported");

  Schedule out;
  out.order.resize(p.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    bool za = w[a].is_zero(), zb = w[b].is_zero();
    if (za || zb) return !za && zb;    // a zero weight means an infinite ratio
    return p[a] * w[b] < p[b] * w[a];  // p_a / w_a < p_b / w_b
  });
  return out;
}

inline SolveReport solve_min_min_wct(const Instance& inst) {
  detail::require_wct(inst, "solve_min_min_wct");
  detail::require_no_precedence(inst, "solve_min_min_wct");

  SolveReport rep;
  bool have = false;
  for (int k = 0; k < inst.K; ++k) {
    std::vector<Rational> p(inst.n), w(inst.n);
    for (int j = 0; j < inst.n; ++j) {
      p[j] = inst.proc[j][k];
      w[j] = inst.weight[j][k];
    }
    Schedule sched = solve_deterministic_wspt(p, w);
    Rational value = cost(inst, sched, k);
    if (!have || value < rep.objective) {
      rep.schedule = std::move(sched);
      rep.objective = std::move(value);
      have = true;
    }
  }
  return rep;
}

// Collapse the scenarios into one deterministic problem: summed processing
// times against OWA-aggregated weights.  Both the direct instance and its
// inverted twin are tried, and the schedule with the smaller true OWA wins;
// the two runs carry the weight-spread and time-spread ratio bounds
// respectively, so the a-priori guarantee is K times the smaller spread.
inline SolveReport approx_aggregate(const Instance& inst, const OwaWeights& v) {
  detail::require_wct(inst, "approx_aggregate");
  detail::require_no_precedence(inst, "approx_aggregate");
  if (v.K() != inst.K)
    throw PreconditionError("approx_aggregate: weight vector length must equal K");
  if (!v.nonincreasing())
    throw PreconditionError("approx_aggregate: OWA weights must be nonincreasing");

  auto aggregate = [&](const Instance& work) {
    std::vector<Rational> p_hat(work.n), w_hat(work.n);
    for (int j = 0; j < work.n; ++j) {
      for (int i = 0; i < work.K; ++i) p_hat[j] += work.proc[j][i];
      w_hat[j] = owa_value(v, work.weight[j]);
    }
    return solve_deterministic_wspt(p_hat, w_hat);
  };

  Schedule direct = aggregate(inst);
  Schedule inverted = invert_schedule(aggregate(invert_instance(inst)));
  Rational direct_owa = owa_value(v, cost_vector(inst, direct));
  Rational inverted_owa = owa_value(v, cost_vector(inst, inverted));

  SolveReport rep;
  bool pick_inverted = inverted_owa < direct_owa;
  rep.schedule = pick_inverted ? std::move(inverted) : std::move(direct);
  rep.objective = pick_inverted ? std::move(inverted_owa) : std::move(direct_owa);
  rep.stats["picked_inverted"] = pick_inverted ? 1 : 0;

  auto ex = instance_extrema(inst);
  std::optional<Rational> spread;
  if (!ex.w_min.is_zero()) spread = ex.w_max / ex.w_min;
  if (!ex.p_min.is_zero()) {
    Rational ps = ex.p_max / ex.p_min;
    if (!spread || ps < *spread) spread = ps;
  }
  if (spread) rep.guarantee = Rational(inst.K) * *spread;
  return rep;
}

// Order-variable relaxation of the OWA problem for deterministic processing
// times.  delta_{ij} = 1 says job i runs before job j; the completion time
// C_j = p_j + sum_l delta_{lj} p_l is substituted into every scenario cost,
// and the cumulative-cost variables (u, r) turn the sorted OWA sum into a
// linear objective, which needs nonincreasing OWA weights.
struct OwaLpModel {
  LinearProgram lp;
  int n = 0;
  int K = 0;

  int delta_col(int i, int j) const { return i * (n - 1) + (j > i ? j - 1 : j); }
  int u_col(int i, int k) const { return n * (n - 1) + i * K + k; }
  int r_col(int k) const { return n * (n - 1) + K * K + k; }
};

inline OwaLpModel build_owa_lp(const Instance& inst, const OwaWeights& v) {
  detail::require_wct(inst, "build_owa_lp");
  if (v.K() != inst.K)
    throw PreconditionError("build_owa_lp: weight vector length must equal K");
  if (!v.nonincreasing())
    throw PreconditionError("build_owa_lp: OWA weights must be nonincreasing");
  if (!deterministic_proc(inst))
    throw PreconditionError(
        "build_owa_lp: requires deterministic processing times; invert the instance first");

  const int n = inst.n, K = inst.K;
  const double inf = std::numeric_limits<double>::infinity();
  OwaLpModel model;
  model.n = n;
  model.K = K;
  auto& lp = model.lp;

  auto dv = deviation_weights(v);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) lp.add_variable(0.0, 1.0, 0.0);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k) lp.add_variable(0.0, inf, dv.v_prime[k].to_double());
  for (int k = 0; k < K; ++k)
    lp.add_variable(0.0, inf, -(Rational(K - (k + 1)) * dv.v_prime[k]).to_double());

  for (const auto& [a, b] : inst.prec) {
    lp.lower[model.delta_col(a, b)] = 1.0;
    lp.upper[model.delta_col(b, a)] = 0.0;
  }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> row(lp.vars(), 0.0);
      row[model.delta_col(i, j)] = 1.0;
      row[model.delta_col(j, i)] = 1.0;
      lp.add_row(std::move(row), LinearProgram::Rel::Eq, 1.0);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int orient = 0; orient < 2; ++orient) {
          std::vector<double> row(lp.vars(), 0.0);
          if (orient == 0) {
            row[model.delta_col(i, j)] = 1.0;
            row[model.delta_col(j, k)] = 1.0;
            row[model.delta_col(k, i)] = 1.0;
          } else {
            row[model.delta_col(j, i)] = 1.0;
            row[model.delta_col(i, k)] = 1.0;
            row[model.delta_col(k, j)] = 1.0;
          }
          lp.add_row(std::move(row), LinearProgram::Rel::Ge, 1.0);
        }

  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) p[j] = inst.proc[j][0].to_double();
  for (int i = 0; i < K; ++i) {
    double fixed = 0.0;
    std::vector<double> wd(n);
    for (int j = 0; j < n; ++j) {
      wd[j] = inst.weight[j][i].to_double();
      fixed += wd[j] * p[j];
    }
    for (int k = 0; k < K; ++k) {
      std::vector<double> row(lp.vars(), 0.0);
      row[model.u_col(i, k)] = 1.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          if (l != j) row[model.delta_col(l, j)] -= wd[j] * p[l];
      lp.add_row(std::move(row), LinearProgram::Rel::Ge, fixed);
    }
  }
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < K; ++i) {
      std::vector<double> row(lp.vars(), 0.0);
      row[model.r_col(k)] = 1.0;
      row[model.u_col(i, k)] = -1.0;
      lp.add_row(std::move(row), LinearProgram::Rel::Le, 0.0);
    }

  return model;
}

struct LpRoundingDetail {
  SolveReport report;
  std::vector<double> c_star;     // relaxed completion times, by job id
  std::vector<Rational> c_round;  // rounded completion times, by job id
  double z_star = 0.0;            // relaxation optimum
  bool inverted = false;          // solved on the inverted instance
};

// Solve the relaxation, sort jobs by relaxed completion time and read off a
// schedule.  Relaxation-feasible completion times always stay within half
// of the rounded ones, so the result is within twice the relaxed optimum,
// which itself bounds the true optimum from below.
inline LpRoundingDetail approx_lp_rounding_detail(const Instance& inst, const OwaWeights& v) {
  detail::require_wct(inst, "approx_lp_rounding");
  if (v.K() != inst.K)
    throw PreconditionError("approx_lp_rounding: weight vector length must equal K");
  if (!v.nonincreasing())
    throw PreconditionError("approx_lp_rounding: OWA weights must be nonincreasing");

  LpRoundingDetail out;
  out.inverted = !deterministic_proc(inst);
  if (out.inverted && !deterministic_weight(inst))
    throw PreconditionError(
        "approx_lp_rounding: requires deterministic processing times or weights");
  const Instance work = out.inverted ? invert_instance(inst) : inst;
  const int n = work.n;

  auto model = build_owa_lp(work, v);
  auto sol = lp_solve(model.lp);
  if (sol.status != LpStatus::Optimal)
    throw LpError(std::string("approx_lp_rounding: relaxation solve failed: ") +
                  lp_status_name(sol.status));
  double residual = lp_max_violation(model.lp, sol.x);
  if (residual > 1e-6)
    throw LpError("approx_lp_rounding: relaxation solution violates constraints by " +
                  std::to_string(residual));

  out.z_star = sol.value;
  out.c_star.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    out.c_star[j] = work.proc[j][0].to_double();
    for (int l = 0; l < n; ++l)
      if (l != j) out.c_star[j] += work.proc[l][0].to_double() * sol.x[model.delta_col(l, j)];
  }

  // Sort by relaxed completion time; a precedence-respecting greedy keeps
  // ties (notably zero-length jobs) in topological order.
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const auto& [a, b] : work.prec) {
    ++indeg[b];
    succ[a].push_back(b);
  }
  Schedule rounded;
  std::vector<char> placed(n, 0);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (placed[j] || indeg[j] != 0) continue;
      if (pick < 0 || out.c_star[j] < out.c_star[pick]) pick = j;
    }
    if (pick < 0)
      throw PreconditionError("approx_lp_rounding: precedence graph admits no schedule");
    placed[pick] = 1;
    rounded.order.push_back(pick);
    for (int b : succ[pick]) --indeg[b];
  }

  out.c_round.assign(n, Rational(0));
  {
    Rational clock;
    for (int j : rounded.order) {
      clock += work.proc[j][0];
      out.c_round[j] = clock;
      double slack = 1e-6 * (1.0 + 2.0 * out.c_star[j]);
      if (out.c_round[j].to_double() > 2.0 * out.c_star[j] + slack)
        throw LpError("approx_lp_rounding: rounded completion exceeded twice the relaxed one");
    }
  }

  auto& rep = out.report;
  rep.schedule = out.inverted ? invert_schedule(rounded) : rounded;
  rep.objective = owa_value(v, cost_vector(inst, rep.schedule));
  if (rep.objective.to_double() > 2.0 * out.z_star + 1e-6 * (1.0 + 2.0 * std::abs(out.z_star)))
    throw LpError("approx_lp_rounding: rounded objective exceeded twice the relaxation bound");
  rep.lower_bound = out.z_star;
  rep.guarantee = Rational(2);
  rep.stats["pivots"] = sol.pivots;
  rep.stats["lp_rows"] = static_cast<std::int64_t>(model.lp.rows.size());
  rep.stats["lp_vars"] = model.lp.vars();
  rep.stats["inverted"] = out.inverted ? 1 : 0;
  return out;
}

inline SolveReport approx_lp_rounding(const Instance& inst, const OwaWeights& v) {
  return approx_lp_rounding_detail(inst, v).report;
}

// Hurwicz for completion-time costs: for each scenario k the criterion with
// the min pinned to S_k is a plain minmax over blended weight scenarios, so
// each candidate comes from the rounding scheme with the maximum preset and
// the best true Hurwicz value wins.  Keeps the factor-2 guarantee.
inline SolveReport solve_hurwicz_wct(const Instance& inst, const Rational& alpha) {
  detail::require_wct(inst, "solve_hurwicz_wct");
  if (alpha.is_negative() || alpha > Rational(1))
    throw PreconditionError("solve_hurwicz_wct: alpha must lie in [0, 1]");

  bool invert = !deterministic_proc(inst);
  if (invert && !deterministic_weight(inst))
    throw PreconditionError(
        "solve_hurwicz_wct: requires deterministic processing times or weights");
  const Instance work = invert ? invert_instance(inst) : inst;
  const Rational beta = Rational(1) - alpha;
  const auto v_max = preset_maximum(work.K);

  SolveReport rep;
  std::optional<Rational> best;
  std::optional<double> bound;
  std::int64_t pivots = 0;
  for (int k = 0; k < work.K; ++k) {
    Instance blended = work;
    for (int j = 0; j < work.n; ++j)
      for (int i = 0; i < work.K; ++i)
        blended.weight[j][i] = alpha * work.weight[j][i] + beta * work.weight[j][k];

    auto sub = approx_lp_rounding_detail(blended, v_max);
    pivots += sub.report.stats["pivots"];
    if (!bound || *sub.report.lower_bound < *bound) bound = *sub.report.lower_bound;

    auto costs = cost_vector(work, sub.report.schedule);
    const auto [mn, mx] = std::minmax_element(costs.begin(), costs.end());
    Rational value = alpha * *mx + beta * *mn;
    if (!best || value < *best || (value == *best && sub.report.schedule < rep.schedule)) {
      best = std::move(value);
      rep.schedule = std::move(sub.report.schedule);
    }
  }

  if (invert) rep.schedule = invert_schedule(rep.schedule);
  auto costs = cost_vector(inst, rep.schedule);
  const auto [mn, mx] = std::minmax_element(costs.begin(), costs.end());
  rep.objective = alpha * *mx + beta * *mn;
  rep.lower_bound = bound;
  rep.guarantee = Rational(2);
  rep.stats["pivots"] = pivots;
  return rep;
}

}  // namespace owasched
