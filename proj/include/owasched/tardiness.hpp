#pragma once

// Solvers for the max weighted tardiness objective under scenario
// uncertainty.  Everything here is built on one backward greedy pass that
// fills the schedule from the last position to the first: at each step it
// looks at the jobs with no unscheduled successor, discards those that
// would violate a per-scenario tardiness cap, and keeps the job whose
// worst-case tardiness at the current end of the horizon is smallest.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "owasched/errors.hpp"
#include "owasched/model.hpp"
#include "owasched/owa.hpp"

namespace owasched {

// Step function t -> min { max_i f(pi, S_i) : f(pi, S_k) <= t }, recorded
// at the left endpoints of its constancy intervals.
struct BreakpointTrace {
  std::vector<Rational> breakpoints;  // strictly increasing
  std::vector<Rational> values;       // nonincreasing, ends at the minmax value
  std::vector<Schedule> schedules;    // witness schedule per breakpoint
};

namespace detail {

inline void require_tardiness(const Instance& inst, const char* who) {
  if (inst.objective != Objective::MaxWeightedTardiness)
    throw PreconditionError(std::string(who) + " requires the max_wt objective");
}

struct GreedyOutcome {
  Schedule schedule;
  Rational objective;  // max cost over the active scenarios
};

// While running the greedy with the single cap (scenario, t), record the
// smallest threshold above t at which some currently blocked job would
// displace a chosen one.  Raising the cap only enlarges the candidate
// pools, so the greedy picks the same jobs until that threshold is hit.
struct SweepProbe {
  int scenario = 0;
  Rational t;
  std::optional<Rational> next;
};

// One backward pass.  `active` selects the scenarios the objective is
// maximized over; `caps` holds (scenario, bound) pairs every scheduled
// job must respect at its own completion time.  Returns nullopt when no
// job is placeable at some position, i.e. the caps are unsatisfiable
// (or the precedence graph is cyclic).
inline std::optional<GreedyOutcome> backward_greedy(
    const Instance& inst, const std::vector<int>& active,
    const std::vector<std::pair<int, Rational>>& caps, SweepProbe* probe = nullptr) {
  const int n = inst.n;

  std::vector<Rational> remaining(inst.K);
  for (int i = 0; i < inst.K; ++i)
    for (int j = 0; j < n; ++j) remaining[i] += inst.proc[j][i];

  // succ_in_d[j] counts direct successors of j that are still unscheduled.
  // A transitive successor inside D always implies a direct one there, so
  // this is enough to recognize the placeable jobs.
  std::vector<int> succ_in_d(n, 0);
  std::vector<std::vector<int>> preds_of(n);
  for (const auto& [a, b] : inst.prec) {
    ++succ_in_d[a];
    preds_of[b].push_back(a);
  }

  std::vector<char> in_d(n, 1);
  std::vector<Rational> frontier_f(n);
  Schedule out;
  out.order.assign(n, -1);
  Rational objective;

  for (int pos = n - 1; pos >= 0; --pos) {
    // Worst tardiness of j over `active` if j finishes when everything
    // still in D has been processed.
    for (int j = 0; j < n; ++j) {
      if (!in_d[j] || succ_in_d[j] != 0) continue;
      Rational f;
      for (int i : active) {
        Rational raw = inst.weight[j][i] * (remaining[i] - inst.due[j][i]);
        if (raw > f) f = raw;
      }
      frontier_f[j] = f;
    }

    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (!in_d[j] || succ_in_d[j] != 0) continue;
      bool ok = true;
      for (const auto& [i, cap] : caps) {
        // cap >= 0, so the positive-part clamp cannot rescue a violation
        if (inst.weight[j][i] * (remaining[i] - inst.due[j][i]) > cap) {
          ok = false;
          break;
        }
      }
      if (ok && (best < 0 || frontier_f[j] < frontier_f[best])) best = j;
    }
    if (best < 0) return std::nullopt;

    if (probe) {
      for (int j = 0; j < n; ++j) {
        if (!in_d[j] || succ_in_d[j] != 0 || j == best) continue;
        Rational raw =
            inst.weight[j][probe->scenario] * (remaining[probe->scenario] - inst.due[j][probe->scenario]);
        if (raw <= probe->t) continue;  // already admitted, cannot flip anything
        bool flips = frontier_f[j] < frontier_f[best] ||
                     (frontier_f[j] == frontier_f[best] && j < best);
        if (flips && (!probe->next || raw < *probe->next)) probe->next = raw;
      }
    }

    out.order[pos] = best;
    if (frontier_f[best] > objective) objective = frontier_f[best];
    in_d[best] = 0;
    for (int a : preds_of[best]) --succ_in_d[a];
    for (int i = 0; i < inst.K; ++i) remaining[i] -= inst.proc[best][i];
  }
  return GreedyOutcome{std::move(out), std::move(objective)};
}

inline std::vector<int> all_scenarios(const Instance& inst) {
  std::vector<int> act(inst.K);
  std::iota(act.begin(), act.end(), 0);
  return act;
}

// Exact C(n, r) while it stays <= cap, otherwise cap + 1.
inline std::int64_t binomial_capped(int n, int r, std::int64_t cap) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  __int128 acc = 1;
  for (int i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;  // exact: a prefix of Pascal's rule
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::int64_t>(acc);
}

}  // namespace detail

// Largest tardiness any job can reach: every job placed last, worst scenario.
inline Rational f_bound(const Instance& inst) {
  detail::require_tardiness(inst, "f_bound");
  std::vector<Rational> total(inst.K);
  for (int i = 0; i < inst.K; ++i)
    for (int j = 0; j < inst.n; ++j) total[i] += inst.proc[j][i];
  Rational bound;
  for (int j = 0; j < inst.n; ++j)
    for (int i = 0; i < inst.K; ++i) {
      Rational raw = inst.weight[j][i] * (total[i] - inst.due[j][i]);
      if (raw > bound) bound = raw;
    }
  return bound;
}

inline SolveReport solve_minmax(const Instance& inst) {
  detail::require_tardiness(inst, "solve_minmax");
  auto out = detail::backward_greedy(inst, detail::all_scenarios(inst), {});
  if (!out) throw PreconditionError("solve_minmax: precedence graph admits no schedule");
  SolveReport rep;
  rep.schedule = std::move(out->schedule);
  rep.objective = std::move(out->objective);
  return rep;
}

// Minimize the max cost over all scenarios subject to f(pi, S_k) <= t.
// Returns nullopt when no schedule satisfies the cap.
inline std::optional<SolveReport> solve_constrained_minmax(const Instance& inst, int scenario,
                                                           const Rational& t) {
  detail::require_tardiness(inst, "solve_constrained_minmax");
  require_scenario(inst, scenario);
  if (t.is_negative())
    throw PreconditionError("solve_constrained_minmax: threshold must be nonnegative");
  auto out = detail::backward_greedy(inst, detail::all_scenarios(inst), {{scenario, t}});
  if (!out) return std::nullopt;
  SolveReport rep;
  rep.schedule = std::move(out->schedule);
  rep.objective = std::move(out->objective);
  return rep;
}

inline SolveReport solve_min_min(const Instance& inst) {
  detail::require_tardiness(inst, "solve_min_min");
  SolveReport rep;
  bool have = false;
  for (int k = 0; k < inst.K; ++k) {
    auto out = detail::backward_greedy(inst, {k}, {});
    if (!out) throw PreconditionError("solve_min_min: precedence graph admits no schedule");
    if (!have || out->objective < rep.objective) {
      rep.schedule = std::move(out->schedule);
      rep.objective = std::move(out->objective);
      have = true;
    }
  }
  return rep;
}

namespace detail {

inline BreakpointTrace sweep_breakpoints(const Instance& inst, int scenario, const Rational& tbar) {
  const auto active = all_scenarios(inst);
  auto base = backward_greedy(inst, {scenario}, {});
  if (!base) throw PreconditionError("hurwicz_breakpoints: precedence graph admits no schedule");
  Rational t = base->objective;  // the smallest cap any schedule can meet

  BreakpointTrace trace;
  const std::size_t limit = static_cast<std::size_t>(inst.n) * inst.n + 1;
  for (;;) {
    SweepProbe probe;
    probe.scenario = scenario;
    probe.t = t;
    auto out = backward_greedy(inst, active, {{scenario, t}}, &probe);
    if (!out) throw Error("hurwicz_breakpoints: cap at the scenario optimum is infeasible");
    trace.breakpoints.push_back(t);
    trace.values.push_back(out->objective);
    trace.schedules.push_back(std::move(out->schedule));
    // Once the unconstrained minmax value is reached the function is flat;
    // likewise when no larger cap changes any greedy decision.
    if (trace.values.back() == tbar || !probe.next) break;
    if (trace.breakpoints.size() >= limit)
      throw Error("hurwicz_breakpoints: sweep exceeded n^2+1 iterations");
    t = *probe.next;
  }
  return trace;
}

}  // namespace detail

inline BreakpointTrace hurwicz_breakpoints(const Instance& inst, int scenario) {
  detail::require_tardiness(inst, "hurwicz_breakpoints");
  require_scenario(inst, scenario);
  return detail::sweep_breakpoints(inst, scenario, solve_minmax(inst).objective);
}

// Minimize alpha * max_i f + (1 - alpha) * min_i f.  The scenario holding
// the min is unknown, so each one is swept in turn; on every constancy
// interval of the capped minmax function the best cap is its left endpoint,
// hence scanning breakpoints is enough.
inline SolveReport solve_hurwicz(const Instance& inst, const Rational& alpha) {
  detail::require_tardiness(inst, "solve_hurwicz");
  if (alpha.is_negative() || alpha > Rational(1))
    throw PreconditionError("solve_hurwicz: alpha must lie in [0, 1]");
  if (alpha == Rational(1)) return solve_minmax(inst);
  if (alpha.is_zero()) return solve_min_min(inst);

  const Rational tbar = solve_minmax(inst).objective;
  const Rational beta = Rational(1) - alpha;
  SolveReport rep;
  std::optional<Rational> best_eval;
  std::int64_t breakpoints = 0;
  for (int k = 0; k < inst.K; ++k) {
    auto trace = detail::sweep_breakpoints(inst, k, tbar);
    breakpoints += static_cast<std::int64_t>(trace.breakpoints.size());
    for (std::size_t v = 0; v < trace.breakpoints.size(); ++v) {
      Rational eval = alpha * trace.values[v] + beta * trace.breakpoints[v];
      if (!best_eval || eval < *best_eval ||
          (eval == *best_eval && trace.schedules[v] < rep.schedule)) {
        best_eval = std::move(eval);
        rep.schedule = std::move(trace.schedules[v]);
      }
    }
  }

  auto costs = cost_vector(inst, rep.schedule);
  const auto [mn, mx] = std::minmax_element(costs.begin(), costs.end());
  rep.objective = alpha * *mx + beta * *mn;
  rep.stats["breakpoints"] = breakpoints;
  return rep;
}

// Minimize the k-th largest scenario cost: dropping any k-1 scenarios and
// solving minmax on the rest covers the optimum, because the k-th largest
// of a vector is the smallest over such drops of the remaining maximum.
inline SolveReport solve_quantile(const Instance& inst, int k, std::int64_t budget = 1000000) {
  detail::require_tardiness(inst, "solve_quantile");
  if (k < 1 || k > inst.K)
    throw PreconditionError("solve_quantile: k must lie in [1, K], got " + std::to_string(k));
  const int drop = k - 1;
  std::int64_t subsets = detail::binomial_capped(inst.K, drop, budget);
  if (subsets > budget)
    throw BudgetExceededError("solve_quantile: C(K, k-1) exceeds the subset budget of " +
                              std::to_string(budget));

  SolveReport rep;
  std::optional<Rational> best;
  std::vector<int> comb(drop);
  std::iota(comb.begin(), comb.end(), 0);
  for (;;) {
    std::vector<int> active;
    active.reserve(inst.K - drop);
    for (int i = 0, c = 0; i < inst.K; ++i) {
      if (c < drop && comb[c] == i)
        ++c;
      else
        active.push_back(i);
    }
    auto out = detail::backward_greedy(inst, active, {});
    if (!out) throw PreconditionError("solve_quantile: precedence graph admits no schedule");
    if (!best || out->objective < *best ||
        (out->objective == *best && out->schedule < rep.schedule)) {
      best = std::move(out->objective);
      rep.schedule = std::move(out->schedule);
    }

    int i = drop - 1;
    while (i >= 0 && comb[i] == inst.K - drop + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int q = i + 1; q < drop; ++q) comb[q] = comb[q - 1] + 1;
  }

  auto costs = cost_vector(inst, rep.schedule);
  std::sort(costs.begin(), costs.end(), std::greater<Rational>());
  rep.objective = costs[k - 1];
  rep.stats["subsets"] = subsets;
  return rep;
}

namespace detail {

// All values the scenario cost can take: w_j * (s - d_j) clamped at zero,
// where s ranges over the processing-time sums of job sets containing j.
// Requires integral parameters.
inline std::vector<Rational> scenario_cost_values(const Instance& inst, int scen) {
  const int n = inst.n;
  std::vector<std::int64_t> p(n);
  Rational guard;  // overflow-checked total so the raw sums below stay in range
  for (int j = 0; j < n; ++j) {
    p[j] = inst.proc[j][scen].num();
    guard += inst.proc[j][scen];
  }

  std::vector<Rational> vals;
  vals.emplace_back(0);
  auto push_value = [&](int j, std::int64_t s) {
    Rational raw = inst.weight[j][scen] * (Rational(s) - inst.due[j][scen]);
    if (raw > Rational(0)) vals.push_back(std::move(raw));
  };

  if (n <= 16) {
    const std::size_t masks = std::size_t(1) << n;
    std::vector<std::int64_t> sums(masks, 0);
    for (std::size_t mask = 1; mask < masks; ++mask) {
      int low = std::countr_zero(mask);
      sums[mask] = sums[mask & (mask - 1)] + p[low];
    }
    for (int j = 0; j < n; ++j) {
      std::vector<std::int64_t> seen;
      seen.reserve(masks >> 1);
      for (std::size_t mask = 0; mask < masks; ++mask)
        if (mask >> j & 1) seen.push_back(sums[mask]);
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (std::int64_t s : seen) push_value(j, s);
    }
  } else {
    std::int64_t total = 0;
    for (int j = 0; j < n; ++j) total += p[j];
    if (total > (std::int64_t(1) << 22))
      throw BudgetExceededError(
          "solve_owa_bounded: processing-time range too large for threshold enumeration");
    const std::size_t words = static_cast<std::size_t>(total) / 64 + 1;
    for (int j = 0; j < n; ++j) {
      // Achievable sums over the other jobs, then shifted by p_j.
      std::vector<std::uint64_t> bits(words, 0);
      bits[0] = 1;
      for (int l = 0; l < n; ++l) {
        if (l == j || p[l] == 0) continue;
        const std::size_t wshift = static_cast<std::size_t>(p[l]) / 64;
        const unsigned bshift = static_cast<unsigned>(p[l] % 64);
        for (std::size_t w = words; w-- > 0;) {
          std::uint64_t shifted = 0;
          if (w >= wshift) {
            shifted = bits[w - wshift] << bshift;
            if (bshift != 0 && w > wshift) shifted |= bits[w - wshift - 1] >> (64 - bshift);
          }
          bits[w] |= shifted;
        }
      }
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t chunk = bits[w];
        while (chunk) {
          int b = std::countr_zero(chunk);
          chunk &= chunk - 1;
          push_value(j, static_cast<std::int64_t>(w * 64 + b) + p[j]);
        }
      }
    }
  }

  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

}  // namespace detail

// Exact OWA minimization by enumerating per-scenario tardiness caps.  A cap
// vector t is workable iff some schedule keeps every scenario cost within
// it, which the backward greedy decides exactly; the OWA of the best
// workable vector equals the OWA optimum because each schedule's own cost
// vector is workable.  Caps only need to range over the achievable cost
// values, and the last coordinate collapses entirely: given caps on the
// others, the best value for it is the capped minmax over that scenario
// alone.  The budget bounds the number of cap prefixes tried.
inline SolveReport solve_owa_bounded(const Instance& inst, const OwaWeights& v,
                                     std::int64_t budget = 10000000) {
  detail::require_tardiness(inst, "solve_owa_bounded");
  if (v.K() != inst.K)
    throw PreconditionError("solve_owa_bounded: weight vector length must equal K");
  if (!integral_parameters(inst))
    throw PreconditionError("solve_owa_bounded: requires integral parameters");
  if (budget < 1) throw PreconditionError("solve_owa_bounded: budget must be positive");
  const int K = inst.K;

  std::vector<std::vector<Rational>> cand(K - 1);
  __int128 prefixes = 1;
  for (int i = 0; i + 1 < K; ++i) {
    cand[i] = detail::scenario_cost_values(inst, i);
    prefixes *= static_cast<std::int64_t>(cand[i].size());
    if (prefixes > budget)
      throw BudgetExceededError("solve_owa_bounded: cap combinations exceed the budget of " +
                                std::to_string(budget));
  }

  // Scenario-wise minima fill in the unchosen coordinates of the pruning
  // bound: OWA is monotone, so no completion can beat the bound.
  std::vector<Rational> minima(K);
  for (int i = 0; i < K; ++i) {
    auto out = detail::backward_greedy(inst, {i}, {});
    if (!out) throw PreconditionError("solve_owa_bounded: precedence graph admits no schedule");
    minima[i] = std::move(out->objective);
  }

  SolveReport rep;
  std::optional<Rational> best;
  std::vector<std::pair<int, Rational>> caps;
  std::vector<Rational> partial(minima);
  std::int64_t leaves = 0, greedy_calls = 0;

  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == K - 1) {
      ++greedy_calls;
      auto out = detail::backward_greedy(inst, {depth}, caps);
      if (!out) return;  // caps unsatisfiable; a larger sibling cap may work
      ++leaves;
      partial[depth] = out->objective;
      Rational val = owa_value(v, partial);
      partial[depth] = minima[depth];
      if (!best || val < *best || (val == *best && out->schedule < rep.schedule)) {
        best = std::move(val);
        rep.schedule = std::move(out->schedule);
      }
      return;
    }
    for (const Rational& t : cand[depth]) {
      partial[depth] = t;
      // The bound grows with t, so once it overshoots nothing further helps;
      // equality still descends to honor the lexicographic tie rule.
      if (best && owa_value(v, partial) > *best) break;
      caps.emplace_back(depth, t);
      bool viable = true;
      if (depth + 2 < K) {
        ++greedy_calls;
        viable = detail::backward_greedy(inst, {}, caps).has_value();
      }
      if (viable) self(self, depth + 1);
      caps.pop_back();
    }
    partial[depth] = minima[depth];
  };
  recurse(recurse, 0);

  rep.objective = owa_value(v, cost_vector(inst, rep.schedule));
  rep.stats["cap_vectors"] = leaves;
  rep.stats["greedy_calls"] = greedy_calls;
  return rep;
}

// Quantile surrogate for arbitrary OWA weights: with k the first index
// carrying weight, the k-th largest cost underestimates the OWA by at
// most the factor 1/v_k, so minimizing it is a 1/v_k-approximation.
inline SolveReport approx_owa_quantile(const Instance& inst, const OwaWeights& v,
                                       std::int64_t budget = 1000000) {
  detail::require_tardiness(inst, "approx_owa_quantile");
  if (v.K() != inst.K)
    throw PreconditionError("approx_owa_quantile: weight vector length must equal K");
  int k = 1;
  while (v.v[k - 1].is_zero()) ++k;  // some entry is positive: the weights sum to 1

  SolveReport rep = solve_quantile(inst, k, budget);
  rep.objective = owa_value(v, cost_vector(inst, rep.schedule));
  rep.guarantee = Rational(1) / v.v[k - 1];
  rep.stats["quantile_k"] = k;
  return rep;
}

}  // namespace owasched
