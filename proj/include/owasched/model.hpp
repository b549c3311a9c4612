#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "owasched/errors.hpp"
#include "owasched/rational.hpp"

namespace owasched {

enum class Objective { MaxWeightedTardiness, WeightedCompletionSum };

inline const char* objective_name(Objective o) {
  return o == Objective::MaxWeightedTardiness ? "max_wt" : "sum_wc";
}

// A scheduling instance under discrete scenario uncertainty. Parameter
// matrices are n rows (jobs) by K columns (scenarios). Jobs and scenarios
// are 0-based internally; file formats are 1-based.
struct Instance {
  int n = 0;
  int K = 0;
  Objective objective = Objective::MaxWeightedTardiness;
  std::vector<std::vector<Rational>> proc;
  std::vector<std::vector<Rational>> due;
  std::vector<std::vector<Rational>> weight;
  std::vector<std::pair<int, int>> prec;  // edge (i, j): i must precede j

  bool operator==(const Instance&) const = default;
};

// A feasible processing sequence: order[r] is the job at position r.
struct Schedule {
  std::vector<int> order;

  bool operator==(const Schedule&) const = default;
  bool operator<(const Schedule& o) const { return order < o.order; }
};

// costs[i] = f(pi, S_i).
using CostVector = std::vector<Rational>;

struct SolveReport {
  Schedule schedule;
  Rational objective;
  std::optional<double> lower_bound;    // LP-derived bounds are approximate
  std::optional<Rational> guarantee;    // a-priori ratio; absent when unbounded
  std::map<std::string, std::int64_t> stats;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

namespace detail {

// Returns a topological order of {0..n-1}, or a witness cycle in `cycle`.
inline std::optional<std::vector<int>> topological_order(
    int n, const std::vector<std::pair<int, int>>& edges, std::vector<int>* cycle = nullptr) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) adj[a].push_back(b);
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<int> order;
  std::vector<int> stack;
  order.reserve(n);

  auto dfs = [&](auto&& self, int u) -> bool {
    state[u] = 1;
    stack.push_back(u);
    for (int v : adj[u]) {
      if (state[v] == 1) {
        if (cycle) {
          auto it = std::find(stack.begin(), stack.end(), v);
          cycle->assign(it, stack.end());
          cycle->push_back(v);
        }
        return false;
      }
      if (state[v] == 0 && !self(self, v)) return false;
    }
    stack.pop_back();
    state[u] = 2;
    order.push_back(u);
    return true;
  };
  for (int u = 0; u < n; ++u)
    if (state[u] == 0 && !dfs(dfs, u)) return std::nullopt;
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace detail

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto bad = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (inst.n < 1) bad("job count must be >= 1, got " + std::to_string(inst.n));
  if (inst.K < 1) bad("scenario count must be >= 1, got " + std::to_string(inst.K));
  if (inst.n < 1 || inst.K < 1) return report;

  auto check_matrix = [&](const std::vector<std::vector<Rational>>& m, const char* name) {
    if (static_cast<int>(m.size()) != inst.n) {
      bad(std::string(name) + ": dimension mismatch, expected " + std::to_string(inst.n) +
          " rows, got " + std::to_string(m.size()));
      return;
    }
    for (int j = 0; j < inst.n; ++j) {
      if (static_cast<int>(m[j].size()) != inst.K) {
        bad(std::string(name) + " row " + std::to_string(j + 1) +
            ": dimension mismatch, expected " + std::to_string(inst.K) + " columns, got " +
            std::to_string(m[j].size()));
        continue;
      }
      for (int i = 0; i < inst.K; ++i)
        if (m[j][i].is_negative())
          bad(std::string(name) + "[" + std::to_string(j + 1) + "][" + std::to_string(i + 1) +
              "] is negative: " + m[j][i].str());
    }
  };
  check_matrix(inst.proc, "proc");
  check_matrix(inst.due, "due");
  check_matrix(inst.weight, "weight");

  bool edges_ok = true;
  for (const auto& [a, b] : inst.prec) {
    if (a < 0 || a >= inst.n || b < 0 || b >= inst.n) {
      bad("precedence pair (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
          ") out of range");
      edges_ok = false;
    }
  }
  if (edges_ok) {
    std::vector<int> cycle;
    if (!detail::topological_order(inst.n, inst.prec, &cycle)) {
      std::string msg = "cycle: ";
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i) msg += "->";
        msg += std::to_string(cycle[i] + 1);
      }
      bad(msg);
    }
  }

  if (inst.objective == Objective::WeightedCompletionSum) {
    for (const auto& row : inst.due)
      for (const auto& d : row)
        if (!d.is_zero()) {
          report.warnings.push_back("due dates are ignored under the sum_wc objective");
          goto warned;
        }
  warned:;
  }
  return report;
}

// First problem found, or nullopt if `sched` is a feasible permutation.
inline std::optional<std::string> validate_schedule(const Instance& inst, const Schedule& sched) {
  if (static_cast<int>(sched.order.size()) != inst.n)
    return "schedule has " + std::to_string(sched.order.size()) + " entries, instance has " +
           std::to_string(inst.n) + " jobs";
  std::vector<int> position(inst.n, -1);
  for (int r = 0; r < inst.n; ++r) {
    int j = sched.order[r];
    if (j < 0 || j >= inst.n) return "job index " + std::to_string(j + 1) + " out of range";
    if (position[j] >= 0) return "job " + std::to_string(j + 1) + " appears twice";
    position[j] = r;
  }
  for (const auto& [a, b] : inst.prec)
    if (position[a] > position[b])
      return "precedence violation: " + std::to_string(a + 1) + "->" + std::to_string(b + 1);
  return std::nullopt;
}

inline void require_scenario(const Instance& inst, int scenario) {
  if (scenario < 0 || scenario >= inst.K)
    throw std::out_of_range("scenario index " + std::to_string(scenario + 1) +
                            " out of range [1," + std::to_string(inst.K) + "]");
}

// Completion time per job (indexed by job, not position) under one scenario.
inline std::vector<Rational> completion_times(const Instance& inst, const Schedule& sched,
                                              int scenario) {
  require_scenario(inst, scenario);
  std::vector<Rational> completion(inst.n);
  Rational clock;
  for (int j : sched.order) {
    clock += inst.proc[j][scenario];
    completion[j] = clock;
  }
  return completion;
}

inline Rational cost(const Instance& inst, const Schedule& sched, int scenario) {
  require_scenario(inst, scenario);
  Rational clock;
  Rational total;
  if (inst.objective == Objective::MaxWeightedTardiness) {
    for (int j : sched.order) {
      clock += inst.proc[j][scenario];
      Rational late = clock - inst.due[j][scenario];
      if (late.is_negative()) continue;
      Rational wt = inst.weight[j][scenario] * late;
      if (wt > total) total = wt;
    }
  } else {
    for (int j : sched.order) {
      clock += inst.proc[j][scenario];
      total += inst.weight[j][scenario] * clock;
    }
  }
  return total;
}

inline CostVector cost_vector(const Instance& inst, const Schedule& sched) {
  CostVector costs(inst.K);
  for (int i = 0; i < inst.K; ++i) costs[i] = cost(inst, sched, i);
  return costs;
}

// Swaps the roles of processing times and weights per scenario and reverses
// the precedence relation. Together with invert_schedule this preserves the
// weighted completion-time cost under every scenario.
inline Instance invert_instance(const Instance& inst) {
  if (inst.objective != Objective::WeightedCompletionSum)
    throw PreconditionError("invert_instance requires the sum_wc objective");
  Instance out = inst;
  out.proc = inst.weight;
  out.weight = inst.proc;
  for (auto& [a, b] : out.prec) std::swap(a, b);
  return out;
}

inline Schedule invert_schedule(const Schedule& sched) {
  Schedule out = sched;
  std::reverse(out.order.begin(), out.order.end());
  return out;
}

struct ParamExtrema {
  Rational p_min, p_max, w_min, w_max;
};

inline ParamExtrema instance_extrema(const Instance& inst) {
  ParamExtrema e{inst.proc[0][0], inst.proc[0][0], inst.weight[0][0], inst.weight[0][0]};
  for (int j = 0; j < inst.n; ++j)
    for (int i = 0; i < inst.K; ++i) {
      e.p_min = std::min(e.p_min, inst.proc[j][i]);
      e.p_max = std::max(e.p_max, inst.proc[j][i]);
      e.w_min = std::min(e.w_min, inst.weight[j][i]);
      e.w_max = std::max(e.w_max, inst.weight[j][i]);
    }
  return e;
}

inline bool column_constant(const std::vector<std::vector<Rational>>& m) {
  for (const auto& row : m)
    for (const auto& v : row)
      if (v != row[0]) return false;
  return true;
}

inline bool deterministic_proc(const Instance& inst) { return column_constant(inst.proc); }
inline bool deterministic_weight(const Instance& inst) { return column_constant(inst.weight); }

inline bool integral_parameters(const Instance& inst) {
  for (const auto* m : {&inst.proc, &inst.due, &inst.weight})
    for (const auto& row : *m)
      for (const auto& v : row)
        if (!v.is_integer()) return false;
  return true;
}

// Multiplies every parameter by the LCM of all denominators. The schedule
// ranking is unchanged: all costs scale by the same positive constant.
inline std::pair<Instance, std::int64_t> scale_to_integers(const Instance& inst) {
  std::int64_t lcm = 1;
  auto fold = [&](std::int64_t den) {
    __int128 next = static_cast<__int128>(lcm) / std::gcd(lcm, den) * den;
    if (next > std::numeric_limits<std::int64_t>::max())
      throw std::overflow_error("scale_to_integers: denominator lcm overflows int64");
    lcm = static_cast<std::int64_t>(next);
  };
  for (const auto* m : {&inst.proc, &inst.due, &inst.weight})
    for (const auto& row : *m)
      for (const auto& v : row) fold(v.den());
  Instance out = inst;
  for (auto* m : {&out.proc, &out.due, &out.weight})
    for (auto& row : *m)
      for (auto& v : row) v *= Rational(lcm);
  return {std::move(out), lcm};
}

}  // namespace owasched
