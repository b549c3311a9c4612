#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "owasched/errors.hpp"
#include "owasched/model.hpp"
#include "owasched/owa.hpp"
#include "owasched/rational.hpp"

// Brute-force oracles and instance generators: seeded random instances, the
// tight-ratio due-date family, and the three satisfiability reduction
// constructions used as fixtures by the solver tests.

namespace owasched {

struct CnfFormula {
  int variables = 0;
  std::vector<std::vector<int>> clauses;  // signed 1-based literal indices
};

struct Assignment {
  std::vector<bool> bits;  // bits[i] = value assigned to variable i+1
};

inline void check_cnf(const CnfFormula& phi, int max_clause_size) {
  if (phi.variables < 1) throw PreconditionError("cnf: need at least one variable");
  if (phi.clauses.empty()) throw PreconditionError("cnf: need at least one clause");
  for (std::size_t k = 0; k < phi.clauses.size(); ++k) {
    const auto& clause = phi.clauses[k];
    if (clause.empty())
      throw PreconditionError("cnf: clause " + std::to_string(k + 1) + " is empty");
    if (static_cast<int>(clause.size()) > max_clause_size)
      throw PreconditionError("cnf: clause " + std::to_string(k + 1) + " has " +
                              std::to_string(clause.size()) + " literals, limit is " +
                              std::to_string(max_clause_size));
    for (int lit : clause)
      if (lit == 0 || std::abs(lit) > phi.variables)
        throw PreconditionError("cnf: literal " + std::to_string(lit) + " in clause " +
                                std::to_string(k + 1) + " out of range");
  }
}

inline bool literal_true(int lit, const Assignment& a) {
  bool value = a.bits[std::abs(lit) - 1];
  return lit > 0 ? value : !value;
}

inline bool clause_satisfied(const std::vector<int>& clause, const Assignment& a) {
  for (int lit : clause)
    if (literal_true(lit, a)) return true;
  return false;
}

// Simplified DIMACS: optional 'c' comment lines, one 'p cnf <n> <m>' header,
// then zero-terminated clauses (line breaks not significant).
inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  CnfFormula phi;
  int declared_clauses = -1;
  std::vector<int> current;
  std::string tok;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      if (declared_clauses >= 0) throw ParseError("dimacs: duplicate header");
      std::string fmt;
      if (!(in >> fmt >> phi.variables >> declared_clauses) || fmt != "cnf")
        throw ParseError("dimacs: expected 'p cnf <vars> <clauses>' header");
      continue;
    }
    if (declared_clauses < 0) throw ParseError("dimacs: clause before header");
    int lit;
    try {
      lit = std::stoi(tok);
    } catch (const std::exception&) {
      throw ParseError("dimacs: bad token '" + tok + "'");
    }
    if (lit == 0) {
      if (current.empty()) throw ParseError("dimacs: empty clause");
      phi.clauses.push_back(std::move(current));
      current.clear();
    } else {
      if (std::abs(lit) > phi.variables)
        throw ParseError("dimacs: literal " + tok + " out of range");
      current.push_back(lit);
    }
  }
  if (declared_clauses < 0) throw ParseError("dimacs: missing header");
  if (!current.empty()) throw ParseError("dimacs: unterminated clause");
  if (static_cast<int>(phi.clauses.size()) != declared_clauses)
    throw ParseError("dimacs: header declares " + std::to_string(declared_clauses) +
                     " clauses, found " + std::to_string(phi.clauses.size()));
  return phi;
}

// Visits every precedence-feasible permutation in lexicographic order. The
// Schedule reference passed to the visitor is reused between calls.
template <typename Visit>
void for_each_schedule(const Instance& inst, Visit&& visit, int cap = 9) {
  if (inst.n > cap)
    throw BudgetExceededError("schedule enumeration: n=" + std::to_string(inst.n) +
                              " exceeds cap " + std::to_string(cap));
  Schedule sched;
  sched.order.resize(inst.n);
  if (inst.prec.empty()) {
    std::iota(sched.order.begin(), sched.order.end(), 0);
    do {
      visit(static_cast<const Schedule&>(sched));
    } while (std::next_permutation(sched.order.begin(), sched.order.end()));
    return;
  }
  std::vector<int> indeg(inst.n, 0);
  std::vector<std::vector<int>> succ(inst.n);
  for (const auto& [a, b] : inst.prec) {
    succ[a].push_back(b);
    ++indeg[b];
  }
  std::vector<char> placed(inst.n, 0);
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == inst.n) {
      visit(static_cast<const Schedule&>(sched));
      return;
    }
    for (int j = 0; j < inst.n; ++j) {
      if (placed[j] || indeg[j] > 0) continue;
      placed[j] = 1;
      for (int s : succ[j]) --indeg[s];
      sched.order[depth] = j;
      self(self, depth + 1);
      for (int s : succ[j]) ++indeg[s];
      placed[j] = 0;
    }
  };
  rec(rec, 0);
}

inline std::vector<Schedule> enumerate_schedules(const Instance& inst, int cap = 9) {
  std::vector<Schedule> out;
  for_each_schedule(inst, [&](const Schedule& s) { out.push_back(s); }, cap);
  return out;
}

// Evaluates several OWA weight vectors over a single enumeration pass; each
// report is the exact optimum for its vector, ties broken by lexicographically
// smallest schedule (the enumeration order).
inline std::vector<SolveReport> oracle_opt_batch(const Instance& inst,
                                                 const std::vector<OwaWeights>& vs, int cap = 9) {
  for (const auto& v : vs)
    if (v.K() != inst.K)
      throw PreconditionError("oracle: weight vector length " + std::to_string(v.K()) +
                              " does not match K=" + std::to_string(inst.K));
  std::vector<SolveReport> best(vs.size());
  std::vector<char> seen(vs.size(), 0);
  std::int64_t count = 0;
  for_each_schedule(
      inst,
      [&](const Schedule& sched) {
        ++count;
        CostVector costs = cost_vector(inst, sched);
        for (std::size_t q = 0; q < vs.size(); ++q) {
          Rational value = owa_value(vs[q], costs);
          if (!seen[q] || value < best[q].objective) {
            seen[q] = 1;
            best[q].schedule = sched;
            best[q].objective = value;
          }
        }
      },
      cap);
  for (auto& report : best) report.stats["schedules"] = count;
  return best;
}

inline SolveReport oracle_opt(const Instance& inst, const OwaWeights& v, int cap = 9) {
  return oracle_opt_batch(inst, {v}, cap).front();
}

// The 2K-job unit-parameter family whose minmax-optimal schedule can be a
// factor K worse than the OWA optimum under average weights: every due date
// equals the job's index, except that even jobs drop by one under the last
// scenario.
inline Instance gen_tight_ratio(int K) {
  if (K < 2) throw PreconditionError("tight-ratio family needs K >= 2");
  Instance inst;
  inst.n = 2 * K;
  inst.K = K;
  inst.objective = Objective::MaxWeightedTardiness;
  inst.proc.assign(inst.n, std::vector<Rational>(K, Rational(1)));
  inst.weight.assign(inst.n, std::vector<Rational>(K, Rational(1)));
  inst.due.assign(inst.n, std::vector<Rational>(K));
  for (int j = 0; j < inst.n; ++j)
    for (int i = 0; i < K; ++i) {
      int d = j + 1;
      if (j % 2 == 1 && i == K - 1) d -= 1;
      inst.due[j][i] = Rational(d);
    }
  return inst;
}

namespace tkdetail {

// Job rows for variable i (1-based): positive literal then negation.
inline int pos_job(int i) { return 2 * (i - 1); }
inline int neg_job(int i) { return 2 * (i - 1) + 1; }

}  // namespace tkdetail

// Due-date scenario construction: one scenario per clause, unit processing
// times and weights. A literal's own job gets due date 2i-1 under the
// clause's scenario, its partner keeps 2i; untouched variables get 2i twice.
inline Instance gen_cnf_duedates(const CnfFormula& phi) {
  check_cnf(phi, 3);
  int m = static_cast<int>(phi.clauses.size());
  Instance inst;
  inst.n = 2 * phi.variables;
  inst.K = m;
  inst.objective = Objective::MaxWeightedTardiness;
  inst.proc.assign(inst.n, std::vector<Rational>(m, Rational(1)));
  inst.weight.assign(inst.n, std::vector<Rational>(m, Rational(1)));
  inst.due.assign(inst.n, std::vector<Rational>(m));
  for (int i = 1; i <= phi.variables; ++i)
    for (int k = 0; k < m; ++k) {
      inst.due[tkdetail::pos_job(i)][k] = Rational(2 * i);
      inst.due[tkdetail::neg_job(i)][k] = Rational(2 * i);
    }
  for (int k = 0; k < m; ++k)
    for (int lit : phi.clauses[k]) {
      int i = std::abs(lit);
      int own = lit > 0 ? tkdetail::pos_job(i) : tkdetail::neg_job(i);
      int partner = lit > 0 ? tkdetail::neg_job(i) : tkdetail::pos_job(i);
      inst.due[own][k] = Rational(2 * i - 1);
      inst.due[partner][k] = Rational(2 * i);
    }
  return inst;
}

// Weight scenario construction: deterministic unit processing times, due
// dates 2i-1 for both jobs of variable i, weight 1 on the literal's own job
// per clause scenario, plus a final scenario weighting every job by m.
inline Instance gen_cnf_weights(const CnfFormula& phi) {
  check_cnf(phi, 3);
  int m = static_cast<int>(phi.clauses.size());
  Instance inst;
  inst.n = 2 * phi.variables;
  inst.K = m + 1;
  inst.objective = Objective::MaxWeightedTardiness;
  inst.proc.assign(inst.n, std::vector<Rational>(m + 1, Rational(1)));
  inst.weight.assign(inst.n, std::vector<Rational>(m + 1, Rational(0)));
  inst.due.assign(inst.n, std::vector<Rational>(m + 1));
  for (int i = 1; i <= phi.variables; ++i)
    for (int k = 0; k <= m; ++k) {
      inst.due[tkdetail::pos_job(i)][k] = Rational(2 * i - 1);
      inst.due[tkdetail::neg_job(i)][k] = Rational(2 * i - 1);
    }
  for (int k = 0; k < m; ++k)
    for (int lit : phi.clauses[k]) {
      int i = std::abs(lit);
      int own = lit > 0 ? tkdetail::pos_job(i) : tkdetail::neg_job(i);
      inst.weight[own][k] = Rational(1);
    }
  for (int j = 0; j < inst.n; ++j) inst.weight[j][m] = Rational(m);
  return inst;
}

// Completion-time construction for clauses of size <= 2: under a clause's
// scenario the literal's own job is (p,w) = (0,1), its partner (1,0), and
// both jobs of absent variables (0,0). Paired with the weight vector that
// zeroes the L largest costs and averages the rest.
inline std::pair<Instance, OwaWeights> gen_cnf_wct(const CnfFormula& phi, int L) {
  check_cnf(phi, 2);
  int m = static_cast<int>(phi.clauses.size());
  if (L < 0 || L >= m)
    throw PreconditionError("cnf wct: L=" + std::to_string(L) + " outside [0," +
                            std::to_string(m - 1) + "]");
  Instance inst;
  inst.n = 2 * phi.variables;
  inst.K = m;
  inst.objective = Objective::WeightedCompletionSum;
  inst.proc.assign(inst.n, std::vector<Rational>(m, Rational(0)));
  inst.weight.assign(inst.n, std::vector<Rational>(m, Rational(0)));
  inst.due.assign(inst.n, std::vector<Rational>(m, Rational(0)));
  for (int k = 0; k < m; ++k)
    for (int lit : phi.clauses[k]) {
      int i = std::abs(lit);
      int own = lit > 0 ? tkdetail::pos_job(i) : tkdetail::neg_job(i);
      int partner = lit > 0 ? tkdetail::neg_job(i) : tkdetail::pos_job(i);
      inst.proc[own][k] = Rational(0);
      inst.weight[own][k] = Rational(1);
      inst.proc[partner][k] = Rational(1);
      inst.weight[partner][k] = Rational(0);
    }
  std::vector<Rational> v(m);
  for (int k = L; k < m; ++k) v[k] = Rational(1, m - L);
  return {std::move(inst), OwaWeights(std::move(v))};
}

enum class Reduction { DueDates, Weights, Wct };

struct Correspondence {
  Schedule schedule;     // canonical schedule induced by the assignment
  CostVector predicted;  // per-scenario cost the construction promises
};

// Builds the canonical schedule for an assignment and the per-scenario costs
// the reduction proofs predict for it; tests compare `predicted` against the
// evaluated cost vector.
inline Correspondence assignment_cost_correspondence(const CnfFormula& phi, const Assignment& a,
                                                     Reduction which) {
  check_cnf(phi, which == Reduction::Wct ? 2 : 3);
  if (static_cast<int>(a.bits.size()) != phi.variables)
    throw PreconditionError("assignment length " + std::to_string(a.bits.size()) +
                            " does not match " + std::to_string(phi.variables) + " variables");
  int m = static_cast<int>(phi.clauses.size());
  Correspondence out;

  if (which == Reduction::Wct) {
    // False literals' jobs first, then true literals' jobs, each block by
    // ascending variable index.
    for (int i = 1; i <= phi.variables; ++i)
      out.schedule.order.push_back(a.bits[i - 1] ? tkdetail::neg_job(i) : tkdetail::pos_job(i));
    for (int i = 1; i <= phi.variables; ++i)
      out.schedule.order.push_back(a.bits[i - 1] ? tkdetail::pos_job(i) : tkdetail::neg_job(i));
    out.predicted.assign(m, Rational(0));
    for (int k = 0; k < m; ++k) {
      const auto& clause = phi.clauses[k];
      int true_count = 0;
      for (int lit : clause)
        if (literal_true(lit, a)) ++true_count;
      if (true_count == 0) continue;  // all unit-time jobs sit behind the weighted ones
      Rational total;
      for (int lit : clause) {
        int before = 0;
        for (int other : clause)
          if (literal_true(other, a) != literal_true(lit, a) &&
              std::abs(other) < std::abs(lit))
            ++before;
        total += Rational(literal_true(lit, a) ? true_count + before : before);
      }
      out.predicted[k] = total;
    }
    return out;
  }

  // Tardiness constructions share the interleaved pair form: the false
  // literal's job first within each variable pair.
  for (int i = 1; i <= phi.variables; ++i) {
    int first = a.bits[i - 1] ? tkdetail::neg_job(i) : tkdetail::pos_job(i);
    int second = a.bits[i - 1] ? tkdetail::pos_job(i) : tkdetail::neg_job(i);
    out.schedule.order.push_back(first);
    out.schedule.order.push_back(second);
  }
  int scenarios = which == Reduction::DueDates ? m : m + 1;
  out.predicted.assign(scenarios, Rational(0));
  for (int k = 0; k < m; ++k)
    out.predicted[k] = Rational(clause_satisfied(phi.clauses[k], a) ? 1 : 0);
  if (which == Reduction::Weights) out.predicted[m] = Rational(m);
  return out;
}

// Random exact weight vector: integer parts normalized by their sum, so the
// entries always sum to 1 without rounding.
inline OwaWeights gen_random_owa(std::uint64_t seed, int K, bool nonincreasing = false) {
  if (K < 1) throw PreconditionError("gen_random_owa: need K >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> part(0, 6);
  std::vector<std::int64_t> raw(K);
  std::int64_t sum = 0;
  for (auto& x : raw) {
    x = part(rng);
    sum += x;
  }
  if (sum == 0) {
    raw[0] = 1;
    sum = 1;
  }
  if (nonincreasing) std::sort(raw.rbegin(), raw.rend());
  std::vector<Rational> v(K);
  for (int i = 0; i < K; ++i) v[i] = Rational(raw[i], sum);
  return OwaWeights(std::move(v));
}

struct RandomOptions {
  bool integral = true;
  bool unit_time = false;
  bool deterministic_p = false;
  bool deterministic_w = false;
  std::int64_t min_value = 0;   // lower bound for proc/weight draws
  std::int64_t max_value = 10;  // upper bound for all draws
  double precedence_density = 0.0;
  Objective objective = Objective::MaxWeightedTardiness;
};

// Reproducible random instance; precedence is sampled as forward edges in
// job-index order, which is acyclic by construction.
inline Instance gen_random(std::uint64_t seed, int n, int K, const RandomOptions& opt = {}) {
  if (n < 1 || K < 1) throw PreconditionError("gen_random: need n >= 1 and K >= 1");
  if (opt.min_value < 0 || opt.max_value < opt.min_value)
    throw PreconditionError("gen_random: bad value range");
  if (opt.unit_time && opt.max_value < 1)
    throw PreconditionError("gen_random: unit_time incompatible with max_value < 1");
  if (opt.precedence_density < 0.0 || opt.precedence_density > 1.0)
    throw PreconditionError("gen_random: precedence density outside [0,1]");

  std::mt19937_64 rng(seed);
  auto draw = [&](std::int64_t lo, std::int64_t hi) {
    if (opt.integral) return Rational(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
    std::int64_t den = std::uniform_int_distribution<std::int64_t>(1, 4)(rng);
    std::int64_t num = std::uniform_int_distribution<std::int64_t>(lo * den, hi * den)(rng);
    return Rational(num, den);
  };
  auto fill = [&](std::vector<std::vector<Rational>>& matrix, std::int64_t lo, std::int64_t hi,
                  bool deterministic) {
    matrix.assign(n, std::vector<Rational>(K));
    for (int j = 0; j < n; ++j) {
      matrix[j][0] = draw(lo, hi);
      for (int i = 1; i < K; ++i) matrix[j][i] = deterministic ? matrix[j][0] : draw(lo, hi);
    }
  };

  Instance inst;
  inst.n = n;
  inst.K = K;
  inst.objective = opt.objective;
  if (opt.unit_time)
    inst.proc.assign(n, std::vector<Rational>(K, Rational(1)));
  else
    fill(inst.proc, opt.min_value, opt.max_value, opt.deterministic_p);
  fill(inst.weight, opt.min_value, opt.max_value, opt.deterministic_w);
  if (opt.objective == Objective::MaxWeightedTardiness)
    fill(inst.due, 0, opt.max_value, false);
  else
    inst.due.assign(n, std::vector<Rational>(K, Rational(0)));

  std::bernoulli_distribution edge(opt.precedence_density);
  if (opt.precedence_density > 0.0)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (edge(rng)) inst.prec.emplace_back(a, b);
  return inst;
}

}  // namespace owasched
