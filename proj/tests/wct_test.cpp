#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "owasched/testkit.hpp"
#include "owasched/wct.hpp"

using namespace owasched;

namespace {

Instance make_wct(std::vector<std::vector<Rational>> proc,
                  std::vector<std::vector<Rational>> weight) {
  Instance inst;
  inst.n = static_cast<int>(proc.size());
  inst.K = static_cast<int>(proc[0].size());
  inst.objective = Objective::WeightedCompletionSum;
  inst.proc = std::move(proc);
  inst.weight = std::move(weight);
  inst.due.assign(inst.n, std::vector<Rational>(inst.K, Rational(0)));
  return inst;
}

RandomOptions wct_options() {
  RandomOptions opt;
  opt.objective = Objective::WeightedCompletionSum;
  return opt;
}

}  // namespace

TEST_CASE("deterministic WSPT ordering") {
  SECTION("plain SPT when weights are equal") {
    Schedule s = solve_deterministic_wspt({Rational(2), Rational(1), Rational(3)},
                                          {Rational(1), Rational(1), Rational(1)});
    REQUIRE(s.order == std::vector<int>{1, 0, 2});
  }
  SECTION("zero-weight jobs sink to the back") {
    Schedule s = solve_deterministic_wspt({Rational(1), Rational(5), Rational(1)},
                                          {Rational(0), Rational(1), Rational(1)});
    REQUIRE(s.order == std::vector<int>{2, 1, 0});
  }
  SECTION("equal ratios keep index order") {
    Schedule s = solve_deterministic_wspt({Rational(2), Rational(4), Rational(1)},
                                          {Rational(2), Rational(4), Rational(1)});
    REQUIRE(s.order == std::vector<int>{0, 1, 2});
  }
  SECTION("rejects bad input") {
    REQUIRE_THROWS_AS(solve_deterministic_wspt({}, {}), PreconditionError);
    REQUIRE_THROWS_AS(solve_deterministic_wspt({Rational(1)}, {Rational(1), Rational(2)}),
                      PreconditionError);
    REQUIRE_THROWS_AS(
        solve_deterministic_wspt({Rational(1), Rational(1)}, {Rational(1), Rational(1)},
                                 {{0, 1}}),
        PreconditionError);
  }
}

TEST_CASE("WSPT matches exhaustive search on one scenario") {
  auto opt = wct_options();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    Instance inst = gen_random(seed * 13 + 1, n, 1, opt);
    std::vector<Rational> p(inst.n), w(inst.n);
    for (int j = 0; j < inst.n; ++j) {
      p[j] = inst.proc[j][0];
      w[j] = inst.weight[j][0];
    }
    Schedule s = solve_deterministic_wspt(p, w);
    auto oracle = oracle_opt(inst, preset_maximum(1));
    CAPTURE(seed, n);
    REQUIRE(cost(inst, s, 0) == oracle.objective);
  }
}

TEST_CASE("min-min over completion-time scenarios") {
  auto opt = wct_options();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const int K = 1 + static_cast<int>(seed % 3);
    Instance inst = gen_random(seed * 29 + 5, n, K, opt);
    auto rep = solve_min_min_wct(inst);
    auto oracle = oracle_opt(inst, preset_minimum(K));
    CAPTURE(seed, n, K);
    REQUIRE(rep.objective == oracle.objective);
    // the winning schedule really achieves the value in some scenario
    CostVector costs = cost_vector(inst, rep.schedule);
    REQUIRE(*std::min_element(costs.begin(), costs.end()) == rep.objective);
  }

  Instance chained = make_wct({{Rational(1)}, {Rational(1)}}, {{Rational(1)}, {Rational(1)}});
  chained.prec = {{0, 1}};
  REQUIRE_THROWS_AS(solve_min_min_wct(chained), PreconditionError);
  Instance tard = gen_random(3, 3, 2);
  REQUIRE_THROWS_AS(solve_min_min_wct(tard), PreconditionError);
}

TEST_CASE("aggregation heuristic stays within its spread bound") {
  auto opt = wct_options();
  opt.min_value = 1;  // keep both spreads finite
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const int K = 1 + static_cast<int>(seed % 3);
    Instance inst = gen_random(seed * 31 + 7, n, K, opt);
    OwaWeights v = gen_random_owa(seed + 900, K, /*nonincreasing=*/true);
    auto rep = approx_aggregate(inst, v);
    auto oracle = oracle_opt(inst, v);
    CAPTURE(seed, n, K);
    REQUIRE(rep.objective == owa_value(v, cost_vector(inst, rep.schedule)));
    REQUIRE(oracle.objective <= rep.objective);
    REQUIRE(rep.guarantee.has_value());
    REQUIRE(rep.objective <= *rep.guarantee * oracle.objective);
    REQUIRE(rep.stats.count("picked_inverted") == 1);
  }
}

TEST_CASE("aggregation heuristic edge cases") {
  SECTION("single scenario reduces to exact WSPT") {
    Instance inst = gen_random(11, 5, 1, wct_options());
    auto rep = approx_aggregate(inst, preset_maximum(1));
    REQUIRE(rep.objective == oracle_opt(inst, preset_maximum(1)).objective);
  }
  SECTION("guarantee disappears when both spreads are infinite") {
    Instance inst = make_wct({{Rational(0), Rational(2)}, {Rational(1), Rational(3)}},
                             {{Rational(0), Rational(1)}, {Rational(2), Rational(1)}});
    auto rep = approx_aggregate(inst, preset_average(2));
    REQUIRE_FALSE(rep.guarantee.has_value());
  }
  SECTION("rejects rising OWA weights and precedence") {
    Instance inst = gen_random(12, 4, 2, wct_options());
    REQUIRE_THROWS_AS(approx_aggregate(inst, preset_minimum(2)), PreconditionError);
    inst.prec = {{0, 1}};
    REQUIRE_THROWS_AS(approx_aggregate(inst, preset_average(2)), PreconditionError);
  }
}

TEST_CASE("order LP evaluates the OWA exactly at integral points") {
  auto opt = wct_options();
  opt.deterministic_p = true;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const int K = 1 + static_cast<int>(seed % 3);
    Instance inst = gen_random(seed * 37 + 3, n, K, opt);
    OwaWeights v = gen_random_owa(seed + 400, K, /*nonincreasing=*/true);
    auto model = build_owa_lp(inst, v);

    REQUIRE(model.lp.vars() == n * (n - 1) + K * K + K);
    const std::size_t pairing = static_cast<std::size_t>(n) * (n - 1) / 2;
    const std::size_t triangles = n >= 3 ? static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 3 : 0;
    REQUIRE(model.lp.rows.size() ==
            pairing + triangles + static_cast<std::size_t>(K) * K * 2);

    // pin the order variables to a concrete permutation and re-solve; the
    // cumulative-cost machinery should reproduce the schedule's OWA value
    Schedule sched;
    sched.order.resize(n);
    std::iota(sched.order.begin(), sched.order.end(), 0);
    if (n >= 2) std::swap(sched.order[0], sched.order[n - 1]);
    std::vector<int> pos(n);
    for (int q = 0; q < n; ++q) pos[sched.order[q]] = q;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) {
          double bit = pos[i] < pos[j] ? 1.0 : 0.0;
          model.lp.lower[model.delta_col(i, j)] = bit;
          model.lp.upper[model.delta_col(i, j)] = bit;
        }
    auto sol = lp_solve(model.lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    double expected = owa_value(v, cost_vector(inst, sched)).to_double();
    CAPTURE(seed, n, K);
    REQUIRE(sol.value == Catch::Approx(expected).margin(1e-6 * (1.0 + expected)));
  }
}

TEST_CASE("LP rounding with deterministic processing times") {
  auto opt = wct_options();
  opt.deterministic_p = true;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const int K = 1 + static_cast<int>(seed % 3);
    opt.precedence_density = (seed % 2) ? 0.2 : 0.0;
    Instance inst = gen_random(seed * 41 + 9, n, K, opt);
    OwaWeights v = gen_random_owa(seed + 600, K, /*nonincreasing=*/true);

    auto det = approx_lp_rounding_detail(inst, v);
    const auto& rep = det.report;
    CAPTURE(seed, n, K);
    REQUIRE_FALSE(validate_schedule(inst, rep.schedule).has_value());
    REQUIRE(rep.objective == owa_value(v, cost_vector(inst, rep.schedule)));
    REQUIRE(det.inverted == false);
    REQUIRE(rep.objective.to_double() <= 2.0 * det.z_star + 1e-6);
    for (int j = 0; j < n; ++j)
      REQUIRE(det.c_round[j].to_double() <= 2.0 * det.c_star[j] + 1e-6);

    auto oracle = oracle_opt(inst, v);
    REQUIRE(det.z_star <= oracle.objective.to_double() + 1e-6);
    REQUIRE(rep.objective.to_double() <= 2.0 * oracle.objective.to_double() + 1e-6);
    REQUIRE(*rep.guarantee == Rational(2));
    REQUIRE(rep.lower_bound.has_value());
  }
}

TEST_CASE("LP rounding falls back to the inverted instance") {
  auto opt = wct_options();
  opt.deterministic_w = true;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const int K = 2 + static_cast<int>(seed % 2);
    Instance inst = gen_random(seed * 43 + 17, n, K, opt);
    if (deterministic_proc(inst)) continue;  // would take the direct path
    OwaWeights v = gen_random_owa(seed + 700, K, /*nonincreasing=*/true);

    auto det = approx_lp_rounding_detail(inst, v);
    CAPTURE(seed, n, K);
    REQUIRE(det.inverted == true);
    REQUIRE(det.report.stats["inverted"] == 1);
    REQUIRE_FALSE(validate_schedule(inst, det.report.schedule).has_value());
    auto oracle = oracle_opt(inst, v);
    REQUIRE(det.z_star <= oracle.objective.to_double() + 1e-6);
    REQUIRE(det.report.objective.to_double() <= 2.0 * oracle.objective.to_double() + 1e-6);
  }
}

TEST_CASE("LP rounding preconditions") {
  Instance both = make_wct({{Rational(1), Rational(2)}, {Rational(2), Rational(1)}},
                           {{Rational(1), Rational(3)}, {Rational(2), Rational(2)}});
  REQUIRE_THROWS_AS(approx_lp_rounding(both, preset_average(2)), PreconditionError);

  auto opt = wct_options();
  opt.deterministic_p = true;
  Instance detp = gen_random(21, 3, 2, opt);
  REQUIRE_THROWS_AS(approx_lp_rounding(detp, preset_minimum(2)), PreconditionError);
  REQUIRE_THROWS_AS(approx_lp_rounding(detp, preset_average(3)), PreconditionError);
  Instance tard = gen_random(22, 3, 2);
  REQUIRE_THROWS_AS(approx_lp_rounding(tard, preset_average(2)), PreconditionError);
}

TEST_CASE("Hurwicz on completion times keeps the factor-two bound") {
  const Rational alphas[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
  auto opt = wct_options();
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const int K = 1 + static_cast<int>(seed % 3);
    opt.deterministic_p = seed % 2 == 0;
    opt.deterministic_w = !opt.deterministic_p;
    Instance inst = gen_random(seed * 47 + 2, n, K, opt);
    for (const Rational& alpha : alphas) {
      auto rep = solve_hurwicz_wct(inst, alpha);
      CAPTURE(seed, n, K, alpha.str());

      CostVector costs = cost_vector(inst, rep.schedule);
      const auto [mn, mx] = std::minmax_element(costs.begin(), costs.end());
      REQUIRE(rep.objective == alpha * *mx + (Rational(1) - alpha) * *mn);

      auto oracle = oracle_opt(inst, preset_hurwicz(K, alpha));
      REQUIRE(oracle.objective <= rep.objective);
      REQUIRE(rep.objective.to_double() <= 2.0 * oracle.objective.to_double() + 1e-6);
      REQUIRE(rep.lower_bound.has_value());
      REQUIRE(*rep.lower_bound <= oracle.objective.to_double() + 1e-6);
    }
  }

  Instance inst = gen_random(8, 3, 2, wct_options());
  REQUIRE_THROWS_AS(solve_hurwicz_wct(inst, Rational(-1, 2)), PreconditionError);
  REQUIRE_THROWS_AS(solve_hurwicz_wct(inst, Rational(3, 2)), PreconditionError);
}
