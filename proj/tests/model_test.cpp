#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "owasched/io.hpp"
#include "owasched/model.hpp"
#include "owasched/testkit.hpp"

using namespace owasched;

namespace {

Instance small_tardiness() {
  Instance inst;
  inst.n = 2;
  inst.K = 2;
  inst.objective = Objective::MaxWeightedTardiness;
  inst.proc = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
  inst.weight = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
  inst.due = {{Rational(1), Rational(2)}, {Rational(2), Rational(1)}};
  return inst;
}

// The 4-job tight-family instance: unit parameters, due dates
// (1,2,3,4) under S1 and (1,1,3,3) under S2.
Instance tight4() {
  Instance inst;
  inst.n = 4;
  inst.K = 2;
  inst.objective = Objective::MaxWeightedTardiness;
  inst.proc.assign(4, {Rational(1), Rational(1)});
  inst.weight.assign(4, {Rational(1), Rational(1)});
  inst.due = {{Rational(1), Rational(1)},
              {Rational(2), Rational(1)},
              {Rational(3), Rational(3)},
              {Rational(4), Rational(3)}};
  return inst;
}

bool has_violation(const ValidationReport& r, const std::string& needle) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("validate_instance accepts a well-formed instance") {
  REQUIRE(validate_instance(small_tardiness()).ok());
}

TEST_CASE("validate_instance reports a cycle witness") {
  Instance inst = small_tardiness();
  inst.prec = {{0, 1}, {1, 0}};
  auto report = validate_instance(inst);
  REQUIRE_FALSE(report.ok());
  REQUIRE(has_violation(report, "cycle: 1->2->1"));
}

TEST_CASE("validate_instance reports dimension mismatches") {
  Instance inst = small_tardiness();
  inst.proc.push_back({Rational(1), Rational(1)});
  REQUIRE(has_violation(validate_instance(inst), "dimension mismatch"));

  Instance inst2 = small_tardiness();
  inst2.due[1].pop_back();
  REQUIRE(has_violation(validate_instance(inst2), "dimension mismatch"));
}

TEST_CASE("validate_instance reports negative entries and bad edges") {
  Instance inst = small_tardiness();
  inst.weight[0][1] = Rational(-1, 2);
  REQUIRE(has_violation(validate_instance(inst), "negative"));

  Instance inst2 = small_tardiness();
  inst2.prec = {{0, 5}};
  REQUIRE(has_violation(validate_instance(inst2), "out of range"));

  Instance inst3 = small_tardiness();
  inst3.n = 0;
  REQUIRE_FALSE(validate_instance(inst3).ok());
}

TEST_CASE("wct instances with due dates only warn") {
  Instance inst = small_tardiness();
  inst.objective = Objective::WeightedCompletionSum;
  auto report = validate_instance(inst);
  REQUIRE(report.ok());
  REQUIRE_FALSE(report.warnings.empty());

  inst.due.assign(2, {Rational(0), Rational(0)});
  REQUIRE(validate_instance(inst).warnings.empty());
}

TEST_CASE("validate_schedule pinpoints the problem") {
  Instance inst = small_tardiness();
  inst.prec = {{0, 1}};
  REQUIRE_FALSE(validate_schedule(inst, Schedule{{0, 1}}).has_value());
  REQUIRE(validate_schedule(inst, Schedule{{0}}).has_value());
  REQUIRE(validate_schedule(inst, Schedule{{0, 0}}).has_value());
  REQUIRE(validate_schedule(inst, Schedule{{0, 7}}).has_value());
  auto msg = validate_schedule(inst, Schedule{{1, 0}});
  REQUIRE(msg.has_value());
  REQUIRE(msg->find("1->2") != std::string::npos);
}

TEST_CASE("completion_times are prefix sums") {
  Instance inst;
  inst.n = 2;
  inst.K = 1;
  inst.proc = {{Rational(1)}, {Rational(2)}};
  inst.due = {{Rational(0)}, {Rational(0)}};
  inst.weight = {{Rational(1)}, {Rational(1)}};
  auto c = completion_times(inst, Schedule{{0, 1}}, 0);
  REQUIRE(c == std::vector<Rational>{Rational(1), Rational(3)});

  inst.proc = {{Rational(0)}, {Rational(0)}};
  c = completion_times(inst, Schedule{{0, 1}}, 0);
  REQUIRE(c == std::vector<Rational>{Rational(0), Rational(0)});

  Instance inst3;
  inst3.n = 3;
  inst3.K = 1;
  inst3.proc = {{Rational(2)}, {Rational(3)}, {Rational(1)}};
  inst3.due.assign(3, {Rational(0)});
  inst3.weight.assign(3, {Rational(1)});
  c = completion_times(inst3, Schedule{{2, 0, 1}}, 0);
  REQUIRE(c[2] == Rational(1));
  REQUIRE(c[0] == Rational(3));
  REQUIRE(c[1] == Rational(6));

  REQUIRE_THROWS_AS(completion_times(inst3, Schedule{{2, 0, 1}}, 1), std::out_of_range);
}

TEST_CASE("cost handles both objectives") {
  Instance inst;
  inst.n = 2;
  inst.K = 1;
  inst.objective = Objective::MaxWeightedTardiness;
  inst.proc.assign(2, {Rational(1)});
  inst.weight.assign(2, {Rational(1)});

  inst.due = {{Rational(1)}, {Rational(2)}};
  REQUIRE(cost(inst, Schedule{{0, 1}}, 0) == Rational(0));

  inst.due = {{Rational(1)}, {Rational(1)}};
  REQUIRE(cost(inst, Schedule{{0, 1}}, 0) == Rational(1));

  Instance wct;
  wct.n = 2;
  wct.K = 1;
  wct.objective = Objective::WeightedCompletionSum;
  wct.proc = {{Rational(1)}, {Rational(2)}};
  wct.weight = {{Rational(3)}, {Rational(4)}};
  wct.due.assign(2, {Rational(0)});
  REQUIRE(cost(wct, Schedule{{0, 1}}, 0) == Rational(15));
}

TEST_CASE("cost_vector on the 4-job tight family") {
  Instance inst = tight4();
  REQUIRE(cost_vector(inst, Schedule{{0, 1, 2, 3}}) == CostVector{Rational(0), Rational(1)});
  REQUIRE(cost_vector(inst, Schedule{{1, 0, 3, 2}}) == CostVector{Rational(1), Rational(1)});
}

TEST_CASE("inversion swaps roles and reverses edges") {
  Instance inst;
  inst.n = 2;
  inst.K = 1;
  inst.objective = Objective::WeightedCompletionSum;
  inst.proc = {{Rational(1)}, {Rational(2)}};
  inst.weight = {{Rational(3)}, {Rational(4)}};
  inst.due.assign(2, {Rational(0)});
  inst.prec = {{0, 1}};

  Instance inv = invert_instance(inst);
  REQUIRE(inv.proc == inst.weight);
  REQUIRE(inv.weight == inst.proc);
  REQUIRE(inv.prec == std::vector<std::pair<int, int>>{{1, 0}});
  REQUIRE(invert_instance(inv) == inst);

  Instance tard = small_tardiness();
  REQUIRE_THROWS_AS(invert_instance(tard), PreconditionError);

  REQUIRE(invert_schedule(Schedule{{0, 1, 2}}) == Schedule{{2, 1, 0}});
  REQUIRE(invert_schedule(Schedule{{0}}) == Schedule{{0}});
}

TEST_CASE("inversion preserves per-scenario cost") {
  RandomOptions opt;
  opt.objective = Objective::WeightedCompletionSum;
  opt.precedence_density = 0.3;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Instance inst = gen_random(seed, 5, 3, opt);
    Instance inv = invert_instance(inst);
    for (const Schedule& sched : enumerate_schedules(inst)) {
      Schedule rev = invert_schedule(sched);
      REQUIRE_FALSE(validate_schedule(inv, rev).has_value());
      for (int i = 0; i < inst.K; ++i) REQUIRE(cost(inst, sched, i) == cost(inv, rev, i));
    }
  }
}

TEST_CASE("relabeling jobs relabels completion times") {
  Instance inst = gen_random(3, 5, 2);
  // swap labels of jobs 1 and 3
  auto relabel = [](int j) { return j == 1 ? 3 : j == 3 ? 1 : j; };
  Instance swapped = inst;
  std::swap(swapped.proc[1], swapped.proc[3]);
  std::swap(swapped.due[1], swapped.due[3]);
  std::swap(swapped.weight[1], swapped.weight[3]);
  Schedule sched{{4, 1, 0, 3, 2}};
  Schedule mapped;
  for (int j : sched.order) mapped.order.push_back(relabel(j));
  for (int i = 0; i < inst.K; ++i) {
    auto base = completion_times(inst, sched, i);
    auto moved = completion_times(swapped, mapped, i);
    for (int j = 0; j < inst.n; ++j) REQUIRE(base[j] == moved[relabel(j)]);
  }
}

TEST_CASE("cost is monotone in processing times") {
  for (std::uint64_t seed = 50; seed < 70; ++seed) {
    Instance inst = gen_random(seed, 5, 2);
    Instance bumped = inst;
    bumped.proc[2][1] += Rational(3, 2);
    Schedule sched{{0, 1, 2, 3, 4}};
    REQUIRE(cost(bumped, sched, 1) >= cost(inst, sched, 1));

    Instance wct = gen_random(seed, 5, 2, {.objective = Objective::WeightedCompletionSum});
    Instance wbumped = wct;
    wbumped.proc[0][0] += Rational(2);
    REQUIRE(cost(wbumped, sched, 0) >= cost(wct, sched, 0));
  }
}

TEST_CASE("extrema and integrality helpers") {
  Instance inst = small_tardiness();
  inst.proc[0][0] = Rational(1, 2);
  inst.weight[1][1] = Rational(5);
  auto ex = instance_extrema(inst);
  REQUIRE(ex.p_min == Rational(1, 2));
  REQUIRE(ex.p_max == Rational(1));
  REQUIRE(ex.w_min == Rational(1));
  REQUIRE(ex.w_max == Rational(5));
  REQUIRE_FALSE(integral_parameters(inst));

  auto [scaled, factor] = scale_to_integers(inst);
  REQUIRE(factor == 2);
  REQUIRE(integral_parameters(scaled));
  // weights and times both scale, so costs pick up the factor squared
  Schedule sched{{1, 0}};
  for (int i = 0; i < inst.K; ++i)
    REQUIRE(cost(scaled, sched, i) == cost(inst, sched, i) * Rational(factor) * Rational(factor));
}

TEST_CASE("deterministic column detection") {
  Instance inst = small_tardiness();
  REQUIRE(deterministic_proc(inst));
  REQUIRE(deterministic_weight(inst));
  inst.proc[0][1] = Rational(2);
  REQUIRE_FALSE(deterministic_proc(inst));
}

TEST_CASE("instance json round-trips") {
  Instance inst = tight4();
  inst.prec = {{0, 2}, {1, 3}};
  REQUIRE(parse_instance(serialize_instance(inst)) == inst);

  Instance frac = small_tardiness();
  frac.proc[0][0] = Rational(3, 4);
  frac.due[1][1] = Rational(9, 8);
  REQUIRE(parse_instance(serialize_instance(frac)) == frac);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance r = gen_random(seed, 6, 3, {.integral = false, .precedence_density = 0.2});
    REQUIRE(parse_instance(serialize_instance(r)) == r);
  }
}

TEST_CASE("instance parsing distinguishes error kinds") {
  REQUIRE_THROWS_AS(parse_instance("{not json"), ParseError);
  REQUIRE_THROWS_AS(parse_instance("[1,2]"), SchemaError);

  std::string missing = R"({"n":1,"k":1,"objective":"max_wt","proc":[[1]],"weight":[[1]],"prec":[]})";
  REQUIRE_THROWS_AS(parse_instance(missing), SchemaError);

  std::string bad_obj = R"({"n":1,"k":1,"objective":"makespan","proc":[[1]],"due":[[1]],"weight":[[1]],"prec":[]})";
  REQUIRE_THROWS_AS(parse_instance(bad_obj), SchemaError);

  std::string float_lit = R"({"n":1,"k":1,"objective":"max_wt","proc":[[1.5]],"due":[[1]],"weight":[[1]],"prec":[]})";
  REQUIRE_THROWS_AS(parse_instance(float_lit), SchemaError);

  std::string negative = R"({"n":1,"k":1,"objective":"max_wt","proc":[[1]],"due":[[1]],"weight":[["-1/2"]],"prec":[]})";
  REQUIRE_THROWS_AS(parse_instance(negative), ValidationError);
  try {
    parse_instance(negative);
  } catch (const ValidationError& e) {
    REQUIRE_FALSE(e.violations.empty());
  }

  std::string cyclic = R"({"n":2,"k":1,"objective":"max_wt","proc":[[1],[1]],"due":[[1],[1]],"weight":[[1],[1]],"prec":[[1,2],[2,1]]})";
  REQUIRE_THROWS_AS(parse_instance(cyclic), ValidationError);
}

TEST_CASE("exact numeric strings are accepted") {
  std::string text = R"({"n":1,"k":2,"objective":"max_wt",
    "proc":[["3/4","0.25"]],"due":[[1,"2"]],"weight":[[1,1]],"prec":[]})";
  Instance inst = parse_instance(text);
  REQUIRE(inst.proc[0][0] == Rational(3, 4));
  REQUIRE(inst.proc[0][1] == Rational(1, 4));
  REQUIRE(inst.due[0][1] == Rational(2));
}

TEST_CASE("schedule json round-trips and is 1-based on disk") {
  Schedule sched{{2, 0, 1}};
  std::string text = serialize_schedule(sched);
  REQUIRE(text.find("3") != std::string::npos);
  REQUIRE(parse_schedule(text) == sched);
  REQUIRE_THROWS_AS(parse_schedule("{}"), SchemaError);
  REQUIRE_THROWS_AS(parse_schedule("{\"order\":[1.5]}"), SchemaError);
}
