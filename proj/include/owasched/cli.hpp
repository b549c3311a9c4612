#pragma once

// Command-line front end: instance generation, solver dispatch, schedule
// evaluation, and benchmark tables.  Everything here is plumbing around the
// library modules; the only logic of its own is flag validation, exit-code
// mapping, and the re-validation pass that re-evaluates every emitted
// schedule against the reported objective.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "owasched/errors.hpp"
#include "owasched/io.hpp"
#include "owasched/lp.hpp"
#include "owasched/model.hpp"
#include "owasched/owa.hpp"
#include "owasched/tardiness.hpp"
#include "owasched/testkit.hpp"
#include "owasched/wct.hpp"

namespace owasched {

// Stable exit-code contract: 0 success, 1 usage or incompatible request,
// 2 infeasible schedule / budget or solver failure, 3 malformed input files.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitInput = 3;

struct RunConfig {
  std::string command;
  std::string instance_path;
  std::string schedule_path;  // eval only
  std::string owa_preset;     // --owa
  std::string owa_file;       // --owa-file
  std::string method;
  std::string alpha_text;     // Hurwicz mixing parameter, also the hurwicz preset knob
  int quantile_k = 0;         // quantile index, also the quantile preset knob; 0 = unset
  std::int64_t budget = 0;    // 0 = per-method default
  std::uint64_t seed = 0;
  std::string out_path;  // empty = stdout
  bool porcelain = false;
  bool scale_integers = false;
};

namespace clidetail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void emit(const RunConfig& cfg, const nlohmann::json& doc) {
  std::string text = (cfg.porcelain ? doc.dump() : doc.dump(2)) + "\n";
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + cfg.out_path);
  out << text;
}

// Resolved per-call solver parameters; `v` is only set when the caller gave
// an explicit OWA spec (methods with an implied vector build their own).
struct MethodParams {
  std::optional<Rational> alpha;
  int k = 0;
  std::int64_t budget = 0;
  std::optional<OwaWeights> v;
};

struct MethodResult {
  SolveReport report;
  OwaWeights v_eff;  // the vector the reported objective is measured under
};

inline MethodResult run_method(const Instance& inst, const std::string& method,
                               const MethodParams& mp) {
  auto need_v = [&]() -> const OwaWeights& {
    if (!mp.v) throw PreconditionError("method " + method + " needs --owa or --owa-file");
    return *mp.v;
  };
  auto need_alpha = [&]() -> const Rational& {
    if (!mp.alpha) throw PreconditionError("method " + method + " needs --alpha");
    return *mp.alpha;
  };

  if (method == "minmax") return {solve_minmax(inst), preset_maximum(inst.K)};
  if (method == "minmin") {
    SolveReport rep = inst.objective == Objective::MaxWeightedTardiness ? solve_min_min(inst)
                                                                        : solve_min_min_wct(inst);
    return {std::move(rep), preset_minimum(inst.K)};
  }
  if (method == "hurwicz")
    return {solve_hurwicz(inst, need_alpha()), preset_hurwicz(inst.K, *mp.alpha)};
  if (method == "quantile") {
    if (mp.k < 1) throw PreconditionError("method quantile needs --k >= 1");
    return {solve_quantile(inst, mp.k, mp.budget > 0 ? mp.budget : 1000000),
            preset_quantile(inst.K, mp.k)};
  }
  if (method == "owa-exact") {
    const OwaWeights& v = need_v();
    return {solve_owa_bounded(inst, v, mp.budget > 0 ? mp.budget : 10000000), v};
  }
  if (method == "owa-quantile-approx") {
    const OwaWeights& v = need_v();
    return {approx_owa_quantile(inst, v, mp.budget > 0 ? mp.budget : 1000000), v};
  }
  if (method == "wct-aggregate") {
    const OwaWeights& v = need_v();
    return {approx_aggregate(inst, v), v};
  }
  if (method == "wct-lp2") {
    const OwaWeights& v = need_v();
    return {approx_lp_rounding(inst, v), v};
  }
  if (method == "wct-hurwicz")
    return {solve_hurwicz_wct(inst, need_alpha()), preset_hurwicz(inst.K, *mp.alpha)};
  if (method == "oracle") {
    const OwaWeights& v = need_v();
    int cap = mp.budget > 0 ? static_cast<int>(mp.budget) : 9;
    return {oracle_opt(inst, v, cap), v};
  }
  throw PreconditionError("unknown method \"" + method + "\"");
}

inline MethodParams resolve_params(const RunConfig& cfg, int K) {
  MethodParams mp;
  mp.k = cfg.quantile_k;
  mp.budget = cfg.budget;
  if (!cfg.alpha_text.empty()) mp.alpha = Rational::parse(cfg.alpha_text);
  if (!cfg.owa_file.empty() && !cfg.owa_preset.empty())
    throw PreconditionError("--owa and --owa-file are mutually exclusive");
  if (!cfg.owa_file.empty()) {
    mp.v = parse_owa_weights(read_file(cfg.owa_file), K);
  } else if (!cfg.owa_preset.empty()) {
    nlohmann::json spec;
    spec["preset"] = cfg.owa_preset;
    if (cfg.owa_preset == "quantile") {
      if (cfg.quantile_k < 1) throw PreconditionError("--owa quantile needs --k >= 1");
      spec["k"] = cfg.quantile_k;
    }
    if (cfg.owa_preset == "hurwicz") {
      if (cfg.alpha_text.empty()) throw PreconditionError("--owa hurwicz needs --alpha");
      spec["alpha"] = cfg.alpha_text;
    }
    mp.v = parse_owa_weights(spec.dump(), K);
  }
  return mp;
}

inline nlohmann::json order_json(const Schedule& sched) {
  nlohmann::json order = nlohmann::json::array();
  for (int j : sched.order) order.push_back(j + 1);
  return order;
}

inline int cmd_solve(const RunConfig& cfg) {
  Instance inst = parse_instance(read_file(cfg.instance_path));
  MethodParams mp = resolve_params(cfg, inst.K);

  Instance work = inst;
  Rational divisor(1);
  std::int64_t factor = 1;
  if (cfg.scale_integers) {
    if (cfg.method != "owa-exact")
      throw PreconditionError("--scale-integers only applies to owa-exact");
    std::tie(work, factor) = scale_to_integers(inst);
    // weights and the (sum p - d) term both pick up the factor
    divisor = Rational(factor) * Rational(factor);
  }

  auto t0 = std::chrono::steady_clock::now();
  MethodResult res = run_method(work, cfg.method, mp);
  auto t1 = std::chrono::steady_clock::now();

  Rational objective = res.report.objective / divisor;
  Rational check = owa_value(res.v_eff, cost_vector(inst, res.report.schedule));
  if (check != objective)
    throw Error("internal: emitted schedule does not reproduce the reported objective");

  nlohmann::json doc;
  doc["method"] = cfg.method;
  doc["objective"] = iodetail::from_rational(objective);
  doc["order"] = order_json(res.report.schedule);
  if (res.report.lower_bound) doc["lower_bound"] = *res.report.lower_bound;
  if (res.report.guarantee) doc["guarantee"] = iodetail::from_rational(*res.report.guarantee);
  if (cfg.scale_integers) doc["scale_factor"] = factor;
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& [name, count] : res.report.stats) stats[name] = count;
  doc["stats"] = std::move(stats);
  doc["millis"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  emit(cfg, doc);
  return kExitOk;
}

inline int cmd_eval(const RunConfig& cfg) {
  Instance inst = parse_instance(read_file(cfg.instance_path));
  Schedule sched = parse_schedule(read_file(cfg.schedule_path));
  MethodParams mp = resolve_params(cfg, inst.K);
  if (!mp.v) throw PreconditionError("eval needs --owa or --owa-file");

  if (auto why = validate_schedule(inst, sched)) {
    std::cerr << "error: infeasible schedule: " << *why << "\n";
    return kExitSolver;
  }

  CostVector costs = cost_vector(inst, sched);
  nlohmann::json doc;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : costs) arr.push_back(iodetail::from_rational(c));
  doc["cost_vector"] = std::move(arr);
  doc["owa_value"] = iodetail::from_rational(owa_value(*mp.v, costs));
  emit(cfg, doc);
  return kExitOk;
}

struct GenConfig {
  std::string family;
  std::string cnf_path;
  std::string owa_out;  // cnf-wct writes its paired weight vector here
  int level = 0;        // cnf-wct threshold index
  int n = 0;
  int K = 0;
  std::uint64_t seed = 0;
  std::int64_t min_value = 0;
  std::int64_t max_value = 10;
  double density = 0.0;
  bool unit_time = false;
  bool det_p = false;
  bool det_w = false;
  bool fractional = false;
  std::string objective = "max_wt";
  std::string out_path;
};

inline int cmd_gen(const GenConfig& g) {
  Instance inst;
  std::optional<OwaWeights> paired;
  if (g.family == "tight") {
    inst = gen_tight_ratio(g.K);
  } else if (g.family == "cnf-duedates" || g.family == "cnf-weights" || g.family == "cnf-wct") {
    if (g.cnf_path.empty()) throw PreconditionError("gen " + g.family + " needs --cnf");
    CnfFormula phi = parse_dimacs(read_file(g.cnf_path));
    if (g.family == "cnf-duedates") {
      inst = gen_cnf_duedates(phi);
    } else if (g.family == "cnf-weights") {
      inst = gen_cnf_weights(phi);
    } else {
      auto [built, v] = gen_cnf_wct(phi, g.level);
      inst = std::move(built);
      paired = std::move(v);
    }
  } else if (g.family == "random") {
    if (g.n < 1 || g.K < 1) throw PreconditionError("gen random needs --n and --k");
    RandomOptions opt;
    opt.integral = !g.fractional;
    opt.unit_time = g.unit_time;
    opt.deterministic_p = g.det_p;
    opt.deterministic_w = g.det_w;
    opt.min_value = g.min_value;
    opt.max_value = g.max_value;
    opt.precedence_density = g.density;
    if (g.objective == "max_wt")
      opt.objective = Objective::MaxWeightedTardiness;
    else if (g.objective == "sum_wc")
      opt.objective = Objective::WeightedCompletionSum;
    else
      throw PreconditionError("gen random: unknown objective \"" + g.objective + "\"");
    inst = gen_random(g.seed, g.n, g.K, opt);
  } else {
    throw PreconditionError("unknown family \"" + g.family + "\"");
  }

  std::string text = serialize_instance(inst) + "\n";
  if (g.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(g.out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + g.out_path);
    out << text;
  }
  if (paired && !g.owa_out.empty()) {
    std::ofstream out(g.owa_out, std::ios::binary);
    if (!out) throw ParseError("cannot write " + g.owa_out);
    out << serialize_owa_weights(*paired) << "\n";
  }
  return kExitOk;
}

struct BenchConfig {
  std::string suite_path;
  std::string out_path;
  bool no_ratio = false;
  int jobs = 1;
};

struct BenchRow {
  std::string instance;
  std::string method;
  Rational objective;
  std::optional<Rational> oracle;
  std::int64_t millis = 0;
};

inline std::string string_field(const nlohmann::json& doc, const char* key) {
  const auto& value = iodetail::field(doc, key);
  if (!value.is_string())
    throw SchemaError(std::string("\"") + key + "\": expected a string");
  return value.get<std::string>();
}

inline BenchRow bench_one(const nlohmann::json& spec, bool want_oracle) {
  if (!spec.is_object()) throw SchemaError("bench: each run must be an object");
  BenchRow row;
  row.instance = string_field(spec, "instance");
  row.method = string_field(spec, "method");
  Instance inst = parse_instance(read_file(row.instance));

  MethodParams mp;
  if (spec.contains("alpha")) mp.alpha = iodetail::to_rational(spec.at("alpha"), "\"alpha\"");
  if (spec.contains("k")) mp.k = iodetail::to_int(spec.at("k"), "\"k\"");
  if (spec.contains("budget")) {
    if (!spec.at("budget").is_number_integer()) throw SchemaError("\"budget\": expected an integer");
    mp.budget = spec.at("budget").get<std::int64_t>();
  }
  if (spec.contains("owa")) mp.v = parse_owa_weights(spec.at("owa").dump(), inst.K);

  auto t0 = std::chrono::steady_clock::now();
  MethodResult res = run_method(inst, row.method, mp);
  auto t1 = std::chrono::steady_clock::now();
  row.objective = res.report.objective;
  row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  if (want_oracle) row.oracle = oracle_opt(inst, res.v_eff).objective;
  return row;
}

inline int cmd_bench(const BenchConfig& b) {
  nlohmann::json doc = iodetail::parse_json(read_file(b.suite_path));
  if (!doc.is_object()) throw SchemaError("bench: suite must be a JSON object");
  const auto& runs = iodetail::field(doc, "runs");
  if (!runs.is_array()) throw SchemaError("\"runs\": expected an array");

  std::vector<BenchRow> rows(runs.size());
  const int workers = std::max(1, std::min<int>(b.jobs, static_cast<int>(runs.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < runs.size(); ++i) rows[i] = bench_one(runs[i], !b.no_ratio);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= runs.size()) return;
          try {
            rows[i] = bench_one(runs[i], !b.no_ratio);
          } catch (...) {
            std::lock_guard<std::mutex> hold(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::ostringstream csv;
  csv << "instance,method,objective,oracle,ratio,millis\n";
  for (const auto& row : rows) {
    csv << row.instance << "," << row.method << "," << row.objective.str() << ",";
    if (row.oracle) {
      // 0/0 counts as meeting the bound exactly; a miss over a zero optimum
      // cannot be expressed as a finite ratio
      std::string ratio = row.oracle->is_zero()
                              ? (row.objective.is_zero() ? "1" : "inf")
                              : (row.objective / *row.oracle).str();
      csv << row.oracle->str() << "," << ratio;
    } else {
      csv << ",";
    }
    csv << "," << row.millis << "\n";
  }

  if (b.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(b.out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + b.out_path);
    out << csv.str();
  }
  return kExitOk;
}

}  // namespace clidetail

inline int cli_main(int argc, char** argv) {
  CLI::App app{"single-machine scheduling under scenario uncertainty with OWA aggregation"};
  app.require_subcommand(1);

  RunConfig cfg;
  clidetail::GenConfig gen;
  clidetail::BenchConfig bench;

  static const char* kMethods =
      "minmax, minmin, hurwicz, quantile, owa-exact, owa-quantile-approx, "
      "wct-aggregate, wct-lp2, wct-hurwicz, oracle";

  auto add_owa_flags = [&](CLI::App* cmd) {
    cmd->add_option("--owa", cfg.owa_preset,
                    "OWA preset: maximum, minimum, average, median, quantile, hurwicz");
    cmd->add_option("--owa-file", cfg.owa_file, "JSON weight vector file");
    cmd->add_option("--alpha", cfg.alpha_text, "Hurwicz mixing parameter in [0,1]");
    cmd->add_option("--k", cfg.quantile_k, "quantile index in 1..K");
  };

  CLI::App* solve = app.add_subcommand("solve", "run a solver on an instance file");
  solve->add_option("--instance", cfg.instance_path, "instance JSON file")->required();
  solve->add_option("--method", cfg.method, std::string("one of: ") + kMethods)->required();
  add_owa_flags(solve);
  solve->add_option("--budget", cfg.budget, "enumeration budget override");
  solve->add_flag("--scale-integers", cfg.scale_integers,
                  "clear denominators before owa-exact, recording the factor");
  solve->add_option("--out", cfg.out_path, "write the report here instead of stdout");
  solve->add_flag("--porcelain", cfg.porcelain, "single-line JSON output");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a schedule against an instance");
  eval->add_option("--instance", cfg.instance_path, "instance JSON file")->required();
  eval->add_option("--schedule", cfg.schedule_path, "schedule JSON file")->required();
  add_owa_flags(eval);
  eval->add_option("--out", cfg.out_path, "write the report here instead of stdout");
  eval->add_flag("--porcelain", cfg.porcelain, "single-line JSON output");

  CLI::App* genc = app.add_subcommand("gen", "write a generated instance");
  genc->add_option("family", gen.family, "tight, cnf-duedates, cnf-weights, cnf-wct, random")
      ->required();
  genc->add_option("--k", gen.K, "scenario count (tight, random)");
  genc->add_option("--n", gen.n, "job count (random)");
  genc->add_option("--cnf", gen.cnf_path, "DIMACS formula (cnf-* families)");
  genc->add_option("--level", gen.level, "threshold index (cnf-wct)");
  genc->add_option("--owa-out", gen.owa_out, "write the paired weight vector (cnf-wct)");
  genc->add_option("--seed", gen.seed, "random seed");
  genc->add_option("--min-value", gen.min_value, "lower draw bound (random)");
  genc->add_option("--max-value", gen.max_value, "upper draw bound (random)");
  genc->add_option("--density", gen.density, "precedence edge probability (random)");
  genc->add_flag("--unit-time", gen.unit_time, "unit processing times (random)");
  genc->add_flag("--det-p", gen.det_p, "scenario-independent processing times (random)");
  genc->add_flag("--det-w", gen.det_w, "scenario-independent weights (random)");
  genc->add_flag("--fractional", gen.fractional, "allow non-integral parameters (random)");
  genc->add_option("--objective", gen.objective, "max_wt or sum_wc (random)");
  genc->add_option("--out", gen.out_path, "write the instance here instead of stdout");

  CLI::App* benchc = app.add_subcommand("bench", "run a suite and print a CSV table");
  benchc->add_option("--suite", bench.suite_path, "suite JSON file")->required();
  benchc->add_option("--out", bench.out_path, "write the CSV here instead of stdout");
  benchc->add_flag("--no-ratio", bench.no_ratio, "skip the oracle and ratio columns");
  benchc->add_option("--jobs", bench.jobs, "worker threads for suite runs")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      cfg.command = "solve";
      return clidetail::cmd_solve(cfg);
    }
    if (eval->parsed()) {
      cfg.command = "eval";
      return clidetail::cmd_eval(cfg);
    }
    if (genc->parsed()) return clidetail::cmd_gen(gen);
    return clidetail::cmd_bench(bench);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const LpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& line : e.violations) std::cerr << "  - " << line << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace owasched
