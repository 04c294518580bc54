#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "btsff/generator.hpp"
#include "btsff/oracle.hpp"
#include "btsff/pipeline.hpp"

using namespace btsff;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kInfeasible = 3, kTimeLimit = 4, kSolver = 5, kInvalid = 6 };

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  solved (optimal or feasible), solution valid, instance written\n"
    "  1  bad command line\n"
    "  2  unreadable or invalid input\n"
    "  3  infeasible\n"
    "  4  time limit reached\n"
    "  5  solver or internal error\n"
    "  6  solution failed validation\n"
    "Backend: BTSFF_BACKEND (default highs)";

struct Common {
  std::string config;
  std::string format = "auto";
  std::string variant;
  double time_unit = -1.0;
  double battery_unit = -1.0;
  double gamma = -1.0;
  double lambda = -1.0;
  double battery_scale = -1.0;
  double time_limit = -1.0;
  int seed = 0;
  int jobs = 0;
  bool serial = false;
};

void add_common(CLI::App* app, Common& c, bool with_variant = true) {
  app->add_option("--config", c.config, "run configuration (key = value)")->check(CLI::ExistingFile);
  app->add_option("--format", c.format, "instance format")->check(CLI::IsMember({"auto", "native", "ar", "u"}));
  if (with_variant) {
    app->add_option("--variant", c.variant, "deadarp | eadarp-lb | bs")
        ->check(CLI::IsMember({"deadarp", "d-eadarp", "eadarp-lb", "bs"}));
  }
  app->add_option("--time-unit", c.time_unit, "time grid unit (minutes)")->check(CLI::PositiveNumber);
  app->add_option("--battery-unit", c.battery_unit, "battery grid unit")->check(CLI::PositiveNumber);
  app->add_option("--gamma", c.gamma, "minimum return SoC ratio")->check(CLI::Range(0.0, 1.0));
  app->add_option("--lambda", c.lambda, "cost weight")->check(CLI::Range(0.0, 1.0));
  app->add_option("--battery-scale", c.battery_scale, "battery capacity multiplier")->check(CLI::PositiveNumber);
  app->add_option("--time-limit", c.time_limit, "solver time limit (s)")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "solver seed");
  app->add_option("--jobs", c.jobs, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  app->add_flag("--serial", c.serial, "serial fragment and network kernels");
}

RunConfig config_of(const Common& c) { return c.config.empty() ? RunConfig{} : load_config(c.config); }

Instance read_instance(const std::string& path, const Common& c, const RunConfig& cfg) {
  InstanceFormat fmt = guess_format(path);
  if (c.format == "native") fmt = InstanceFormat::Native;
  else if (c.format == "ar") fmt = InstanceFormat::BenchmarkAR;
  else if (c.format == "u") fmt = InstanceFormat::BenchmarkU;
  Instance inst = load_instance(path, fmt, cfg);
  const double gamma = c.gamma >= 0.0 ? c.gamma : cfg.gamma;
  const double lambda = c.lambda >= 0.0 ? c.lambda : cfg.lambda;
  if (gamma >= 0.0) inst.gamma = gamma;
  if (lambda >= 0.0) inst.lambda = lambda;
  const double scale = c.battery_scale > 0.0 ? c.battery_scale : 1.0;
  if (fmt == InstanceFormat::Native && cfg.battery_capacity_scale != 1.0) inst = scale_battery(inst, cfg.battery_capacity_scale);
  if (scale != 1.0) inst = scale_battery(inst, scale);
  if (fmt == InstanceFormat::Native && cfg.swap_time > 0.0) inst.swap_time = cfg.swap_time;
  validate(inst);
  return inst;
}

RunOptions options_of(const Common& c, const RunConfig& cfg, Variant fallback) {
  RunOptions o;
  o.variant = c.variant.empty() ? fallback : parse_variant(c.variant);
  o.time_unit = c.time_unit > 0.0 ? c.time_unit : cfg.time_unit;
  if (o.variant == Variant::BatterySwap && c.time_unit <= 0.0 && c.config.empty()) o.time_unit = 50.0;
  o.battery_unit = c.battery_unit > 0.0 ? c.battery_unit : cfg.battery_unit;
  if (c.time_limit > 0.0) o.time_limit = c.time_limit;
  o.seed = c.seed;
  o.parallel = !c.serial;
  o.threads = c.jobs > 0 ? c.jobs : omp_get_max_threads();
  if (c.jobs > 0) omp_set_num_threads(c.jobs);
  return o;
}

int exit_of(RunStatus s) {
  switch (s) {
    case RunStatus::Optimal:
    case RunStatus::Feasible: return kOk;
    case RunStatus::Infeasible: return kInfeasible;
    case RunStatus::TimeLimit: return kTimeLimit;
    case RunStatus::Error: return kSolver;
  }
  return kSolver;
}

void print_warnings(const DiscreteInstance& di) {
  for (const auto& w : di.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battery-time-space fragment solver for electric dial-a-ride problems"};
  app.require_subcommand(1);
  app.footer(kExitCodes);

  Common solve_c, bound_c, valid_c, bench_c, oracle_c;
  std::string instance_path, solution_out, csv_out, export_net, export_model, solution_in;
  std::vector<std::string> bench_paths;

  auto* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("instance", instance_path, "instance file")->required()->check(CLI::ExistingFile);
  add_common(solve, solve_c);
  solve->add_option("--solution", solution_out, "write the solution here");
  solve->add_option("--csv", csv_out, "append the results row here");
  solve->add_option("--export-net", export_net, "write the network arc list");
  solve->add_option("--export-model", export_model, "write the model in MPS format");

  auto* bound = app.add_subcommand("bound", "relaxed lower bound (eadarp-lb)");
  bound->add_option("instance", instance_path, "instance file")->required()->check(CLI::ExistingFile);
  add_common(bound, bound_c, false);
  bound->add_option("--export-net", export_net, "write the network arc list");
  bound->add_option("--export-model", export_model, "write the model in MPS format");

  auto* validate_cmd = app.add_subcommand("validate", "check a solution file against an instance");
  validate_cmd->add_option("instance", instance_path, "instance file")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("solution", solution_in, "solution file")->required()->check(CLI::ExistingFile);
  add_common(validate_cmd, valid_c);

  GeneratorOptions gen;
  std::string gen_out;
  std::string depot_mode = "common";
  auto* generate = app.add_subcommand("generate", "write a random instance");
  generate->add_option("--n", gen.n, "customers")->check(CLI::PositiveNumber);
  generate->add_option("--vehicles", gen.vehicles, "vehicles")->check(CLI::PositiveNumber);
  generate->add_option("--stations", gen.stations, "charging stations")->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen.seed, "random seed");
  generate->add_option("--horizon", gen.horizon, "planning horizon (minutes)")->check(CLI::PositiveNumber);
  generate->add_option("--capacity", gen.capacity, "vehicle capacity")->check(CLI::PositiveNumber);
  generate->add_option("--battery", gen.battery, "battery capacity (driving-minutes)")->check(CLI::NonNegativeNumber);
  generate->add_option("--gamma", gen.gamma, "minimum return SoC ratio")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--depots", depot_mode, "common | distinct")->check(CLI::IsMember({"common", "distinct"}));
  generate->add_option("-o,--out", gen_out, "output path (stdout if omitted)");

  auto* bench = app.add_subcommand("bench", "solve several instances and print a results table");
  bench->add_option("instances", bench_paths, "instance files");
  add_common(bench, bench_c, false);
  bench->add_option("--variant", bench_c.variant, "comma-separated variants");

  auto* oracle = app.add_subcommand("oracle", "brute-force optimum of a tiny instance");
  oracle->add_option("instance", instance_path, "instance file")->required()->check(CLI::ExistingFile);
  add_common(oracle, oracle_c);
  bool oracle_grid = false;
  oracle->add_flag("--grid", oracle_grid, "solve the d-eadarp rounding of the instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve || *bound) {
      const bool is_bound = bound->parsed();
      const Common& c = is_bound ? bound_c : solve_c;
      const RunConfig cfg = config_of(c);
      Instance inst = read_instance(instance_path, c, cfg);
      RunOptions o = options_of(c, cfg, is_bound ? Variant::EadarpLowerBound : cfg.variant);
      o.export_network = export_net;
      o.export_model = export_model;
      RunResult r = run_pipeline(inst, o);
      print_warnings(r.grid);
      write_csv_header(std::cout);
      write_csv_row(std::cout, r.report);
      if (!r.report.message.empty() && r.report.status != RunStatus::Optimal) std::cerr << r.report.message << '\n';
      if (!solution_out.empty()) {
        std::ofstream f(solution_out);
        if (!f) throw std::runtime_error("cannot write " + solution_out);
        write_solution(f, r);
      }
      if (!csv_out.empty()) {
        const bool fresh = !std::ifstream(csv_out).good();
        std::ofstream f(csv_out, std::ios::app);
        if (fresh) write_csv_header(f);
        write_csv_row(f, r.report);
      }
      return exit_of(r.report.status);
    }
    if (*validate_cmd) {
      const RunConfig cfg = config_of(valid_c);
      Instance inst = read_instance(instance_path, valid_c, cfg);
      RunOptions o = options_of(valid_c, cfg, cfg.variant);
      const Instance working = prepare_instance(inst, o).base;
      std::ifstream f(solution_in);
      Solution sol = read_solution(f);
      ValidationReport rep = validate_solution(sol, working, o.variant == Variant::BatterySwap);
      std::cout << rep.to_text();
      return rep.violations.empty() ? kOk : kInvalid;
    }
    if (*generate) {
      gen.depot_mode = depot_mode == "distinct" ? DepotMode::Distinct : DepotMode::Common;
      GeneratedInstance g = generate_instance(gen);
      for (const auto& w : g.warnings) std::cerr << "warning: " << w << '\n';
      if (gen_out.empty()) {
        write_native(std::cout, g.instance);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw std::runtime_error("cannot write " + gen_out);
        write_native(f, g.instance);
      }
      return kOk;
    }
    if (*bench) {
      const RunConfig cfg = config_of(bench_c);
      std::vector<Variant> variants;
      {
        std::istringstream vs(bench_c.variant);
        std::string v;
        while (std::getline(vs, v, ',')) variants.push_back(parse_variant(v));
        if (variants.empty()) variants.push_back(cfg.variant);
      }
      Common single = bench_c;
      single.variant.clear();
      const int jobs = bench_c.jobs > 0 ? bench_c.jobs : 1;
      write_csv_header(std::cout);
      int worst = kOk;
      for (Variant v : variants) {
        std::vector<RunReport> rows(bench_paths.size());
        std::vector<std::string> errors(bench_paths.size());
        RunOptions o = options_of(single, cfg, v);
        if (jobs > 1) o.parallel = false;  // instances are the parallel unit
        if (jobs > 1) o.threads = 1;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (std::size_t i = 0; i < bench_paths.size(); ++i) {
          rows[i].instance = bench_paths[i];
          rows[i].variant = v;
          rows[i].time_unit = o.time_unit;
          rows[i].battery_unit = o.battery_unit;
          try {
            Instance inst = read_instance(bench_paths[i], single, cfg);
            rows[i] = run_pipeline(inst, o).report;
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (!errors[i].empty()) std::cerr << bench_paths[i] << ": " << errors[i] << '\n';
          write_csv_row(std::cout, rows[i]);
          worst = std::max(worst, errors[i].empty() ? exit_of(rows[i].status) : static_cast<int>(kInput));
        }
        write_csv_average(std::cout, rows);
      }
      return worst;
    }
    if (*oracle) {
      const RunConfig cfg = config_of(oracle_c);
      Instance inst = read_instance(instance_path, oracle_c, cfg);
      RunOptions o = options_of(oracle_c, cfg, cfg.variant);
      OracleOptions oo;
      oo.grid = oracle_grid;
      oo.time_unit = o.time_unit;
      oo.battery_unit = o.battery_unit;
      Instance prepared = embed_service_times(inst);
      if (o.variant == Variant::BatterySwap) prepared = prepare_instance(inst, o).base;
      OracleResult res = brute_force_solve(prepared, o.variant, oo);
      if (!res.feasible) {
        std::cout << "infeasible\n";
        return kInfeasible;
      }
      std::cout << "objective " << std::setprecision(10) << res.objective << '\n';
      for (const auto& route : res.routes) {
        std::cout << "route";
        for (int v : route.visits) std::cout << ' ' << v;
        std::cout << '\n';
      }
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInput;
  } catch (const ValidationError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}
