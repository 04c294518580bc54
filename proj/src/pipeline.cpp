#include "btsff/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace btsff {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void write_number(std::ostream& out, double v) {
  if (std::isfinite(v)) out << v;
  else out << "-";
}

}  // namespace

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Optimal: return "optimal";
    case RunStatus::Feasible: return "feasible";
    case RunStatus::Infeasible: return "infeasible";
    case RunStatus::TimeLimit: return "time-limit";
    case RunStatus::Error: return "error";
  }
  return "?";
}

DiscreteInstance prepare_instance(const Instance& raw, const RunOptions& o) {
  if (o.time_unit <= 0.0 || o.battery_unit <= 0.0) throw std::invalid_argument("units must be positive");
  Instance inst = embed_service_times(raw);
  switch (o.variant) {
    case Variant::DEadarp:
      return discretize_instance(inst, o.time_unit, o.battery_unit, Rounding::DEadarp);
    case Variant::EadarpLowerBound: {
      DiscreteInstance di = discretize_instance(inst, o.time_unit, o.battery_unit, Rounding::Relaxed);
      di.base = inst;  // fragments and costs stay continuous
      return di;
    }
    case Variant::BatterySwap: {
      inst.gamma = 0.0;
      inst.return_soc = -1.0;
      inst = fold_swap_time(round_battery(inst, o.battery_unit));
      DiscreteInstance di = discretize_instance(inst, o.time_unit, o.battery_unit, Rounding::Relaxed);
      di.base = inst;
      return di;
    }
  }
  throw std::invalid_argument("unknown variant");
}

RunResult run_pipeline(const Instance& raw, const RunOptions& o) {
  const auto t0 = Clock::now();
  const std::clock_t c0 = std::clock();
  RunResult r;
  r.report.instance = raw.name;
  r.report.variant = o.variant;
  r.report.time_unit = o.time_unit;
  r.report.battery_unit = o.battery_unit;
  r.grid = prepare_instance(raw, o);
  r.working = r.grid.base;
  const bool swap = o.variant == Variant::BatterySwap;

  auto t = Clock::now();
  FragmentOptions fo;
  fo.parallel = o.parallel;
  r.fragments = enumerate_fragments(r.working, fo);
  r.report.fragment_seconds = since(t);
  r.report.fragments = r.fragments.size();

  t = Clock::now();
  NetworkOptions no;
  no.battery_swap = swap;
  no.single_station = o.variant == Variant::DEadarp;
  no.parallel = o.parallel;
  no.check_dominance = o.check_dominance;
  r.network = build_network(r.grid, r.fragments, no);
  r.report.network_seconds = since(t);
  r.report.nodes = r.network.nodes.size();
  r.report.arcs = r.network.arcs.size();
  if (!o.export_network.empty()) {
    std::ofstream f(o.export_network);
    if (!f) throw std::runtime_error("cannot write " + o.export_network);
    write_network(f, r.network);
  }

  Model model = assemble_model(r.network, r.working, r.fragments);
  if (!o.export_model.empty()) {
    std::ofstream f(o.export_model);
    if (!f) throw std::runtime_error("cannot write " + o.export_model);
    write_mps(f, model.problem);
  }
  MipSettings ms;
  ms.solve.time_limit = o.time_limit;
  ms.solve.threads = o.threads;
  ms.solve.seed = o.seed;
  ms.lazy = o.variant != Variant::EadarpLowerBound;
  ms.battery_swap = swap;
  auto backend = make_backend();
  r.outcome = solve_model(model, r.network, r.fragments, r.working, ms, *backend);

  auto& rep = r.report;
  rep.cuts = r.outcome.cuts;
  rep.message = r.outcome.message;
  r.has_solution = r.outcome.has_solution;
  switch (r.outcome.status) {
    case SolveStatus::Optimal: rep.status = RunStatus::Optimal; break;
    case SolveStatus::Infeasible: rep.status = RunStatus::Infeasible; break;
    case SolveStatus::TimeLimit: rep.status = RunStatus::TimeLimit; break;
    case SolveStatus::Interrupted: rep.status = r.has_solution ? RunStatus::Feasible : RunStatus::Error; break;
    default: rep.status = RunStatus::Error; break;
  }
  if (r.has_solution) {
    r.solution = make_solution(r.outcome, r.fragments, r.working, swap);
    rep.objective = r.outcome.objective;
    rep.lower_bound = r.outcome.status == SolveStatus::Optimal ? std::min(r.outcome.bound, r.outcome.objective)
                                                               : r.outcome.bound;
    rep.gap = r.solution.gap;
  } else if (std::isfinite(r.outcome.bound)) {
    rep.lower_bound = r.outcome.bound;
  }
  rep.cpu_seconds = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;
  rep.wall_seconds = since(t0);
  r.solution.timings = {rep.fragment_seconds, rep.network_seconds, r.outcome.solver_seconds, rep.wall_seconds};
  return r;
}

RunResult run_bs_exact(const Instance& raw, RunOptions options) {
  options.variant = Variant::BatterySwap;
  return run_pipeline(raw, options);
}

void write_csv_header(std::ostream& out) {
  out << "instance,variant,time_unit,battery_unit,|F|,F-time,Net,CPU,Time,OBJ,LB,Gap,Cuts,Status\n";
}

void write_csv_row(std::ostream& out, const RunReport& r) {
  out << r.instance << ',' << to_string(r.variant) << ',' << r.time_unit << ',' << r.battery_unit << ',' << r.fragments
      << ',' << std::fixed << std::setprecision(3) << r.fragment_seconds << ',' << r.network_seconds << ','
      << r.cpu_seconds << ',' << r.wall_seconds << ',' << std::setprecision(4);
  write_number(out, r.objective);
  out << ',';
  write_number(out, r.lower_bound);
  out << ',';
  write_number(out, std::isfinite(r.gap) ? 100.0 * r.gap : r.gap);
  out << ',' << r.cuts << ',' << to_string(r.status) << '\n';
  out << std::defaultfloat;
}

void write_csv_average(std::ostream& out, const std::vector<RunReport>& rows) {
  if (rows.empty()) return;
  auto avg = [&](auto field) {
    double s = 0.0;
    int k = 0;
    for (const auto& r : rows) {
      const double v = field(r);
      if (std::isfinite(v)) {
        s += v;
        ++k;
      }
    }
    return k ? s / k : kInf;
  };
  RunReport a;
  a.instance = "Avg";
  a.variant = rows.front().variant;
  a.time_unit = rows.front().time_unit;
  a.battery_unit = rows.front().battery_unit;
  a.fragments = static_cast<std::size_t>(std::lround(avg([](const RunReport& r) { return double(r.fragments); })));
  a.fragment_seconds = avg([](const RunReport& r) { return r.fragment_seconds; });
  a.network_seconds = avg([](const RunReport& r) { return r.network_seconds; });
  a.cpu_seconds = avg([](const RunReport& r) { return r.cpu_seconds; });
  a.wall_seconds = avg([](const RunReport& r) { return r.wall_seconds; });
  a.objective = avg([](const RunReport& r) { return r.objective; });
  a.lower_bound = avg([](const RunReport& r) { return r.lower_bound; });
  a.gap = avg([](const RunReport& r) { return r.gap; });
  a.cuts = static_cast<int>(std::lround(avg([](const RunReport& r) { return double(r.cuts); })));
  int optimal = 0;
  for (const auto& r : rows) optimal += r.status == RunStatus::Optimal;
  a.status = optimal == static_cast<int>(rows.size()) ? RunStatus::Optimal : RunStatus::Feasible;
  write_csv_row(out, a);
}

RunReport parse_csv_row(const std::string& raw) {
  std::vector<std::string> f;
  std::string cell;
  std::string line = raw;
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  if (f.size() != 14) throw ParseError(1, "expected 14 columns, got " + std::to_string(f.size()));
  auto num = [&](const std::string& v) {
    if (v == "-") return kInf;
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw ParseError(1, "bad number '" + v + "'");
    }
  };
  RunReport r;
  r.instance = f[0];
  r.variant = parse_variant(f[1]);
  r.time_unit = num(f[2]);
  r.battery_unit = num(f[3]);
  r.fragments = static_cast<std::size_t>(num(f[4]));
  r.fragment_seconds = num(f[5]);
  r.network_seconds = num(f[6]);
  r.cpu_seconds = num(f[7]);
  r.wall_seconds = num(f[8]);
  r.objective = num(f[9]);
  r.lower_bound = f[10] == "-" ? -kInf : num(f[10]);
  r.gap = num(f[11]);
  if (std::isfinite(r.gap)) r.gap /= 100.0;
  r.cuts = static_cast<int>(num(f[12]));
  r.status = RunStatus::Error;
  for (RunStatus s : {RunStatus::Optimal, RunStatus::Feasible, RunStatus::Infeasible, RunStatus::TimeLimit, RunStatus::Error}) {
    if (f[13] == to_string(s)) r.status = s;
  }
  return r;
}

void write_solution(std::ostream& out, const RunResult& r) {
  out << "instance " << r.report.instance << '\n'
      << "variant " << to_string(r.report.variant) << '\n'
      << "status " << to_string(r.report.status) << '\n';
  out << std::setprecision(10);
  out << "objective ";
  write_number(out, r.report.objective);
  out << "\nlower_bound ";
  write_number(out, r.report.lower_bound);
  out << "\ngap ";
  write_number(out, r.report.gap);
  out << "\ncuts " << r.report.cuts << '\n';
  out << "routes " << r.solution.routes.size() << '\n';
  for (const auto& route : r.solution.routes) {
    out << "route " << route.vehicle << '\n' << "  visits";
    for (int v : route.path.visits) out << ' ' << v;
    out << '\n';
    if (!route.schedule.feasible) {
      out << "  unscheduled\n";
      continue;
    }
    out << "  time";
    for (double v : route.schedule.time) out << ' ' << v;
    out << "\n  battery";
    for (double v : route.schedule.battery_arrival) out << ' ' << v;
    out << "\n  charge";
    for (double v : route.schedule.charge) out << ' ' << v;
    out << '\n';
  }
}

Solution read_solution(std::istream& in) {
  Solution sol;
  std::string line;
  int lineno = 0;
  auto numbers = [&](std::istringstream& ss) {
    std::vector<double> v;
    double x;
    while (ss >> x) v.push_back(x);
    if (!ss.eof()) throw ParseError(lineno, "expected numbers");
    return v;
  };
  auto value = [&](std::istringstream& ss) {
    std::string tok;
    ss >> tok;
    if (tok == "-") return kInf;
    try {
      return std::stod(tok);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad number '" + tok + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "objective") sol.objective = value(ss);
    else if (key == "lower_bound") sol.lower_bound = value(ss);
    else if (key == "gap") sol.gap = value(ss);
    else if (key == "cuts") ss >> sol.cuts;
    else if (key == "route") {
      Route r;
      if (!(ss >> r.vehicle)) throw ParseError(lineno, "route needs a vehicle index");
      sol.routes.push_back(std::move(r));
    } else if (key == "visits" || key == "time" || key == "battery" || key == "charge" || key == "unscheduled") {
      if (sol.routes.empty()) throw ParseError(lineno, key + " before any route");
      auto& r = sol.routes.back();
      if (key == "visits") {
        for (double v : numbers(ss)) r.path.visits.push_back(static_cast<int>(v));
      } else if (key == "time") {
        r.schedule.time = numbers(ss);
        r.schedule.feasible = true;
      } else if (key == "battery") {
        r.schedule.battery_arrival = numbers(ss);
      } else if (key == "charge") {
        r.schedule.charge = numbers(ss);
      }
    } else if (key != "instance" && key != "variant" && key != "status" && key != "routes") {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
  }
  return sol;
}

}  // namespace btsff
