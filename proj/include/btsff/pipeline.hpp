#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "btsff/btsnet.hpp"
#include "btsff/fragments.hpp"
#include "btsff/instance.hpp"
#include "btsff/model.hpp"
#include "btsff/schedule.hpp"

namespace btsff {

struct RunOptions {
  Variant variant = Variant::EadarpLowerBound;
  double time_unit = 10.0;
  double battery_unit = 10.0;
  double time_limit = kInf;  // seconds
  int threads = 1;
  int seed = 0;
  bool parallel = true;
  bool check_dominance = false;
  std::string export_network;  // path, empty to skip
  std::string export_model;    // MPS path, empty to skip
};

enum class RunStatus { Optimal, Feasible, Infeasible, TimeLimit, Error };
std::string_view to_string(RunStatus status);

/// One results row.
struct RunReport {
  std::string instance;
  Variant variant = Variant::EadarpLowerBound;
  double time_unit = 0.0;
  double battery_unit = 0.0;
  std::size_t fragments = 0;
  double fragment_seconds = 0.0;
  double network_seconds = 0.0;
  double cpu_seconds = 0.0;
  double wall_seconds = 0.0;
  double objective = kInf;
  double lower_bound = -kInf;
  double gap = kInf;
  int cuts = 0;
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  RunStatus status = RunStatus::Error;
  std::string message;
};

struct RunResult {
  RunReport report;
  Instance working;  // instance the solution refers to
  DiscreteInstance grid;
  std::vector<Fragment> fragments;
  BtsNetwork network;
  MipOutcome outcome;
  Solution solution;
  bool has_solution = false;
};

/// Instance the given variant optimizes over: service embedded, then the variant's rounding.
DiscreteInstance prepare_instance(const Instance& raw, const RunOptions& options);

/// Fragments, network, model, solve.
RunResult run_pipeline(const Instance& raw, const RunOptions& options);

/// Exact battery-swap optimum via lazy schedule cuts.
RunResult run_bs_exact(const Instance& raw, RunOptions options);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const RunReport& report);
/// Averages the numeric columns of `rows` (infinite values skipped).
void write_csv_average(std::ostream& out, const std::vector<RunReport>& rows);

/// Inverse of write_csv_row; throws ParseError on malformed rows.
RunReport parse_csv_row(const std::string& line);

void write_solution(std::ostream& out, const RunResult& result);
/// Reads the routes and objective written by write_solution.
Solution read_solution(std::istream& in);

}  // namespace btsff
