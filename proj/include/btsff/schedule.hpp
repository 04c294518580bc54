#pragma once

#include <optional>
#include <string>
#include <vector>

#include "btsff/instance.hpp"

namespace btsff {

/// Physical route from an origin depot to a destination depot, stations included.
struct RoutePath {
  std::vector<int> visits;
};

struct ScheduleResult {
  bool feasible = false;
  std::vector<double> time;            // service start (arrival at stations)
  std::vector<double> battery_arrival;
  std::vector<double> charge;          // energy added at each visit (stations only)
  double excess_ride_total = 0.0;
};

/// Route-level quantities that do not depend on timing.
struct RouteSummary {
  double travel_cost = 0.0;
  double detour_excess = 0.0;  // excess ride time of the schedule without any waiting
};

RouteSummary summarize(const RoutePath& path, const Instance& inst);

/// Structural check: endpoints, pairing, precedence, capacity, stations only at zero load.
/// Returns an empty string when the path is well formed.
std::string structural_problem(const RoutePath& path, const Instance& inst);

/// Battery-swap routes reset SoC to b_max at stations and have no return threshold.
std::optional<ScheduleResult> feasible_schedule(const RoutePath& path, const Instance& inst, bool battery_swap);

/// Feasible schedule of least total excess ride time.
std::optional<ScheduleResult> min_excess_schedule(const RoutePath& path, const Instance& inst, bool battery_swap);

/// Recomputes the excess ride time of `times` along `path`.
double excess_of(const RoutePath& path, const Instance& inst, const std::vector<double>& times);

struct Route {
  int vehicle = 0;
  RoutePath path;
  ScheduleResult schedule;
};

struct Timings {
  double fragment_seconds = 0.0;
  double network_seconds = 0.0;
  double solver_cpu_seconds = 0.0;
  double total_seconds = 0.0;
};

struct Solution {
  std::vector<Route> routes;
  double objective = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  int cuts = 0;
  Timings timings;
};

enum class Violation {
  Cover,
  Pairing,
  Precedence,
  Capacity,
  TimeWindow,
  Timing,
  RideTime,
  Battery,
  Charging,
  Fleet,
  Objective,
};
std::string_view to_string(Violation v);

struct ViolationRecord {
  Violation kind;
  int route = -1;
  int location = -1;
  double amount = 0.0;  // size of the breach, in the natural unit of the constraint
  std::string detail;
};

struct ValidationReport {
  std::vector<ViolationRecord> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation v) const;
  std::string to_text() const;
};

/// Checks the stored schedules and the reported objective against `inst`.
ValidationReport validate_solution(const Solution& sol, const Instance& inst, bool battery_swap);

}  // namespace btsff
