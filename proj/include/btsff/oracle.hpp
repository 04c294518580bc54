#pragma once

#include <vector>

#include "btsff/instance.hpp"
#include "btsff/schedule.hpp"

namespace btsff {

struct OracleOptions {
  bool grid = false;  // solve the d-eadarp rounding of the instance instead of the instance itself
  double time_unit = 1.0;
  double battery_unit = 1.0;
  int max_stations_per_route = 2;
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<RoutePath> routes;
  std::vector<ScheduleResult> schedules;
  Variant variant = Variant::DEadarp;
  long evaluated = 0;  // schedules solved
};

/// Exhaustive optimum for tiny instances (n <= 5, |V| <= 2, |S| <= 2); expects service
/// times embedded. Battery-swap semantics when `variant` is BatterySwap.
OracleResult brute_force_solve(const Instance& inst, Variant variant, const OracleOptions& options = {});

}  // namespace btsff
