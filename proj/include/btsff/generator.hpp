#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "btsff/instance.hpp"

namespace btsff {

struct GeneratorOptions {
  int n = 3;
  int vehicles = 1;
  int stations = 1;
  std::uint64_t seed = 1;
  double horizon = 240.0;
  int capacity = 3;
  double area = 10.0;           // coordinates in [-area, area]^2
  double window_width = 30.0;
  double service_time = 2.0;
  double ride_slack = 20.0;     // max ride = direct time + slack
  double battery = 0.0;         // driving-minutes; 0 picks a value from the geometry
  double gamma = 0.1;
  double charge_rate = 1.0;     // driving-minutes restored per minute
  double lambda = 0.75;
  bool integral_coordinates = true;
  DepotMode depot_mode = DepotMode::Common;
};

struct GeneratedInstance {
  Instance instance;
  std::vector<std::string> warnings;
};

/// Deterministic pseudo-random instance; the same options give the same instance.
GeneratedInstance generate_instance(const GeneratorOptions& options);

}  // namespace btsff
