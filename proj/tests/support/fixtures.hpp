#pragma once

#include <sstream>
#include <string>

#include "btsff/generator.hpp"
#include "btsff/instance.hpp"

namespace testsupport {

// Two customers on a line, one station between them. Distances equal |dx|.
//   depot 0   p1 1   p2 4   d1 3   d2 6   station 2
inline const char* kLineInstance = R"(
[meta]
name line
n 2
t_min 0
t_max 100
lambda 0.5
[fleet]
vehicles 1
capacity 2
[battery]
b_max 20
b_min 0
gamma 0.1
alpha 1
beta 1
[nodes]
# id kind x y service load e l max_ride
0 origin 0 0 0 0 0 100 0
1 pickup 1 0 0 1 0 100 10
2 pickup 4 0 0 1 0 100 10
3 delivery 3 0 0 -1 0 100 0
4 delivery 6 0 0 -1 0 100 0
5 destination 0 0 0 0 0 100 0
[stations]
6 2 0
)";

inline btsff::Instance line_instance() {
  std::istringstream in(kLineInstance);
  return btsff::parse_instance(in, btsff::InstanceFormat::Native);
}

inline btsff::Instance from_native(const std::string& text) {
  std::istringstream in(text);
  return btsff::parse_instance(in, btsff::InstanceFormat::Native);
}

// Small random instance for property tests.
inline btsff::Instance random_instance(std::uint64_t seed, int n = 3, int vehicles = 1, int stations = 1,
                                       bool integral = true) {
  btsff::GeneratorOptions o;
  o.n = n;
  o.vehicles = vehicles;
  o.stations = stations;
  o.seed = seed;
  o.horizon = 150.0;
  o.integral_coordinates = integral;
  return btsff::generate_instance(o).instance;
}

}  // namespace testsupport
