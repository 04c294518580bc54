#pragma once

// Minimum total excess ride time of a customer path over schedules whose service starts lie
// on a `step`-minute grid: an integer program in grid indices, solved directly with HiGHS.

#include <cmath>
#include <optional>
#include <vector>

#include "Highs.h"
#include "btsff/instance.hpp"

namespace testsupport {

inline std::optional<double> grid_min_excess(const btsff::Instance& inst, const std::vector<int>& path, double step = 0.1) {
  auto up = [&](double v) { return std::ceil(v / step - 1e-9); };
  auto down = [&](double v) { return std::floor(v / step + 1e-9); };
  const int m = static_cast<int>(path.size());
  Highs h;
  h.setOptionValue("output_flag", false);
  h.setOptionValue("threads", 1);
  double offset = 0.0;
  std::vector<double> cost(m, 0.0);
  for (int a = 0; a < m; ++a) {
    if (!inst.is_pickup(path[a])) continue;
    for (int b = a + 1; b < m; ++b) {
      if (path[b] != inst.partner(path[a])) continue;
      cost[a] -= step;
      cost[b] += step;
      offset -= inst.arc(path[a], path[b]).travel_time;
    }
  }
  for (int k = 0; k < m; ++k) {
    const auto& w = inst.locations[path[k]].window;
    if (up(w.earliest) > down(w.latest)) return std::nullopt;
    h.addCol(cost[k], up(w.earliest), down(w.latest), 0, nullptr, nullptr);
    h.changeColIntegrality(k, HighsVarType::kInteger);
  }
  auto gap = [&](int i, int j, double lo, double hi) {  // lo <= z_j - z_i <= hi
    const HighsInt idx[2] = {i, j};
    const double val[2] = {-1.0, 1.0};
    h.addRow(lo, hi, 2, idx, val);
  };
  const double inf = kHighsInf;
  for (int k = 0; k + 1 < m; ++k) gap(k, k + 1, up(inst.arc(path[k], path[k + 1]).travel_time), inf);
  for (int a = 0; a < m; ++a) {
    if (!inst.is_pickup(path[a])) continue;
    for (int b = a + 1; b < m; ++b) {
      if (path[b] == inst.partner(path[a])) gap(a, b, -inf, down(inst.locations[path[a]].max_ride));
    }
  }
  h.run();
  if (h.getModelStatus() != HighsModelStatus::kOptimal) return std::nullopt;
  return h.getInfo().objective_function_value + offset;
}

}  // namespace testsupport
