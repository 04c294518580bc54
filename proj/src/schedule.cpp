#include "btsff/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "btsff/lp.hpp"
#include "btsff/stn.hpp"

namespace btsff {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::Cover: return "cover";
    case Violation::Pairing: return "pairing";
    case Violation::Precedence: return "precedence";
    case Violation::Capacity: return "capacity";
    case Violation::TimeWindow: return "time-window";
    case Violation::Timing: return "timing";
    case Violation::RideTime: return "ride-time";
    case Violation::Battery: return "battery";
    case Violation::Charging: return "charging";
    case Violation::Fleet: return "fleet";
    case Violation::Objective: return "objective";
  }
  return "?";
}

bool ValidationReport::has(Violation v) const {
  return std::any_of(violations.begin(), violations.end(), [&](const auto& r) { return r.kind == v; });
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  out << "status " << (ok() ? "pass" : "fail") << '\n';
  for (const auto& r : violations) {
    out << "violation " << to_string(r.kind) << " route=" << r.route << " location=" << r.location
        << " amount=" << r.amount << " " << r.detail << '\n';
  }
  return out.str();
}

RouteSummary summarize(const RoutePath& path, const Instance& inst) {
  RouteSummary s;
  const auto& v = path.visits;
  std::vector<double> arrive(v.size(), 0.0);
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    s.travel_cost += inst.arc(v[k], v[k + 1]).travel_cost;
    arrive[k + 1] = arrive[k] + inst.arc(v[k], v[k + 1]).travel_time;
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (inst.is_pickup(v[k])) pos[v[k]] = k;
    if (inst.is_delivery(v[k])) {
      auto it = pos.find(inst.partner(v[k]));
      if (it != pos.end()) s.detour_excess += arrive[k] - arrive[it->second] - inst.direct_time(it->first);
    }
  }
  return s;
}

std::string structural_problem(const RoutePath& path, const Instance& inst) {
  const auto& v = path.visits;
  if (v.size() < 2) return "route needs at least two visits";
  if (!inst.is_origin(v.front())) return "route must start at an origin depot";
  if (!inst.is_destination(v.back())) return "route must end at a destination depot";
  std::set<int> picked, dropped;
  int load = 0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const int i = v[k];
    if (i < 0 || i >= static_cast<int>(inst.size())) return "unknown location";
    if (inst.is_origin(i) || inst.is_destination(i)) return "depot inside route";
    if (inst.is_station(i)) {
      if (load != 0) return "station visited with passengers on board";
      continue;
    }
    if (inst.is_pickup(i)) {
      if (!picked.insert(i).second) return "pickup visited twice";
    } else {
      if (!picked.count(inst.partner(i))) return "delivery before pickup";
      if (!dropped.insert(i).second) return "delivery visited twice";
    }
    load += inst.locations[i].load_delta;
    if (load > inst.capacity) return "capacity exceeded";
  }
  if (picked.size() != dropped.size() || load != 0) return "customer picked up but not delivered";
  return {};
}

namespace {

struct PathData {
  std::vector<double> lo, hi, travel, consumption;
  std::vector<int> stations;  // visit positions
  std::vector<std::pair<int, int>> rides;  // (pickup position, delivery position)
};

PathData path_data(const RoutePath& path, const Instance& inst) {
  PathData d;
  const auto& v = path.visits;
  const std::size_t m = v.size();
  d.lo.resize(m);
  d.hi.resize(m);
  d.travel.assign(m, 0.0);
  d.consumption.assign(m, 0.0);
  std::map<int, int> pickup_pos;
  for (std::size_t k = 0; k < m; ++k) {
    const auto& loc = inst.locations[v[k]];
    d.lo[k] = loc.window.earliest;
    d.hi[k] = loc.window.latest;
    if (inst.is_station(v[k])) {
      d.lo[k] = inst.t_min;
      d.hi[k] = inst.t_max;
      d.stations.push_back(static_cast<int>(k));
    }
    if (k + 1 < m) {
      d.travel[k] = inst.arc(v[k], v[k + 1]).travel_time;
      d.consumption[k] = inst.arc(v[k], v[k + 1]).battery;
    }
    if (inst.is_pickup(v[k])) pickup_pos[v[k]] = static_cast<int>(k);
    if (inst.is_delivery(v[k])) {
      auto it = pickup_pos.find(inst.partner(v[k]));
      if (it != pickup_pos.end()) d.rides.emplace_back(it->second, static_cast<int>(k));
    }
  }
  return d;
}

Stn make_stn(const PathData& d, const RoutePath& path, const Instance& inst, const std::vector<double>& dwell) {
  Stn stn(d.lo, d.hi);
  for (std::size_t k = 0; k + 1 < d.lo.size(); ++k) stn.add_min_gap(static_cast<int>(k), static_cast<int>(k + 1), d.travel[k] + dwell[k]);
  for (auto [p, q] : d.rides) stn.add_max_gap(p, q, inst.locations[path.visits[p]].max_ride);
  return stn;
}

// Battery on arrival given charges; empty when a bound is broken.
std::optional<std::vector<double>> battery_trajectory(const PathData& d, const Instance& inst, bool swap,
                                                      std::vector<double>& charge) {
  const std::size_t m = d.lo.size();
  std::vector<double> b(m, 0.0);
  b[0] = inst.b_max;
  std::vector<bool> is_station(m, false);
  for (int k : d.stations) is_station[k] = true;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (is_station[k] && swap) charge[k] = inst.b_max - b[k];
    if (b[k] + charge[k] > inst.b_max + kEps) return std::nullopt;
    b[k + 1] = b[k] + charge[k] - d.consumption[k];
    if (b[k + 1] < inst.b_min - kEps) return std::nullopt;
  }
  if (!swap && b[m - 1] < inst.depot_return_soc() - kEps) return std::nullopt;
  return b;
}

ScheduleResult finish(const RoutePath& path, const Instance& inst, std::vector<double> times, std::vector<double> charge,
                      std::vector<double> battery) {
  ScheduleResult r;
  r.feasible = true;
  r.excess_ride_total = excess_of(path, inst, times);
  r.time = std::move(times);
  r.charge = std::move(charge);
  r.battery_arrival = std::move(battery);
  return r;
}

// Smallest charge at each station that keeps the battery feasible up to the next station.
std::optional<std::vector<double>> greedy_charges(const PathData& d, const Instance& inst) {
  const std::size_t m = d.lo.size();
  std::vector<double> charge(m, 0.0);
  std::vector<bool> is_station(m, false);
  for (int k : d.stations) is_station[k] = true;
  double b = inst.b_max;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (is_station[k]) {
      double need = 0.0, used = 0.0;
      for (std::size_t j = k + 1; j < m; ++j) {
        used += d.consumption[j - 1];
        const double floor_j = j + 1 == m ? inst.depot_return_soc() : inst.b_min;
        need = std::max(need, used + floor_j);
        if (is_station[j]) break;
      }
      charge[k] = std::max(0.0, need - b);
      if (b + charge[k] > inst.b_max + kEps) return std::nullopt;
      b += charge[k];
    }
    b -= d.consumption[k];
  }
  return charge;
}

LinearProblem schedule_lp(const PathData& d, const RoutePath& path, const Instance& inst, bool swap, bool minimize_excess,
                          std::vector<int>& charge_col) {
  const std::size_t m = d.lo.size();
  LinearProblem lp;
  for (std::size_t k = 0; k < m; ++k) lp.add_column(0.0, d.lo[k], d.hi[k]);
  charge_col.assign(m, -1);
  const double rate = inst.charge_rate();
  if (!swap) {
    for (int k : d.stations) charge_col[k] = lp.add_column(0.0, 0.0, inst.b_max - inst.b_min);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    LinearRow row{{static_cast<int>(k + 1), static_cast<int>(k)}, {1.0, -1.0}, d.travel[k], kInf, {}};
    if (charge_col[k] >= 0) {
      row.index.push_back(charge_col[k]);
      row.value.push_back(-1.0 / rate);
    }
    lp.add_row(std::move(row));
  }
  for (auto [p, q] : d.rides) {
    lp.add_row({{q, p}, {1.0, -1.0}, -kInf, inst.locations[path.visits[p]].max_ride, {}});
    if (minimize_excess) {
      lp.cost[q] += 1.0;
      lp.cost[p] -= 1.0;
    }
  }
  if (!swap && !d.stations.empty()) {
    double used = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
      used += d.consumption[j - 1];
      LinearRow reach;
      for (int s : d.stations) {
        if (static_cast<std::size_t>(s) < j) {
          reach.index.push_back(charge_col[s]);
          reach.value.push_back(1.0);
        }
      }
      const double floor_j = j + 1 == m ? inst.depot_return_soc() : inst.b_min;
      reach.lower = floor_j - inst.b_max + used;
      if (!reach.index.empty()) lp.add_row(reach);
      if (charge_col[j] >= 0) {
        LinearRow cap = reach;
        cap.index.push_back(charge_col[j]);
        cap.value.push_back(1.0);
        cap.lower = -kInf;
        cap.upper = used;
        lp.add_row(cap);
      }
    }
  }
  return lp;
}

MilpBackend& lp_backend() {
  thread_local std::unique_ptr<MilpBackend> backend = make_backend();
  return *backend;
}

std::optional<ScheduleResult> solve_schedule_lp(const PathData& d, const RoutePath& path, const Instance& inst, bool swap,
                                                bool minimize_excess) {
  std::vector<int> charge_col;
  LinearProblem lp = schedule_lp(d, path, inst, swap, minimize_excess, charge_col);
  SolveResult res = lp_backend().solve(lp, SolveOptions{});
  if (res.status != SolveStatus::Optimal || !res.has_solution) return std::nullopt;
  const std::size_t m = d.lo.size();
  std::vector<double> times(res.x.begin(), res.x.begin() + static_cast<long>(m));
  std::vector<double> charge(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    if (charge_col[k] >= 0) charge[k] = std::max(0.0, res.x[charge_col[k]]);
  }
  // LP tolerances leave tiny residuals; the STN pass snaps times onto an exactly feasible schedule.
  std::vector<double> dwell(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) dwell[k] = charge[k] / inst.charge_rate();
  auto battery = battery_trajectory(d, inst, swap, charge);
  if (!battery) return std::nullopt;
  Stn stn = make_stn(d, path, inst, dwell);
  auto exact = stn.project(times);
  if (!exact) return std::nullopt;
  return finish(path, inst, std::move(*exact), std::move(charge), std::move(*battery));
}

}  // namespace

double excess_of(const RoutePath& path, const Instance& inst, const std::vector<double>& times) {
  double total = 0.0;
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < path.visits.size() && k < times.size(); ++k) {
    const int i = path.visits[k];
    if (inst.is_pickup(i)) pos[i] = k;
    if (inst.is_delivery(i)) {
      auto it = pos.find(inst.partner(i));
      if (it != pos.end()) total += times[k] - times[it->second] - inst.direct_time(it->first);
    }
  }
  return total;
}

std::optional<ScheduleResult> feasible_schedule(const RoutePath& path, const Instance& inst, bool battery_swap) {
  if (!structural_problem(path, inst).empty()) return std::nullopt;
  const PathData d = path_data(path, inst);
  const std::size_t m = d.lo.size();
  std::vector<double> charge(m, 0.0);
  if (battery_swap || d.stations.empty()) {
    auto battery = battery_trajectory(d, inst, battery_swap, charge);
    if (!battery) return std::nullopt;
    auto times = make_stn(d, path, inst, std::vector<double>(m, 0.0)).earliest();
    if (!times) return std::nullopt;
    return finish(path, inst, std::move(*times), std::move(charge), std::move(*battery));
  }
  // Necessary conditions: time with no charging, battery with full recharges.
  if (!make_stn(d, path, inst, std::vector<double>(m, 0.0)).earliest()) return std::nullopt;
  {
    std::vector<double> full(m, 0.0);
    if (!battery_trajectory(d, inst, true, full)) return std::nullopt;
  }
  if (auto greedy = greedy_charges(d, inst)) {
    std::vector<double> dwell(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) dwell[k] = (*greedy)[k] / inst.charge_rate();
    auto battery = battery_trajectory(d, inst, false, *greedy);
    auto times = make_stn(d, path, inst, dwell).earliest();
    if (battery && times) return finish(path, inst, std::move(*times), std::move(*greedy), std::move(*battery));
  }
  return solve_schedule_lp(d, path, inst, false, false);
}

std::optional<ScheduleResult> min_excess_schedule(const RoutePath& path, const Instance& inst, bool battery_swap) {
  auto first = feasible_schedule(path, inst, battery_swap);
  if (!first) return std::nullopt;
  const PathData d = path_data(path, inst);
  if (d.rides.empty()) return first;
  const RouteSummary summary = summarize(path, inst);
  // Already as good as a schedule without waiting can be.
  if (first->excess_ride_total <= summary.detour_excess + kEps) return first;
  auto best = solve_schedule_lp(d, path, inst, battery_swap, true);
  if (!best || best->excess_ride_total > first->excess_ride_total) return first;
  return best;
}

ValidationReport validate_solution(const Solution& sol, const Instance& inst, bool battery_swap) {
  ValidationReport report;
  auto add = [&](Violation v, int route, int loc, double amount, std::string detail) {
    report.violations.push_back({v, route, loc, amount, std::move(detail)});
  };
  constexpr double tol = 1e-6;

  std::vector<int> served(inst.size(), 0);
  for (const auto& r : sol.routes) {
    for (int i : r.path.visits) {
      if (i >= 0 && i < static_cast<int>(inst.size()) && inst.is_pickup(i)) ++served[i];
    }
  }
  for (int p = 1; p <= inst.n; ++p) {
    if (served[p] != 1) {
      add(Violation::Cover, -1, p, served[p], "customer served " + std::to_string(served[p]) + " times (must be exactly once)");
    }
  }

  if (static_cast<int>(sol.routes.size()) > inst.fleet_size) {
    add(Violation::Fleet, -1, -1, static_cast<double>(sol.routes.size()), "more routes than vehicles");
  }
  if (inst.depot_mode == DepotMode::Distinct) {
    std::set<int> origins_used, dests_used;
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
      const auto& v = sol.routes[r].path.visits;
      if (v.empty()) continue;
      if (!origins_used.insert(v.front()).second) add(Violation::Fleet, static_cast<int>(r), v.front(), 1, "origin depot used twice");
      if (!dests_used.insert(v.back()).second) add(Violation::Fleet, static_cast<int>(r), v.back(), 1, "destination depot used twice");
    }
    if (static_cast<int>(origins_used.size()) != inst.fleet_size) add(Violation::Fleet, -1, -1, 0, "some origin depot unused");
  }

  double objective = 0.0;
  for (std::size_t ri = 0; ri < sol.routes.size(); ++ri) {
    const int r = static_cast<int>(ri);
    const auto& route = sol.routes[ri];
    const auto& v = route.path.visits;
    if (v.size() < 2 || !inst.is_origin(v.front()) || !inst.is_destination(v.back())) {
      add(Violation::Pairing, r, -1, 0, "route must run from an origin to a destination depot");
      continue;
    }
    // Structure.
    std::map<int, std::size_t> pickup_pos;
    std::set<int> delivered;
    int load = 0;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      const int i = v[k];
      if (inst.is_station(i)) {
        if (load != 0) add(Violation::Charging, r, i, load, "station visited with passengers on board");
        continue;
      }
      if (inst.is_pickup(i)) {
        pickup_pos[i] = k;
      } else if (inst.is_delivery(i)) {
        if (!pickup_pos.count(inst.partner(i))) {
          bool later = std::find(v.begin() + static_cast<long>(k), v.end(), inst.partner(i)) != v.end();
          add(later ? Violation::Precedence : Violation::Pairing, r, i, 0,
              later ? "delivery before its pickup" : "delivery without pickup in the same route");
        }
        delivered.insert(inst.partner(i));
      }
      load += inst.locations[i].load_delta;
      if (load > inst.capacity) add(Violation::Capacity, r, i, load - inst.capacity, "load exceeds vehicle capacity");
    }
    for (auto [p, k] : pickup_pos) {
      if (!delivered.count(p)) add(Violation::Pairing, r, p, 0, "pickup without delivery in the same route");
    }

    const auto& s = route.schedule;
    const std::size_t m = v.size();
    if (s.time.size() != m || s.battery_arrival.size() != m || s.charge.size() != m) {
      add(Violation::Timing, r, -1, 0, "schedule length does not match route");
      continue;
    }
    const double rate = inst.charge_rate();
    for (std::size_t k = 0; k < m; ++k) {
      const int i = v[k];
      const auto& w = inst.locations[i].window;
      const double lo = inst.is_station(i) ? inst.t_min : w.earliest;
      const double hi = inst.is_station(i) ? inst.t_max : w.latest;
      if (s.time[k] < lo - tol) add(Violation::TimeWindow, r, i, lo - s.time[k], "service before earliest time");
      if (s.time[k] > hi + tol) add(Violation::TimeWindow, r, i, s.time[k] - hi, "service after latest time");
      if (k + 1 < m) {
        const double dwell = inst.is_station(i) && !battery_swap ? s.charge[k] / rate : 0.0;
        const double need = s.time[k] + dwell + inst.arc(i, v[k + 1]).travel_time;
        if (s.time[k + 1] < need - tol) add(Violation::Timing, r, v[k + 1], need - s.time[k + 1], "arrives before it can");
      }
      if (s.charge[k] < -tol || (s.charge[k] > tol && !inst.is_station(i))) {
        add(Violation::Charging, r, i, s.charge[k], "charge recorded outside a station or negative");
      }
    }
    for (auto [p, k] : pickup_pos) {
      auto it = std::find(v.begin(), v.end(), inst.partner(p));
      if (it == v.end()) continue;
      const double ride = s.time[static_cast<std::size_t>(it - v.begin())] - s.time[k];
      if (ride > inst.locations[p].max_ride + tol) add(Violation::RideTime, r, p, ride - inst.locations[p].max_ride, "ride time above cap");
    }
    // Battery recomputed from arc data and stored charges.
    double b = inst.b_max;
    for (std::size_t k = 0; k < m; ++k) {
      if (std::abs(b - s.battery_arrival[k]) > tol) {
        add(Violation::Battery, r, v[k], b - s.battery_arrival[k], "stored battery differs from recomputed trajectory");
      }
      if (b < inst.b_min - tol) add(Violation::Battery, r, v[k], inst.b_min - b, "battery below minimum");
      if (k + 1 == m) {
        if (!battery_swap && b < inst.depot_return_soc() - tol) {
          add(Violation::Battery, r, v[k], inst.depot_return_soc() - b, "battery below the depot return threshold");
        }
        break;
      }
      double charged = s.charge[k];
      if (battery_swap && inst.is_station(v[k])) {
        if (std::abs(b + charged - inst.b_max) > tol) add(Violation::Charging, r, v[k], charged, "swap must restore full capacity");
        charged = inst.b_max - b;
      }
      if (b + charged > inst.b_max + tol) add(Violation::Charging, r, v[k], b + charged - inst.b_max, "charged above capacity");
      b += charged - inst.arc(v[k], v[k + 1]).battery;
    }
    objective += inst.lambda * summarize(route.path, inst).travel_cost + (1.0 - inst.lambda) * excess_of(route.path, inst, s.time);
  }
  if (std::abs(objective - sol.objective) > 1e-4 * std::max(1.0, std::abs(objective))) {
    add(Violation::Objective, -1, -1, sol.objective - objective, "reported objective differs from recomputation");
  }
  return report;
}

}  // namespace btsff
