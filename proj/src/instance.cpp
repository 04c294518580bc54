#include "btsff/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace btsff {

std::string_view to_string(LocationKind kind) {
  switch (kind) {
    case LocationKind::OriginDepot: return "origin";
    case LocationKind::Pickup: return "pickup";
    case LocationKind::Delivery: return "delivery";
    case LocationKind::Station: return "station";
    case LocationKind::DestinationDepot: return "destination";
  }
  return "?";
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::DEadarp: return "deadarp";
    case Variant::EadarpLowerBound: return "eadarp-lb";
    case Variant::BatterySwap: return "bs";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "deadarp" || text == "d-eadarp") return Variant::DEadarp;
  if (text == "eadarp-lb" || text == "eadarp" || text == "lb") return Variant::EadarpLowerBound;
  if (text == "bs" || text == "eadarp-bs") return Variant::BatterySwap;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

namespace {

LocationKind parse_kind(const std::string& s, int line) {
  if (s == "origin") return LocationKind::OriginDepot;
  if (s == "pickup") return LocationKind::Pickup;
  if (s == "delivery") return LocationKind::Delivery;
  if (s == "station") return LocationKind::Station;
  if (s == "destination") return LocationKind::DestinationDepot;
  throw ParseError(line, "unknown location kind '" + s + "'");
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> read_numbers(const std::string& line, int lineno, std::size_t expected) {
  std::istringstream ss(line);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected a number, got '" + tok + "'");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw ParseError(lineno, "expected " + std::to_string(expected) + " values, got " +
                                 std::to_string(out.size()));
  }
  return out;
}

void assign_ranges(Instance& inst) {
  inst.origins.clear();
  inst.destinations.clear();
  inst.stations.clear();
  for (const auto& loc : inst.locations) {
    switch (loc.kind) {
      case LocationKind::OriginDepot: inst.origins.push_back(loc.id); break;
      case LocationKind::DestinationDepot: inst.destinations.push_back(loc.id); break;
      case LocationKind::Station: inst.stations.push_back(loc.id); break;
      default: break;
    }
  }
}

Instance parse_benchmark(std::istream& in, const RunConfig& cfg, bool type_u) {
  Instance inst;
  std::string line;
  int lineno = 0;
  std::vector<double> header;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = strip_comment(line);
    if (s.empty()) continue;
    header = read_numbers(s, lineno, 5);
    break;
  }
  if (header.empty()) throw ParseError(lineno, "missing header line");
  inst.fleet_size = static_cast<int>(header[0]);
  inst.n = static_cast<int>(header[1]);
  inst.max_route_duration = header[2];
  inst.capacity = static_cast<int>(header[3]);
  const double max_ride = header[4];
  if (inst.n <= 0) throw ValidationError("n = 0");

  std::vector<std::pair<int, std::vector<double>>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = strip_comment(line);
    if (s.empty()) continue;
    auto v = read_numbers(s, lineno, 0);
    if (v.size() != 7) {
      throw ParseError(lineno, "node row needs 7 values (id x y service load e l), got " +
                                   std::to_string(v.size()));
    }
    rows.emplace_back(lineno, std::move(v));
  }
  const int n = inst.n;
  if (static_cast<int>(rows.size()) < 2 * n + 2) {
    throw ParseError(lineno, "expected " + std::to_string(2 * n + 2) + " node rows, got " +
                                 std::to_string(rows.size()));
  }
  for (int k = 0; k < static_cast<int>(rows.size()); ++k) {
    const auto& v = rows[k].second;
    Location loc;
    loc.id = k;
    loc.x = v[1];
    loc.y = v[2];
    loc.service_time = v[3];
    loc.load_delta = static_cast<int>(v[4]);
    loc.window = {v[5], v[6]};
    if (k == 0) {
      loc.kind = LocationKind::OriginDepot;
    } else if (k <= n) {
      loc.kind = LocationKind::Pickup;
      loc.max_ride = max_ride;
    } else if (k <= 2 * n) {
      loc.kind = LocationKind::Delivery;
    } else if (k == 2 * n + 1) {
      loc.kind = LocationKind::DestinationDepot;
    } else {
      loc.kind = LocationKind::Station;
      loc.load_delta = 0;
      loc.service_time = 0.0;
    }
    inst.locations.push_back(loc);
  }
  for (const auto& xy : cfg.station_coordinates) {
    Location loc;
    loc.id = static_cast<int>(inst.locations.size());
    loc.kind = LocationKind::Station;
    loc.x = xy.at(0);
    loc.y = xy.at(1);
    inst.locations.push_back(loc);
  }
  inst.t_min = inst.locations[0].window.earliest;
  inst.t_max = inst.locations[2 * n + 1].window.latest;
  for (auto& loc : inst.locations) {
    if (loc.kind == LocationKind::Station) loc.window = {inst.t_min, inst.t_max};
  }
  // Energy figures arrive in kWh; everything downstream is in driving-minutes.
  double capacity = cfg.battery_capacity_kwh;
  double discharge = cfg.discharge_rate_kwh;
  double charge = cfg.charge_rate_kwh;
  if (type_u && capacity == RunConfig{}.battery_capacity_kwh && discharge == RunConfig{}.discharge_rate_kwh) {
    capacity = 3.5;
    discharge = 0.0715;
  }
  inst.alpha = charge;
  inst.beta = discharge;
  inst.b_max = capacity / discharge * cfg.battery_capacity_scale;
  inst.b_min = 0.0;
  inst.gamma = cfg.gamma >= 0.0 ? cfg.gamma : 0.1;
  if (cfg.lambda >= 0.0) inst.lambda = cfg.lambda;
  inst.swap_time = cfg.swap_time;
  assign_ranges(inst);
  compute_euclidean_arcs(inst);
  validate(inst);
  return inst;
}

Instance parse_native(std::istream& in) {
  Instance inst;
  std::string line;
  std::string section;
  int lineno = 0;
  bool have_arcs = false;
  std::vector<std::tuple<int, int, ArcData>> arc_rows;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = strip_comment(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(lineno, "malformed section header");
      section = s.substr(1, s.size() - 2);
      if (section != "meta" && section != "nodes" && section != "stations" && section != "battery" &&
          section != "fleet" && section != "arcs") {
        throw ParseError(lineno, "unknown section [" + section + "]");
      }
      if (section == "arcs") have_arcs = true;
      continue;
    }
    std::istringstream ss(s);
    if (section == "meta" || section == "battery" || section == "fleet") {
      std::string key, value;
      ss >> key >> value;
      if (value.empty()) throw ParseError(lineno, "missing value for '" + key + "'");
      auto num = [&]() {
        try {
          return std::stod(value);
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad value for '" + key + "'");
        }
      };
      if (key == "name") inst.name = value;
      else if (key == "n") inst.n = static_cast<int>(num());
      else if (key == "t_min") inst.t_min = num();
      else if (key == "t_max") inst.t_max = num();
      else if (key == "max_route_duration") inst.max_route_duration = num();
      else if (key == "lambda") inst.lambda = num();
      else if (key == "swap_time") inst.swap_time = num();
      else if (key == "return_soc") inst.return_soc = num();
      else if (key == "embedded") inst.service_embedded = num() != 0.0;
      else if (key == "swap_folded") inst.swap_folded = num() != 0.0;
      else if (key == "depot_mode") {
        if (value == "common") inst.depot_mode = DepotMode::Common;
        else if (value == "distinct") inst.depot_mode = DepotMode::Distinct;
        else throw ParseError(lineno, "depot_mode must be common or distinct");
      } else if (key == "vehicles") inst.fleet_size = static_cast<int>(num());
      else if (key == "capacity") inst.capacity = static_cast<int>(num());
      else if (key == "b_max") inst.b_max = num();
      else if (key == "b_min") inst.b_min = num();
      else if (key == "gamma") inst.gamma = num();
      else if (key == "alpha") inst.alpha = num();
      else if (key == "beta") inst.beta = num();
      else throw ParseError(lineno, "unknown key '" + key + "' in [" + section + "]");
    } else if (section == "nodes") {
      // id kind x y service load e l max_ride
      std::string kind;
      Location loc;
      if (!(ss >> loc.id >> kind >> loc.x >> loc.y >> loc.service_time >> loc.load_delta >>
            loc.window.earliest >> loc.window.latest >> loc.max_ride)) {
        throw ParseError(lineno, "node row needs: id kind x y service load e l max_ride");
      }
      loc.kind = parse_kind(kind, lineno);
      if (loc.id != static_cast<int>(inst.locations.size())) {
        throw ParseError(lineno, "node ids must be consecutive from 0");
      }
      inst.locations.push_back(loc);
    } else if (section == "stations") {
      Location loc;
      loc.kind = LocationKind::Station;
      if (!(ss >> loc.id >> loc.x >> loc.y)) throw ParseError(lineno, "station row needs: id x y");
      if (loc.id != static_cast<int>(inst.locations.size())) {
        throw ParseError(lineno, "station ids must continue the node numbering");
      }
      inst.locations.push_back(loc);
    } else if (section == "arcs") {
      int i = 0, j = 0;
      ArcData a;
      if (!(ss >> i >> j >> a.travel_time >> a.travel_cost >> a.battery)) {
        throw ParseError(lineno, "arc row needs: i j time cost battery");
      }
      arc_rows.emplace_back(i, j, a);
    } else {
      throw ParseError(lineno, "data outside of a section");
    }
  }
  if (inst.n <= 0) throw ValidationError("n = 0");
  for (auto& loc : inst.locations) {
    if (loc.kind == LocationKind::Station) loc.window = {inst.t_min, inst.t_max};
  }
  assign_ranges(inst);
  compute_euclidean_arcs(inst);
  if (have_arcs) {
    const int size = static_cast<int>(inst.size());
    for (const auto& [i, j, a] : arc_rows) {
      if (i < 0 || j < 0 || i >= size || j >= size) throw ParseError(lineno, "arc endpoint out of range");
      inst.arc(i, j) = a;
    }
  }
  validate(inst);
  return inst;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = strip_comment(line);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    auto key = strip_comment(s.substr(0, eq));
    auto value = strip_comment(s.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    auto num = [&]() {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad number for '" + key + "'");
      }
    };
    if (key == "time_unit") cfg.time_unit = num();
    else if (key == "battery_unit") cfg.battery_unit = num();
    else if (key == "gamma") cfg.gamma = num();
    else if (key == "lambda") cfg.lambda = num();
    else if (key == "battery_capacity_scale" || key == "battery_scale") cfg.battery_capacity_scale = num();
    else if (key == "variant") cfg.variant = parse_variant(value);
    else if (key == "swap_time") cfg.swap_time = num();
    else if (key == "battery_capacity_kwh") cfg.battery_capacity_kwh = num();
    else if (key == "discharge_rate_kwh") cfg.discharge_rate_kwh = num();
    else if (key == "charge_rate_kwh") cfg.charge_rate_kwh = num();
    else if (key == "station") cfg.station_coordinates.push_back(read_numbers(value, lineno, 2));
    else throw ParseError(lineno, "unknown config key '" + key + "'");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  return parse_config(in);
}

Instance parse_instance(std::istream& in, InstanceFormat format, const RunConfig& companion) {
  switch (format) {
    case InstanceFormat::BenchmarkAR: return parse_benchmark(in, companion, false);
    case InstanceFormat::BenchmarkU: return parse_benchmark(in, companion, true);
    case InstanceFormat::Native: return parse_native(in);
  }
  throw std::invalid_argument("unknown format");
}

InstanceFormat guess_format(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  if (base.size() > 5 && base.substr(base.size() - 5) == ".inst") return InstanceFormat::Native;
  if (!base.empty() && base[0] == 'u') return InstanceFormat::BenchmarkU;
  if (!base.empty() && (base[0] == 'a' || base[0] == 'r')) return InstanceFormat::BenchmarkAR;
  return InstanceFormat::Native;
}

Instance load_instance(const std::string& path, InstanceFormat format, const RunConfig& companion) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance " + path);
  Instance inst = parse_instance(in, format, companion);
  if (inst.name.empty()) {
    auto slash = path.find_last_of('/');
    inst.name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = inst.name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) inst.name = inst.name.substr(0, dot);
  }
  return inst;
}

void write_native(std::ostream& out, const Instance& inst) {
  out << std::setprecision(17);
  out << "[meta]\n";
  if (!inst.name.empty()) out << "name " << inst.name << '\n';
  out << "n " << inst.n << '\n'
      << "t_min " << inst.t_min << '\n'
      << "t_max " << inst.t_max << '\n'
      << "max_route_duration " << inst.max_route_duration << '\n'
      << "lambda " << inst.lambda << '\n'
      << "swap_time " << inst.swap_time << '\n'
      << "return_soc " << inst.return_soc << '\n'
      << "depot_mode " << (inst.depot_mode == DepotMode::Common ? "common" : "distinct") << '\n'
      << "embedded " << (inst.service_embedded ? 1 : 0) << '\n'
      << "swap_folded " << (inst.swap_folded ? 1 : 0) << '\n';
  out << "[fleet]\n"
      << "vehicles " << inst.fleet_size << '\n'
      << "capacity " << inst.capacity << '\n';
  out << "[battery]\n"
      << "b_max " << inst.b_max << '\n'
      << "b_min " << inst.b_min << '\n'
      << "gamma " << inst.gamma << '\n'
      << "alpha " << inst.alpha << '\n'
      << "beta " << inst.beta << '\n';
  out << "[nodes]\n# id kind x y service load e l max_ride\n";
  for (const auto& loc : inst.locations) {
    if (loc.kind == LocationKind::Station) continue;
    out << loc.id << ' ' << to_string(loc.kind) << ' ' << loc.x << ' ' << loc.y << ' ' << loc.service_time
        << ' ' << loc.load_delta << ' ' << loc.window.earliest << ' ' << loc.window.latest << ' '
        << loc.max_ride << '\n';
  }
  out << "[stations]\n";
  for (const auto& loc : inst.locations) {
    if (loc.kind == LocationKind::Station) out << loc.id << ' ' << loc.x << ' ' << loc.y << '\n';
  }
  out << "[arcs]\n# i j time cost battery\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (i == j) continue;
      const auto& a = inst.arc(static_cast<int>(i), static_cast<int>(j));
      out << i << ' ' << j << ' ' << a.travel_time << ' ' << a.travel_cost << ' ' << a.battery << '\n';
    }
  }
}

std::string to_native(const Instance& inst) {
  std::ostringstream out;
  write_native(out, inst);
  return out.str();
}

void validate(const Instance& inst) {
  const int n = inst.n;
  if (n <= 0) throw ValidationError("n = 0");
  if (static_cast<int>(inst.locations.size()) < 2 * n + 2) {
    throw ValidationError("instance needs 2n+2 customer and depot locations");
  }
  if (inst.fleet_size < 1) throw ValidationError("fleet size must be positive");
  if (inst.capacity < 1) throw ValidationError("vehicle capacity must be positive");
  if (inst.origins.empty() || inst.destinations.empty()) throw ValidationError("missing depot");
  if (inst.depot_mode == DepotMode::Common && (inst.origins.size() != 1 || inst.destinations.size() != 1)) {
    throw ValidationError("common depot mode needs exactly one origin and one destination");
  }
  if (inst.depot_mode == DepotMode::Distinct && static_cast<int>(inst.origins.size()) != inst.fleet_size) {
    throw ValidationError("distinct depot mode needs one origin per vehicle");
  }
  if (inst.locations[0].kind != LocationKind::OriginDepot) throw ValidationError("location 0 must be an origin depot");
  if (inst.locations[2 * n + 1].kind != LocationKind::DestinationDepot) {
    throw ValidationError("location 2n+1 must be a destination depot");
  }
  if (!(inst.t_min <= inst.t_max)) throw ValidationError("t_min > t_max");
  for (const auto& loc : inst.locations) {
    const std::string where = "location " + std::to_string(loc.id);
    if (loc.id >= 1 && loc.id <= n && loc.kind != LocationKind::Pickup) throw ValidationError(where + " must be a pickup");
    if (loc.id > n && loc.id <= 2 * n && loc.kind != LocationKind::Delivery) {
      throw ValidationError(where + " must be a delivery");
    }
    if (loc.id > 2 * n && (loc.kind == LocationKind::Pickup || loc.kind == LocationKind::Delivery)) {
      throw ValidationError(where + " lies outside the customer id range");
    }
    if (loc.window.earliest > loc.window.latest) throw ValidationError(where + ": e > l (inverted time window)");
    if (loc.window.earliest < inst.t_min - kEps || loc.window.latest > inst.t_max + kEps) {
      throw ValidationError(where + ": time window outside [t_min, t_max]");
    }
    if (loc.service_time < 0.0) throw ValidationError(where + ": negative service time");
    if ((loc.kind == LocationKind::OriginDepot || loc.kind == LocationKind::DestinationDepot ||
         loc.kind == LocationKind::Station) && loc.load_delta != 0) {
      throw ValidationError(where + ": depots and stations must have zero load change");
    }
    if (loc.kind == LocationKind::Pickup) {
      if (loc.load_delta <= 0) throw ValidationError(where + ": pickup demand must be positive");
      if (inst.locations[loc.id + n].load_delta != -loc.load_delta) {
        throw ValidationError(where + ": q_i != -q_{n+i}");
      }
      if (loc.load_delta > inst.capacity) throw ValidationError(where + ": demand exceeds capacity");
      if (loc.max_ride < 0.0) throw ValidationError(where + ": negative maximum ride time");
    }
  }
  for (const auto& a : inst.arcs) {
    if (!std::isfinite(a.travel_time) || !std::isfinite(a.travel_cost) || !std::isfinite(a.battery) ||
        a.travel_time < 0.0 || a.travel_cost < 0.0 || a.battery < 0.0) {
      throw ValidationError("arc data must be nonnegative and finite");
    }
  }
  if (!(inst.b_min >= 0.0 && inst.b_min <= inst.b_max)) throw ValidationError("b_min must lie in [0, b_max]");
  if (inst.gamma < 0.0 || inst.gamma > 1.0) throw ValidationError("gamma outside [0,1]");
  if (inst.lambda < 0.0 || inst.lambda > 1.0) throw ValidationError("lambda outside [0,1]");
  if (inst.gamma * inst.b_max < inst.b_min - kEps && inst.gamma > 0.0) {
    throw ValidationError("b_min <= gamma*b_max violated");
  }
  if (inst.alpha <= 0.0 || inst.beta <= 0.0) throw ValidationError("charge and discharge rates must be positive");
}

void compute_euclidean_arcs(Instance& inst) {
  const std::size_t size = inst.size();
  inst.arcs.assign(size * size, ArcData{});
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (i == j) continue;
      const auto& a = inst.locations[i];
      const auto& b = inst.locations[j];
      const double d = std::hypot(a.x - b.x, a.y - b.y);
      inst.arcs[i * size + j] = {d, d, d};
    }
  }
}

Instance embed_service_times(const Instance& inst) {
  Instance out = inst;
  if (inst.service_embedded) return out;
  const int size = static_cast<int>(inst.size());
  for (int i = 0; i < size; ++i) {
    const double s = inst.locations[i].service_time;
    if (s == 0.0) continue;
    for (int j = 0; j < size; ++j) {
      if (i != j) out.arc(i, j).travel_time += s;
    }
    if (inst.is_pickup(i)) out.locations[i].max_ride += s;
  }
  out.service_embedded = true;
  return out;
}

Instance fold_swap_time(const Instance& inst) {
  Instance out = inst;
  if (inst.swap_folded) return out;
  const int size = static_cast<int>(inst.size());
  for (int s : inst.stations) {
    for (int j = 0; j < size; ++j) {
      if (j != s) out.arc(s, j).travel_time += inst.swap_time;
    }
  }
  out.swap_folded = true;
  return out;
}

Instance round_battery(const Instance& inst, double unit) {
  Instance out = inst;
  for (auto& a : out.arcs) a.battery = round_to_unit(a.battery, unit);
  out.b_max = round_to_unit(inst.b_max, unit);
  out.b_min = round_to_unit(inst.b_min, unit);
  return out;
}

Instance scale_battery(const Instance& inst, double scale) {
  Instance out = inst;
  out.b_max = inst.b_max * scale;
  out.b_min = inst.b_min * scale;
  return out;
}

double round_to_unit(double value, double unit) { return std::round(value / unit) * unit; }
double ceil_to_unit(double value, double unit) { return std::ceil(value / unit - 1e-9) * unit; }
double floor_to_unit(double value, double unit) { return std::floor(value / unit + 1e-9) * unit; }

int DiscreteInstance::floor_time(double t) const {
  auto it = std::upper_bound(time_grid.begin(), time_grid.end(), t + kEps);
  return static_cast<int>(it - time_grid.begin()) - 1;
}

int DiscreteInstance::ceil_time(double t) const {
  auto it = std::lower_bound(time_grid.begin(), time_grid.end(), t - kEps);
  return static_cast<int>(it - time_grid.begin());
}

int DiscreteInstance::nearest_time(double t) const {
  int k = ceil_time(t);
  if (k < static_cast<int>(time_grid.size()) && std::abs(time_grid[k] - t) <= kEps) return k;
  return -1;
}

int DiscreteInstance::floor_battery(double b) const {
  auto it = std::upper_bound(battery_grid.begin(), battery_grid.end(), b + kEps);
  return static_cast<int>(it - battery_grid.begin()) - 1;
}

int DiscreteInstance::ceil_battery(double b) const {
  auto it = std::lower_bound(battery_grid.begin(), battery_grid.end(), b - kEps);
  return static_cast<int>(it - battery_grid.begin());
}

namespace {

std::vector<double> make_grid(double lo, double hi, double unit) {
  std::vector<double> g;
  const auto steps = static_cast<long>(std::floor((hi - lo) / unit + 1e-9));
  g.reserve(static_cast<std::size_t>(steps) + 2);
  for (long k = 0; k <= steps; ++k) g.push_back(lo + static_cast<double>(k) * unit);
  return g;
}

}  // namespace

DiscreteInstance discretize_instance(const Instance& inst, double time_unit, double battery_unit, Rounding mode) {
  if (!(time_unit > 0.0) || !(battery_unit > 0.0)) throw std::invalid_argument("grid units must be positive");
  DiscreteInstance d;
  d.mode = mode;
  d.time_unit = time_unit;
  d.battery_unit = battery_unit;
  d.base = inst;
  Instance& b = d.base;

  double shortest_window = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 2 * inst.n; ++i) {
    shortest_window = std::min(shortest_window, inst.locations[i].window.latest - inst.locations[i].window.earliest);
  }
  if (time_unit > shortest_window + kEps) {
    d.warnings.push_back("time unit " + std::to_string(time_unit) + " exceeds the shortest time window span " +
                         std::to_string(shortest_window) + "; the instance may become infeasible");
  }

  if (mode == Rounding::DEadarp) {
    for (auto& a : b.arcs) {
      a.travel_time = round_to_unit(a.travel_time, time_unit);
      a.battery = round_to_unit(a.battery, battery_unit);
    }
    b.t_min = round_to_unit(inst.t_min, time_unit);
    b.t_max = round_to_unit(inst.t_max, time_unit);
    for (auto& loc : b.locations) {
      loc.window.earliest = std::max(b.t_min, round_to_unit(loc.window.earliest, time_unit));
      loc.window.latest = std::min(b.t_max, round_to_unit(loc.window.latest, time_unit));
      if (loc.kind == LocationKind::Pickup) loc.max_ride = ceil_to_unit(loc.max_ride, time_unit);
    }
    b.b_max = round_to_unit(inst.b_max, battery_unit);
    b.b_min = round_to_unit(inst.b_min, battery_unit);
    d.time_grid = make_grid(b.t_min, b.t_max, time_unit);
    d.battery_grid = make_grid(b.b_min, b.b_max, battery_unit);
    // Conservative: a stricter return threshold never admits a route the data forbids.
    d.depot_return_level = std::min(d.ceil_battery(std::max(inst.gamma * b.b_max, b.b_min)), d.max_battery_level());
    b.return_soc = d.battery_grid[d.depot_return_level];
  } else {
    d.time_grid = make_grid(b.t_min, b.t_max, time_unit);
    d.battery_grid = make_grid(b.b_min, b.b_max, battery_unit);
    if (d.battery_grid.back() < b.b_max - kEps) d.battery_grid.push_back(b.b_max);
    // Lower-bound mode: round the threshold down so no continuous-feasible return is lost.
    d.depot_return_level = std::max(0, d.floor_battery(inst.depot_return_soc()));
  }
  return d;
}

}  // namespace btsff
