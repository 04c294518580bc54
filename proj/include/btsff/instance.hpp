#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace btsff {

/// Absolute tolerance (minutes / driving-minutes) used for every continuous comparison.
inline constexpr double kEps = 1e-6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LocationKind { OriginDepot, Pickup, Delivery, Station, DestinationDepot };
enum class DepotMode { Common, Distinct };
enum class Variant { DEadarp, EadarpLowerBound, BatterySwap };
enum class InstanceFormat { BenchmarkAR, BenchmarkU, Native };

std::string_view to_string(LocationKind kind);
std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

struct TimeWindow {
  double earliest = 0.0;
  double latest = 0.0;
};

struct Location {
  int id = 0;
  LocationKind kind = LocationKind::Pickup;
  double x = 0.0;
  double y = 0.0;
  double service_time = 0.0;
  int load_delta = 0;
  TimeWindow window;
  double max_ride = 0.0;  // pickups only
};

struct ArcData {
  double travel_time = 0.0;  // minutes, service time of the tail embedded once embed_service_times ran
  double travel_cost = 0.0;
  double battery = 0.0;  // driving-minutes
};

/// Continuous problem description. Battery quantities are in driving-minutes; the
/// charge rate is the number of driving-minutes restored per minute at a station.
struct Instance {
  std::string name;
  int n = 0;
  std::vector<Location> locations;
  std::vector<ArcData> arcs;  // dense, row-major |locations| x |locations|
  std::vector<int> origins;
  std::vector<int> destinations;
  std::vector<int> stations;

  int fleet_size = 1;
  int capacity = 1;
  double t_min = 0.0;
  double t_max = 0.0;
  double max_route_duration = 0.0;  // carried from benchmark headers, not enforced

  double b_max = 0.0;
  double b_min = 0.0;
  double gamma = 0.0;
  double alpha = 1.0;  // energy per minute charged
  double beta = 1.0;   // energy per minute driven
  double lambda = 0.75;
  double swap_time = 0.0;
  double return_soc = -1.0;  // overrides gamma*b_max when nonnegative
  DepotMode depot_mode = DepotMode::Common;

  bool service_embedded = false;
  bool swap_folded = false;

  std::size_t size() const { return locations.size(); }
  const ArcData& arc(int i, int j) const { return arcs[static_cast<std::size_t>(i) * size() + j]; }
  ArcData& arc(int i, int j) { return arcs[static_cast<std::size_t>(i) * size() + j]; }

  int pickup(int customer) const { return customer + 1; }
  int delivery(int customer) const { return customer + 1 + n; }
  int partner(int loc) const { return is_pickup(loc) ? loc + n : loc - n; }
  bool is_pickup(int loc) const { return loc >= 1 && loc <= n; }
  bool is_delivery(int loc) const { return loc > n && loc <= 2 * n; }
  bool is_customer(int loc) const { return loc >= 1 && loc <= 2 * n; }
  bool is_station(int loc) const { return locations[loc].kind == LocationKind::Station; }
  bool is_origin(int loc) const { return locations[loc].kind == LocationKind::OriginDepot; }
  bool is_destination(int loc) const { return locations[loc].kind == LocationKind::DestinationDepot; }

  /// Driving-minutes restored per minute of charging.
  double charge_rate() const { return alpha / beta; }
  double depot_return_soc() const { return return_soc >= 0.0 ? return_soc : std::max(gamma * b_max, b_min); }
  /// Direct pickup-to-delivery travel time of a customer, service embedded when the instance is.
  double direct_time(int pickup_loc) const { return arc(pickup_loc, partner(pickup_loc)).travel_time; }
};

/// Run configuration read from a `key = value` file.
struct RunConfig {
  double time_unit = 10.0;
  double battery_unit = 10.0;
  double gamma = -1.0;  // negative: keep the instance value
  double lambda = -1.0;
  double battery_capacity_scale = 1.0;
  Variant variant = Variant::EadarpLowerBound;
  double swap_time = 0.0;
  // Companion battery data for benchmark files (energy units).
  double battery_capacity_kwh = 14.85;
  double discharge_rate_kwh = 0.055;
  double charge_rate_kwh = 0.055;
  std::vector<std::vector<double>> station_coordinates;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Reads an instance. Benchmark formats get their battery data from `companion`.
Instance parse_instance(std::istream& in, InstanceFormat format, const RunConfig& companion = {});
Instance load_instance(const std::string& path, InstanceFormat format, const RunConfig& companion = {});
InstanceFormat guess_format(const std::string& path);

void write_native(std::ostream& out, const Instance& inst);
std::string to_native(const Instance& inst);

/// Throws ValidationError naming the first violated invariant.
void validate(const Instance& inst);

/// Fills the arc matrix with Euclidean times, costs and battery use (speed 1).
void compute_euclidean_arcs(Instance& inst);

Instance embed_service_times(const Instance& inst);
/// Adds the swap duration to every arc leaving a station.
Instance fold_swap_time(const Instance& inst);
/// Rounds every arc battery consumption to the nearest multiple of `unit`.
Instance round_battery(const Instance& inst, double unit);
/// Scales b_max (and b_min proportionally).
Instance scale_battery(const Instance& inst, double scale);

enum class Rounding { DEadarp, Relaxed };

/// Instance whose time and battery live on grids T and B.
struct DiscreteInstance {
  Instance base;
  Rounding mode = Rounding::DEadarp;
  double time_unit = 1.0;
  double battery_unit = 1.0;
  std::vector<double> time_grid;
  std::vector<double> battery_grid;
  int depot_return_level = 0;  // index of gamma*b_max in battery_grid
  std::vector<std::string> warnings;

  /// Number of unit steps spanned by each grid (1440 min / 10 = 144).
  int time_steps() const { return static_cast<int>(time_grid.size()) - 1; }
  int battery_steps() const { return static_cast<int>(battery_grid.size()) - 1; }

  int floor_time(double t) const;    // largest k with T[k] <= t, -1 if none
  int ceil_time(double t) const;     // smallest k with T[k] >= t, size() if none
  int nearest_time(double t) const;  // exact grid point within tolerance or -1
  int floor_battery(double b) const;
  int ceil_battery(double b) const;
  int max_battery_level() const { return static_cast<int>(battery_grid.size()) - 1; }
};

DiscreteInstance discretize_instance(const Instance& inst, double time_unit, double battery_unit,
                                     Rounding mode);

/// Rounds to the nearest multiple of unit (ties away from zero).
double round_to_unit(double value, double unit);
double ceil_to_unit(double value, double unit);
double floor_to_unit(double value, double unit);

}  // namespace btsff
