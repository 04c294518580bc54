#include "btsff/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace btsff {

namespace {

// Portable draws: std distributions differ between standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53); }
  double coordinate(double area, bool integral) {
    const double v = uniform(-area, area);
    return integral ? std::round(v) : v;
  }

 private:
  std::mt19937_64 rng_;
};

double dist(const Location& a, const Location& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

GeneratedInstance generate_instance(const GeneratorOptions& o) {
  if (o.n <= 0 || o.vehicles <= 0 || o.stations < 0 || o.horizon <= 0.0 || o.capacity <= 0) {
    throw std::invalid_argument("generator sizes must be positive");
  }
  GeneratedInstance out;
  Instance& inst = out.instance;
  Draw draw(o.seed);
  const int n = o.n;
  inst.name = "gen-n" + std::to_string(n) + "-v" + std::to_string(o.vehicles) + "-s" + std::to_string(o.seed);
  inst.n = n;
  inst.fleet_size = o.vehicles;
  inst.capacity = o.capacity;
  inst.lambda = o.lambda;
  inst.gamma = o.gamma;
  inst.depot_mode = o.depot_mode;
  inst.alpha = o.charge_rate;
  inst.beta = 1.0;
  inst.t_min = 0.0;

  Location depot;
  depot.kind = LocationKind::OriginDepot;
  depot.x = draw.coordinate(o.area * 0.25, o.integral_coordinates);
  depot.y = draw.coordinate(o.area * 0.25, o.integral_coordinates);
  inst.locations.push_back(depot);
  std::vector<Location> pickups, deliveries;
  for (int c = 0; c < n; ++c) {
    Location p, d;
    p.kind = LocationKind::Pickup;
    d.kind = LocationKind::Delivery;
    p.x = draw.coordinate(o.area, o.integral_coordinates);
    p.y = draw.coordinate(o.area, o.integral_coordinates);
    d.x = draw.coordinate(o.area, o.integral_coordinates);
    d.y = draw.coordinate(o.area, o.integral_coordinates);
    p.service_time = d.service_time = o.service_time;
    p.load_delta = 1;
    d.load_delta = -1;
    pickups.push_back(p);
    deliveries.push_back(d);
  }
  // Shortest single-customer route must fit the horizon.
  double horizon = o.horizon;
  double longest = 0.0;
  for (int c = 0; c < n; ++c) {
    const double need = dist(depot, pickups[c]) + o.service_time + dist(pickups[c], deliveries[c]) + o.service_time +
                        dist(deliveries[c], depot) + o.window_width;
    longest = std::max(longest, need);
  }
  if (longest > horizon) {
    out.warnings.push_back("horizon " + std::to_string(horizon) + " too short for some customer; widened to " +
                           std::to_string(std::ceil(longest + 10.0)));
    horizon = std::ceil(longest + 10.0);
  }
  inst.t_max = horizon;
  inst.locations[0].window = {0.0, horizon};
  for (int c = 0; c < n; ++c) {
    auto& p = pickups[c];
    auto& d = deliveries[c];
    const double direct = dist(p, d);
    const double lead = dist(depot, p);
    const double tail = dist(d, depot) + o.service_time;
    const double latest_start = horizon - tail - direct - o.service_time - o.window_width;
    const double start = std::floor(draw.uniform(lead, std::max(lead, latest_start)));
    p.window = {start, std::min(horizon, start + o.window_width)};
    p.max_ride = std::ceil(direct + o.ride_slack);
    d.window = {std::min(horizon, std::floor(start + direct + o.service_time)),
                std::min(horizon, std::ceil(start + o.window_width + direct + o.service_time + o.ride_slack))};
    p.window.latest = std::min(p.window.latest, d.window.latest - direct - o.service_time);
    p.window.latest = std::max(p.window.latest, p.window.earliest);
  }
  for (auto& p : pickups) inst.locations.push_back(p);
  for (auto& d : deliveries) inst.locations.push_back(d);
  Location dest = depot;
  dest.kind = LocationKind::DestinationDepot;
  inst.locations.push_back(dest);
  for (int v = 1; v < (o.depot_mode == DepotMode::Distinct ? o.vehicles : 1); ++v) {
    // Extra vehicles start from their own depots near the first one.
    Location extra = depot;
    extra.x += draw.coordinate(2.0, o.integral_coordinates);
    extra.y += draw.coordinate(2.0, o.integral_coordinates);
    Location extra_dest = extra;
    extra_dest.kind = LocationKind::DestinationDepot;
    inst.locations.push_back(extra);
    inst.locations.push_back(extra_dest);
  }
  for (int s = 0; s < o.stations; ++s) {
    Location st;
    st.kind = LocationKind::Station;
    st.x = draw.coordinate(o.area * 0.6, o.integral_coordinates);
    st.y = draw.coordinate(o.area * 0.6, o.integral_coordinates);
    st.window = {0.0, horizon};
    inst.locations.push_back(st);
  }
  for (std::size_t i = 0; i < inst.locations.size(); ++i) {
    inst.locations[i].id = static_cast<int>(i);
    if (inst.locations[i].kind == LocationKind::OriginDepot || inst.locations[i].kind == LocationKind::DestinationDepot) {
      inst.locations[i].window = {0.0, horizon};
    }
  }
  for (const auto& loc : inst.locations) {
    if (loc.kind == LocationKind::OriginDepot) inst.origins.push_back(loc.id);
    if (loc.kind == LocationKind::DestinationDepot) inst.destinations.push_back(loc.id);
    if (loc.kind == LocationKind::Station) inst.stations.push_back(loc.id);
  }
  compute_euclidean_arcs(inst);
  if (o.battery > 0.0) {
    inst.b_max = o.battery;
  } else {
    double worst = 0.0;
    for (int c = 1; c <= n; ++c) {
      worst = std::max(worst, inst.arc(0, c).battery + inst.arc(c, c + n).battery + inst.arc(c + n, 2 * n + 1).battery);
    }
    inst.b_max = std::ceil(worst / (1.0 - o.gamma)) + 10.0;
  }
  inst.b_min = 0.0;
  validate(inst);
  return out;
}

}  // namespace btsff
