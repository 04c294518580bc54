#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "btsff/instance.hpp"
#include "btsff/stn.hpp"

namespace btsff {

/// Empty-load-delimited path from a pickup to a delivery.
struct Fragment {
  std::vector<int> path;
  std::vector<int> customers;  // pickup ids, ascending
  double travel_time = 0.0;
  double travel_cost = 0.0;
  double battery_use = 0.0;
  double dt_earliest = 0.0;  // departure window at the first node
  double dt_latest = 0.0;
  double min_excess = 0.0;
  double weighted_cost = 0.0;

  int first() const { return path.front(); }
  int last() const { return path.back(); }
};

struct FragmentOptions {
  bool parallel = true;
  bool compute_costs = true;
  bool force_lp = false;  // skip the no-wait shortcut and solve every excess LP
};

std::vector<Fragment> enumerate_fragments(const Instance& inst, const FragmentOptions& options = {});
std::vector<Fragment> enumerate_fragments_serial(const Instance& inst, const FragmentOptions& options = {});

/// Temporal network of a pickup-to-delivery path: windows, travel gaps, ride caps.
Stn fragment_stn(const std::vector<int>& path, const Instance& inst);

/// Feasible service-start interval at the first node, or nothing.
std::optional<std::pair<double, double>> tighten_departure_window(const std::vector<int>& path, const Instance& inst);

/// Earliest service start at the last node when the vehicle is ready at the first node at `ready`.
std::optional<double> earliest_end(const Fragment& f, const Instance& inst, double ready);

double min_excess_ride_time(const Fragment& f, const Instance& inst, bool force_lp = false);
double weighted_cost(const Fragment& f, double lambda);

/// Checks the fragment conditions on an arbitrary sequence (used by tests and tools).
bool is_fragment_path(const std::vector<int>& path, const Instance& inst);

/// `path | DT_f | travel_cost | excess | C^w`, one line per fragment.
void write_fragment_dump(std::ostream& out, const std::vector<Fragment>& fragments);

}  // namespace btsff
