#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "btsff/fragments.hpp"
#include "btsff/instance.hpp"

namespace btsff {

/// (location, time index, battery index).
struct BtsNode {
  int loc = 0;
  int t = 0;
  int b = 0;
};

enum class ArcKind { Fragment, NodeArc, Idle, Charging };
std::string_view to_string(ArcKind kind);

struct BtsArc {
  ArcKind kind = ArcKind::NodeArc;
  int from = 0;
  int to = 0;
  int fragment = -1;  // ArcKind::Fragment
  int tail_loc = 0;
  int head_loc = 0;
  int station = -1;   // ArcKind::Charging
  double charge = 0.0;  // energy added (charging arcs; lower bound in relaxed mode)
  double cost = 0.0;
};

struct NetworkOptions {
  bool battery_swap = false;
  bool single_station = false;  // keep only the cheapest feasible station per charging arc
  bool prune = true;
  bool parallel = true;
  bool check_dominance = false;
};

/// Relaxation checks: network times never later, network battery never lower than the
/// continuous values they stand for.
struct DominanceStats {
  long checked = 0;
  long time_violations = 0;
  long battery_violations = 0;
};

struct BtsNetwork {
  std::vector<BtsNode> nodes;
  std::vector<BtsArc> arcs;
  std::vector<int> origin_nodes;
  std::vector<int> destination_nodes;
  std::vector<std::vector<int>> out;  // arc ids per node
  std::vector<std::vector<int>> in;
  int time_levels = 0;
  int battery_levels = 0;
  long pruned_arcs = 0;
  DominanceStats dominance;

  bool has_route() const { return !arcs.empty() && !destination_nodes.empty(); }
  std::size_t count(ArcKind kind) const;
};

BtsNetwork build_network(const DiscreteInstance& di, const std::vector<Fragment>& fragments, const NetworkOptions& options);
BtsNetwork build_network_serial(const DiscreteInstance& di, const std::vector<Fragment>& fragments,
                                NetworkOptions options);

/// Arc list in a canonical order independent of node numbering; used to compare builds.
std::vector<std::string> canonical_arcs(const BtsNetwork& net);

/// `kind from_loc from_t from_b to_loc to_t to_b cost station`, one line per arc.
void write_network(std::ostream& out, const BtsNetwork& net);

}  // namespace btsff
