#pragma once

#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "btsff/btsnet.hpp"
#include "btsff/fragments.hpp"
#include "btsff/lp.hpp"
#include "btsff/schedule.hpp"

namespace btsff {

/// Integer program over a network: column j is the binary of net.arcs[j].
struct Model {
  LinearProblem problem;
  int flow_rows = 0;
  int cover_rows = 0;
  int fleet_rows = 0;
  std::vector<int> uncovered;  // pickups with no fragment expansion
};

Model assemble_model(const BtsNetwork& net, const Instance& inst, const std::vector<Fragment>& fragments);

/// Physical identity of a connector: tail, station (or -1), head.
using ConnectorKey = std::tuple<int, int, int>;

struct Element {
  bool is_fragment = false;
  int fragment = -1;
  ConnectorKey connector{-1, -1, -1};
};

/// Physical projection of one flow component; time and battery are dropped.
struct PhysicalRoute {
  std::vector<Element> elements;  // alternating connectors and fragments
  bool cycle = false;
  int origin = -1;
  int destination = -1;
};

struct Chain {
  std::vector<int> fragments;
  std::vector<ConnectorKey> connectors;  // connectors[k] links fragments[k] to fragments[k+1]
  int size() const { return static_cast<int>(fragments.size()); }
};

struct Cut {
  std::vector<int> columns;
  double rhs = 0.0;
  std::string label;
};

/// Columns of every BTS expansion of each physical fragment and connector.
class ExpansionIndex {
 public:
  explicit ExpansionIndex(const BtsNetwork& net);
  const std::vector<int>& fragment(int f) const;
  const std::vector<int>& connector(const ConnectorKey& key) const;

 private:
  std::map<int, std::vector<int>> fragments_;
  std::map<ConnectorKey, std::vector<int>> connectors_;
  std::vector<int> empty_;
};

/// Decomposes the selected arcs into depot-to-depot paths and leftover cycles.
/// Ties are broken by the lowest arc id.
std::vector<PhysicalRoute> extract_routes(const BtsNetwork& net, const std::vector<double>& x);
std::vector<Chain> extract_chains(const std::vector<PhysicalRoute>& routes);
std::vector<Chain> extract_chains(const BtsNetwork& net, const std::vector<double>& x);

/// Sum of the chain's expansions <= 2c - 2.
Cut chain_cut(const Chain& chain, const ExpansionIndex& index);
/// Sum of all expansions of the given elements <= count - 1.
Cut element_cut(const std::vector<Element>& elements, const ExpansionIndex& index, std::string label);

RoutePath to_route_path(const PhysicalRoute& route, const std::vector<Fragment>& fragments);
RoutePath chain_path(const Chain& chain, const std::vector<Fragment>& fragments, int origin, int first_station,
                     int last_station, int destination);

struct MipSettings {
  SolveOptions solve;
  bool lazy = false;         // screen incumbents and cut schedule-infeasible ones
  bool battery_swap = false;
  int max_cuts = 20000;
  int max_rounds = 5000;
};

struct MipOutcome {
  SolveStatus status = SolveStatus::Error;
  bool has_solution = false;
  double objective = kInf;
  double bound = -kInf;
  int cuts = 0;
  int chain_cuts = 0;
  int rounds = 0;
  double solver_seconds = 0.0;
  std::vector<double> x;
  std::vector<PhysicalRoute> routes;
  std::string message;
};

/// Screens an integer solution; returns the cuts it violates (empty when acceptable).
/// Chain cuts assume time and battery obey the triangle inequality; pass false otherwise.
std::vector<Cut> screen_solution(const BtsNetwork& net, const std::vector<double>& x, const std::vector<Fragment>& fragments,
                                 const Instance& inst, const ExpansionIndex& index, bool battery_swap,
                                 bool allow_chain_cuts = true);

bool satisfies_triangle_inequality(const Instance& inst);

/// Solves the model; with lazy screening, re-solves after each batch of cuts until the
/// optimum passes the schedule check.
MipOutcome solve_model(Model& model, const BtsNetwork& net, const std::vector<Fragment>& fragments, const Instance& inst,
                       const MipSettings& settings, MilpBackend& backend);

/// Schedules the routes of a solved model on `inst`.
Solution make_solution(const MipOutcome& outcome, const std::vector<Fragment>& fragments, const Instance& inst,
                       bool battery_swap);

}  // namespace btsff
