#include "btsff/model.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

namespace btsff {

Model assemble_model(const BtsNetwork& net, const Instance& inst, const std::vector<Fragment>& fragments) {
  Model m;
  auto& lp = m.problem;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    lp.add_column(arc.cost, 0.0, 1.0, true, (arc.kind == ArcKind::Fragment ? "X" : "Y") + std::to_string(a));
  }
  std::vector<char> depot(net.nodes.size(), 0);
  for (int o : net.origin_nodes) depot[o] = 1;
  for (int d : net.destination_nodes) depot[d] = 1;
  for (std::size_t h = 0; h < net.nodes.size(); ++h) {
    if (depot[h]) continue;
    LinearRow row;
    row.lower = row.upper = 0.0;
    row.name = "flow" + std::to_string(h);
    for (int a : net.in[h]) {
      row.index.push_back(a);
      row.value.push_back(1.0);
    }
    for (int a : net.out[h]) {
      row.index.push_back(a);
      row.value.push_back(-1.0);
    }
    if (row.index.empty()) continue;
    lp.add_row(std::move(row));
    ++m.flow_rows;
  }
  std::vector<LinearRow> cover(inst.n + 1);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    if (arc.kind != ArcKind::Fragment) continue;
    for (int p : fragments[arc.fragment].customers) {
      cover[p].index.push_back(static_cast<int>(a));
      cover[p].value.push_back(1.0);
    }
  }
  for (int p = 1; p <= inst.n; ++p) {
    if (cover[p].index.empty()) m.uncovered.push_back(p);
    cover[p].lower = cover[p].upper = 1.0;
    cover[p].name = "cover" + std::to_string(p);
    lp.add_row(std::move(cover[p]));
    ++m.cover_rows;
  }
  if (inst.depot_mode == DepotMode::Common) {
    LinearRow fleet;
    fleet.upper = inst.fleet_size;
    fleet.name = "fleet";
    for (int o : net.origin_nodes) {
      for (int a : net.out[o]) {
        fleet.index.push_back(a);
        fleet.value.push_back(1.0);
      }
    }
    lp.add_row(std::move(fleet));
    ++m.fleet_rows;
  } else {
    for (int o : net.origin_nodes) {
      LinearRow row;
      row.lower = row.upper = 1.0;
      row.name = "origin" + std::to_string(o);
      for (int a : net.out[o]) {
        row.index.push_back(a);
        row.value.push_back(1.0);
      }
      lp.add_row(std::move(row));
      ++m.fleet_rows;
    }
    for (int d : net.destination_nodes) {
      LinearRow row;
      row.upper = 1.0;
      row.name = "destination" + std::to_string(d);
      for (int a : net.in[d]) {
        row.index.push_back(a);
        row.value.push_back(1.0);
      }
      lp.add_row(std::move(row));
      ++m.fleet_rows;
    }
  }
  return m;
}

ExpansionIndex::ExpansionIndex(const BtsNetwork& net) {
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    switch (arc.kind) {
      case ArcKind::Fragment: fragments_[arc.fragment].push_back(static_cast<int>(a)); break;
      case ArcKind::NodeArc:
      case ArcKind::Charging: connectors_[{arc.tail_loc, arc.station, arc.head_loc}].push_back(static_cast<int>(a)); break;
      case ArcKind::Idle: break;
    }
  }
}

const std::vector<int>& ExpansionIndex::fragment(int f) const {
  auto it = fragments_.find(f);
  return it == fragments_.end() ? empty_ : it->second;
}

const std::vector<int>& ExpansionIndex::connector(const ConnectorKey& key) const {
  auto it = connectors_.find(key);
  return it == connectors_.end() ? empty_ : it->second;
}

namespace {

Element element_of(const BtsArc& arc) {
  Element e;
  if (arc.kind == ArcKind::Fragment) {
    e.is_fragment = true;
    e.fragment = arc.fragment;
  } else {
    e.connector = {arc.tail_loc, arc.station, arc.head_loc};
  }
  return e;
}

}  // namespace

std::vector<PhysicalRoute> extract_routes(const BtsNetwork& net, const std::vector<double>& x) {
  std::vector<char> chosen(net.arcs.size(), 0);
  for (std::size_t a = 0; a < net.arcs.size() && a < x.size(); ++a) chosen[a] = x[a] > 0.5;
  std::vector<std::size_t> cursor(net.nodes.size(), 0);
  auto next_arc = [&](int node) {
    const auto& out = net.out[node];
    auto& c = cursor[node];
    while (c < out.size() && !chosen[out[c]]) ++c;
    if (c == out.size()) return -1;
    int a = out[c];
    chosen[a] = 0;
    return a;
  };
  std::vector<char> is_dest(net.nodes.size(), 0);
  for (int d : net.destination_nodes) is_dest[d] = 1;

  std::vector<PhysicalRoute> routes;
  auto push_arc = [&](PhysicalRoute& r, int a) {
    if (net.arcs[a].kind != ArcKind::Idle) r.elements.push_back(element_of(net.arcs[a]));
  };
  for (int o : net.origin_nodes) {
    for (;;) {
      int a = next_arc(o);
      if (a < 0) break;
      PhysicalRoute r;
      r.origin = net.nodes[o].loc;
      int node = o;
      while (a >= 0) {
        push_arc(r, a);
        node = net.arcs[a].to;
        if (is_dest[node]) break;
        a = next_arc(node);
      }
      r.destination = is_dest[node] ? net.nodes[node].loc : -1;
      routes.push_back(std::move(r));
    }
  }
  // Whatever is left balances at every node, so it splits into cycles.
  for (std::size_t start = 0; start < net.arcs.size(); ++start) {
    if (!chosen[start]) continue;
    chosen[start] = 0;
    PhysicalRoute r;
    r.cycle = true;
    const int home = net.arcs[start].from;
    int a = static_cast<int>(start);
    while (a >= 0) {
      push_arc(r, a);
      const int node = net.arcs[a].to;
      if (node == home) break;
      a = next_arc(node);
    }
    routes.push_back(std::move(r));
  }
  return routes;
}

std::vector<Chain> extract_chains(const std::vector<PhysicalRoute>& routes) {
  std::vector<Chain> chains;
  for (const auto& r : routes) {
    if (r.cycle) continue;
    Chain c;
    std::vector<ConnectorKey> pending;
    for (const auto& e : r.elements) {
      if (e.is_fragment) {
        if (!c.fragments.empty() && !pending.empty()) c.connectors.push_back(pending.back());
        c.fragments.push_back(e.fragment);
        pending.clear();
      } else {
        pending.push_back(e.connector);
      }
    }
    if (c.size() > 1) chains.push_back(std::move(c));
  }
  return chains;
}

std::vector<Chain> extract_chains(const BtsNetwork& net, const std::vector<double>& x) {
  return extract_chains(extract_routes(net, x));
}

namespace {

void append_unique(std::vector<int>& cols, const std::vector<int>& more) { cols.insert(cols.end(), more.begin(), more.end()); }

void normalize(Cut& cut) {
  std::sort(cut.columns.begin(), cut.columns.end());
  cut.columns.erase(std::unique(cut.columns.begin(), cut.columns.end()), cut.columns.end());
}

}  // namespace

Cut chain_cut(const Chain& chain, const ExpansionIndex& index) {
  Cut cut;
  for (int f : chain.fragments) append_unique(cut.columns, index.fragment(f));
  for (const auto& k : chain.connectors) append_unique(cut.columns, index.connector(k));
  cut.rhs = 2.0 * chain.size() - 2.0;
  cut.label = "chain" + std::to_string(chain.size());
  normalize(cut);
  return cut;
}

Cut element_cut(const std::vector<Element>& elements, const ExpansionIndex& index, std::string label) {
  Cut cut;
  for (const auto& e : elements) append_unique(cut.columns, e.is_fragment ? index.fragment(e.fragment) : index.connector(e.connector));
  cut.rhs = static_cast<double>(elements.size()) - 1.0;
  cut.label = std::move(label);
  normalize(cut);
  return cut;
}

RoutePath to_route_path(const PhysicalRoute& route, const std::vector<Fragment>& fragments) {
  RoutePath p;
  if (route.origin >= 0) p.visits.push_back(route.origin);
  for (const auto& e : route.elements) {
    if (e.is_fragment) {
      const auto& path = fragments[e.fragment].path;
      p.visits.insert(p.visits.end(), path.begin(), path.end());
    } else if (std::get<1>(e.connector) >= 0) {
      p.visits.push_back(std::get<1>(e.connector));
    }
  }
  if (route.destination >= 0) p.visits.push_back(route.destination);
  return p;
}

RoutePath chain_path(const Chain& chain, const std::vector<Fragment>& fragments, int origin, int first_station,
                     int last_station, int destination) {
  RoutePath p;
  p.visits.push_back(origin);
  if (first_station >= 0) p.visits.push_back(first_station);
  for (int k = 0; k < chain.size(); ++k) {
    const auto& path = fragments[chain.fragments[k]].path;
    p.visits.insert(p.visits.end(), path.begin(), path.end());
    if (k + 1 < chain.size() && std::get<1>(chain.connectors[k]) >= 0) p.visits.push_back(std::get<1>(chain.connectors[k]));
  }
  if (last_station >= 0) p.visits.push_back(last_station);
  p.visits.push_back(destination);
  return p;
}

namespace {

Chain chain_of(const PhysicalRoute& r) {
  auto chains = extract_chains(std::vector<PhysicalRoute>{r});
  if (!chains.empty()) return chains.front();
  Chain c;
  for (const auto& e : r.elements) {
    if (e.is_fragment) c.fragments.push_back(e.fragment);
  }
  return c;
}

// True when some depot closure of the chain has a feasible schedule.
bool chain_closable(const Chain& chain, const std::vector<Fragment>& fragments, const Instance& inst, bool swap) {
  std::vector<int> options{-1};
  options.insert(options.end(), inst.stations.begin(), inst.stations.end());
  for (int o : inst.origins) {
    for (int d : inst.destinations) {
      for (int s1 : options) {
        for (int s2 : options) {
          if (feasible_schedule(chain_path(chain, fragments, o, s1, s2, d), inst, swap)) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

std::vector<Cut> screen_solution(const BtsNetwork& net, const std::vector<double>& x, const std::vector<Fragment>& fragments,
                                 const Instance& inst, const ExpansionIndex& index, bool battery_swap,
                                 bool allow_chain_cuts) {
  std::vector<Cut> cuts;
  for (const auto& r : extract_routes(net, x)) {
    if (r.cycle) {
      cuts.push_back(element_cut(r.elements, index, "cycle"));
      continue;
    }
    if (feasible_schedule(to_route_path(r, fragments), inst, battery_swap)) continue;
    Chain c = chain_of(r);
    if (allow_chain_cuts && c.size() > 1 && !chain_closable(c, fragments, inst, battery_swap)) {
      cuts.push_back(chain_cut(c, index));
    } else {
      cuts.push_back(element_cut(r.elements, index, "route"));
    }
  }
  return cuts;
}

bool satisfies_triangle_inequality(const Instance& inst) {
  const int size = static_cast<int>(inst.size());
  for (int i = 0; i < size; ++i) {
    for (int k = 0; k < size; ++k) {
      if (k == i) continue;
      const ArcData& ik = inst.arc(i, k);
      for (int j = 0; j < size; ++j) {
        if (j == i || j == k) continue;
        const ArcData& ij = inst.arc(i, j);
        const ArcData& kj = inst.arc(k, j);
        if (ij.travel_time > ik.travel_time + kj.travel_time + kEps) return false;
        if (ij.battery > ik.battery + kj.battery + kEps) return false;
      }
    }
  }
  return true;
}

MipOutcome solve_model(Model& model, const BtsNetwork& net, const std::vector<Fragment>& fragments, const Instance& inst,
                       const MipSettings& settings, MilpBackend& backend) {
  MipOutcome out;
  if (!model.uncovered.empty()) {
    out.status = SolveStatus::Infeasible;
    std::ostringstream msg;
    msg << "no feasible fragment serves pickup";
    for (int p : model.uncovered) msg << ' ' << p;
    out.message = msg.str();
    return out;
  }
  const ExpansionIndex index(net);
  const bool chains = settings.lazy && satisfies_triangle_inequality(inst);
  std::set<std::pair<std::vector<int>, double>> seen;
  std::vector<Cut> pending;
  auto take = [&](std::vector<Cut> cuts) {
    bool fresh = false;
    for (auto& c : cuts) {
      if (seen.insert({c.columns, c.rhs}).second) {
        pending.push_back(std::move(c));
        fresh = true;
      }
    }
    return fresh;
  };
  IncumbentCallback callback;
  if (settings.lazy) {
    callback = [&](const std::vector<double>& x, double) {
      return take(screen_solution(net, x, fragments, inst, index, settings.battery_swap, chains));
    };
  }
  const auto start = std::chrono::steady_clock::now();
  for (;;) {
    ++out.rounds;
    pending.clear();
    SolveOptions opts = settings.solve;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.time_limit < kInf) opts.time_limit = std::max(0.0, opts.time_limit - elapsed);
    SolveResult res = backend.solve(model.problem, opts, callback);
    out.status = res.status;
    out.has_solution = res.has_solution;
    out.objective = res.objective;
    out.bound = res.bound;
    out.x = res.x;
    out.message = res.message;
    if (settings.lazy && res.has_solution && pending.empty() && res.status != SolveStatus::Interrupted) {
      take(screen_solution(net, res.x, fragments, inst, index, settings.battery_swap, chains));
    }
    if (!settings.lazy || pending.empty()) break;
    for (const auto& c : pending) {
      LinearRow row;
      row.index = c.columns;
      row.value.assign(c.columns.size(), 1.0);
      row.upper = c.rhs;
      row.name = c.label + "_" + std::to_string(out.cuts);
      model.problem.add_row(std::move(row));
      ++out.cuts;
      if (c.label.starts_with("chain")) ++out.chain_cuts;
    }
    out.has_solution = false;
    if (out.cuts > settings.max_cuts || out.rounds >= settings.max_rounds) {
      out.status = SolveStatus::Error;
      out.message = "cut pool limit reached after " + std::to_string(out.cuts) + " cuts";
      break;
    }
    if (res.status == SolveStatus::TimeLimit) break;
  }
  out.solver_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.has_solution) out.routes = extract_routes(net, out.x);
  return out;
}

Solution make_solution(const MipOutcome& outcome, const std::vector<Fragment>& fragments, const Instance& inst,
                       bool battery_swap) {
  Solution sol;
  sol.objective = outcome.objective;
  sol.lower_bound = outcome.bound;
  sol.gap = outcome.objective > 0.0 ? std::max(0.0, (outcome.objective - outcome.bound) / outcome.objective) : 0.0;
  sol.cuts = outcome.cuts;
  int vehicle = 0;
  for (const auto& r : outcome.routes) {
    if (r.cycle) continue;
    Route route;
    route.vehicle = vehicle++;
    if (inst.depot_mode == DepotMode::Distinct) {
      auto it = std::find(inst.origins.begin(), inst.origins.end(), r.origin);
      route.vehicle = static_cast<int>(it - inst.origins.begin());
    }
    route.path = to_route_path(r, fragments);
    if (auto s = min_excess_schedule(route.path, inst, battery_swap)) route.schedule = std::move(*s);
    sol.routes.push_back(std::move(route));
  }
  return sol;
}

}  // namespace btsff
