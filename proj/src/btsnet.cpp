#include "btsff/btsnet.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace btsff {

std::string_view to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::Fragment: return "fragment";
    case ArcKind::NodeArc: return "node";
    case ArcKind::Idle: return "idle";
    case ArcKind::Charging: return "charging";
  }
  return "?";
}

std::size_t BtsNetwork::count(ArcKind kind) const {
  return static_cast<std::size_t>(std::count_if(arcs.begin(), arcs.end(), [&](const BtsArc& a) { return a.kind == kind; }));
}

namespace {

using Key = std::int64_t;

struct Pending {
  ArcKind kind;
  Key from, to;
  int fragment, tail, head, station;
  double charge, cost;
};

class Builder {
 public:
  Builder(const DiscreteInstance& di, const std::vector<Fragment>& frags, const NetworkOptions& opt)
      : di_(di), inst_(di.base), frags_(frags), opt_(opt) {
    exact_ = di.mode == Rounding::DEadarp;
    T_ = static_cast<int>(di.time_grid.size());
    B_ = static_cast<int>(di.battery_grid.size());
    L_ = static_cast<int>(inst_.size());
    top_ = B_ - 1;
    depot_level_ = di.depot_return_level;
    node_lo_.assign(L_, 0);
    node_hi_.assign(L_, -1);
    for (int i = 0; i < L_; ++i) {
      if (inst_.is_station(i)) continue;
      const auto& w = inst_.locations[i].window;
      node_lo_[i] = std::max(0, exact_ ? di.ceil_time(w.earliest) : di.floor_time(w.earliest));
      node_hi_[i] = std::min(T_ - 1, di.floor_time(w.latest));
    }
    for (int i = 0; i < L_; ++i) {
      if (inst_.is_pickup(i)) pickups_.push_back(i);
    }
    frags_by_pickup_.assign(L_, {});
    frag_arrival_.resize(frags.size());
    for (std::size_t f = 0; f < frags.size(); ++f) {
      const auto& fr = frags[f];
      const int p = fr.first();
      frags_by_pickup_[p].push_back(static_cast<int>(f));
      auto& arr = frag_arrival_[f];
      for (int t = node_lo_[p]; t <= node_hi_[p]; ++t) {
        auto end = earliest_end(fr, inst_, std::max(di.time_grid[t], inst_.locations[p].window.earliest));
        arr.push_back(end ? grid_time(*end) : -1);
      }
    }
    // Stations ordered by detour cost for each tail/head pair.
    station_order_.assign(static_cast<std::size_t>(L_) * L_, {});
    for (int i = 0; i < L_; ++i) {
      if (!is_tail(i)) continue;
      for (int j = 0; j < L_; ++j) {
        if (!is_head(j)) continue;
        auto& order = station_order_[static_cast<std::size_t>(i) * L_ + j];
        order = inst_.stations;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          return detour_cost(i, a, j) < detour_cost(i, b, j) - 1e-12;
        });
      }
    }
  }

  Key key(int loc, int t, int b) const { return (static_cast<Key>(loc) * T_ + t) * B_ + b; }
  BtsNode decode(Key k) const {
    BtsNode n;
    n.b = static_cast<int>(k % B_);
    k /= B_;
    n.t = static_cast<int>(k % T_);
    n.loc = static_cast<int>(k / T_);
    return n;
  }

  std::vector<Key> origin_keys() const {
    std::vector<Key> out;
    for (int o : inst_.origins) out.push_back(key(o, 0, top_));
    return out;
  }
  std::vector<Key> destination_keys() const {
    std::vector<Key> out;
    for (int d : inst_.destinations) out.push_back(key(d, T_ - 1, depot_level_));
    return out;
  }
  bool is_destination_key(Key k) const { return inst_.is_destination(decode(k).loc); }

  void expand(Key k, std::vector<Pending>& out, DominanceStats& st) const {
    const BtsNode h = decode(k);
    const int i = h.loc;
    const double battery = di_.battery_grid[h.b];
    if (inst_.is_pickup(i)) {
      for (int f : frags_by_pickup_[i]) {
        const auto& fr = frags_[f];
        const int arr = frag_arrival_[f][h.t - node_lo_[i]];
        if (arr < 0) continue;
        const double left = battery - fr.battery_use;
        if (left < inst_.b_min - kEps) continue;
        const int lv = grid_battery(left);
        if (lv < 0) continue;
        if (opt_.check_dominance) {
          auto truth = earliest_end(fr, inst_, std::max(di_.time_grid[h.t], inst_.locations[i].window.earliest));
          check(st, di_.time_grid[arr], truth ? *truth : -kInf, di_.battery_grid[lv], left);
        }
        out.push_back({ArcKind::Fragment, k, key(fr.last(), arr, lv), f, i, fr.last(), -1, 0.0, fr.weighted_cost});
      }
    }
    if (inst_.is_customer(i) && h.t + 1 <= node_hi_[i]) {
      out.push_back({ArcKind::Idle, k, key(i, h.t + 1, h.b), -1, i, i, -1, 0.0, 0.0});
    }
    if (!is_tail(i)) return;
    const double depart = std::max(di_.time_grid[h.t], inst_.locations[i].window.earliest);
    auto connect = [&](int j) {
      const bool to_depot = inst_.is_destination(j);
      const auto& a = inst_.arc(i, j);
      const double left = battery - a.battery;
      int direct_level = -1;
      const double ready = depart + a.travel_time;
      const double e_j = inst_.locations[j].window.earliest;
      const double l_j = inst_.locations[j].window.latest;
      if (to_depot) {
        if (left >= di_.battery_grid[depot_level_] - kEps) {
          direct_level = depot_level_;
          if (ready <= l_j + kEps) {
                out.push_back({ArcKind::NodeArc, k, key(j, T_ - 1, depot_level_), -1, i, j, -1, 0.0, inst_.lambda * a.travel_cost});
          }
        }
      } else if (left >= inst_.b_min - kEps) {
        direct_level = grid_battery(left);
        if (ready <= l_j + kEps) {
          const double arrive = std::max(e_j, ready);
          const int t2 = grid_time(arrive);
          if (t2 >= node_lo_[j] && t2 <= node_hi_[j]) {
            if (opt_.check_dominance) check(st, di_.time_grid[t2], arrive, di_.battery_grid[direct_level], left);
            out.push_back({ArcKind::NodeArc, k, key(j, t2, direct_level), -1, i, j, -1, 0.0, inst_.lambda * a.travel_cost});
          }
        }
      }
      if (inst_.stations.empty()) return;
      charging(k, h, i, j, depart, battery, direct_level, out, st);
    };
    for (int j : pickups_) {
      if (inst_.is_delivery(i) && j == inst_.partner(i)) continue;
      connect(j);
    }
    for (int d : inst_.destinations) connect(d);
  }

 private:
  bool is_tail(int i) const { return inst_.is_delivery(i) || inst_.is_origin(i); }
  bool is_head(int j) const { return inst_.is_pickup(j) || inst_.is_destination(j); }
  double detour_cost(int i, int s, int j) const { return inst_.arc(i, s).travel_cost + inst_.arc(s, j).travel_cost; }

  int grid_time(double x) const { return exact_ ? di_.ceil_time(x) : di_.floor_time(x); }
  int grid_battery(double x) const { return exact_ ? di_.floor_battery(x) : di_.ceil_battery(x); }

  void check(DominanceStats& st, double net_time, double true_time, double net_battery, double true_battery) const {
    ++st.checked;
    if (net_time > true_time + kEps) ++st.time_violations;
    if (net_battery < true_battery - kEps) ++st.battery_violations;
  }

  void charging(Key k, const BtsNode& h, int i, int j, double depart, double battery, int direct_level,
                std::vector<Pending>& out, DominanceStats& st) const {
    const bool to_depot = inst_.is_destination(j);
    const double e_j = inst_.locations[j].window.earliest;
    const double l_j = inst_.locations[j].window.latest;
    const double rate = inst_.charge_rate();
    const auto& order = station_order_[static_cast<std::size_t>(i) * L_ + j];
    // Best arc per head node when identical endpoints carry no physical distinction.
    const bool merge = !exact_ && !opt_.battery_swap;
    std::unordered_map<Key, std::size_t> best;

    auto emit = [&](int s, int lv, double charge) {
      const double travel = inst_.arc(i, s).travel_time + inst_.arc(s, j).travel_time;
      const double ready = depart + travel + (opt_.battery_swap ? 0.0 : charge / rate);
      if (ready > l_j + kEps) return false;
      int t2 = T_ - 1;
      if (!to_depot) {
        t2 = grid_time(std::max(e_j, ready));
        if (t2 < node_lo_[j] || t2 > node_hi_[j]) return false;
      }
      if (opt_.check_dominance && !to_depot) {
        const double true_battery =
            opt_.battery_swap ? inst_.b_max - inst_.arc(s, j).battery : battery - inst_.arc(i, s).battery - inst_.arc(s, j).battery + charge;
        check(st, di_.time_grid[t2], std::max(e_j, ready), di_.battery_grid[lv], true_battery);
      }
      Pending p{ArcKind::Charging, k, key(j, t2, lv), -1, i, j, s, charge, inst_.lambda * detour_cost(i, s, j)};
      if (merge) {
        auto it = best.find(p.to);
        if (it != best.end()) {
          if (p.cost < out[it->second].cost - 1e-12) out[it->second] = p;
          return true;
        }
        best.emplace(p.to, out.size());
      }
      out.push_back(p);
      return true;
    };

    const double reach_floor = inst_.b_min - kEps;
    for (std::size_t si = 0; si < order.size(); ++si) {
      const int s = order[si];
      const auto& in_leg = inst_.arc(i, s);
      const auto& out_leg = inst_.arc(s, j);
      if (battery - in_leg.battery < reach_floor) continue;
      const double cons = in_leg.battery + out_leg.battery;
      if (opt_.battery_swap) {
        const double after = inst_.b_max - out_leg.battery;
        if (after < inst_.b_min - kEps) continue;
        int lv = to_depot ? depot_level_ : grid_battery(after);
        if (to_depot && after < di_.battery_grid[depot_level_] - kEps) continue;
        if (lv <= direct_level) continue;
        emit(s, lv, inst_.b_max - (battery - in_leg.battery));
        continue;
      }
      if (to_depot) {
        if (direct_level >= 0) continue;
        const double target = inst_.depot_return_soc();
        if (target + out_leg.battery > inst_.b_max + kEps) continue;
        const double charge = std::max(0.0, target - battery + cons);
        if (emit(s, depot_level_, charge) && opt_.single_station) break;
        continue;
      }
      const double cap = inst_.b_max - out_leg.battery;
      if (cap < inst_.b_min - kEps) continue;
      const int top = std::min(top_, exact_ ? di_.floor_battery(cap) : di_.ceil_battery(cap));
      for (int lv = std::max(direct_level + 1, 0); lv <= top; ++lv) {
        if (opt_.single_station && claimed(i, j, h.b, lv, si)) continue;
        const double exact_charge = di_.battery_grid[lv] - battery + cons;
        double charge = exact_charge;
        if (!exact_) {
          const double below = lv > 0 ? di_.battery_grid[lv - 1] : di_.battery_grid[0];
          charge = std::max(0.0, below - battery + cons);
        } else if (charge < -kEps) {
          continue;
        }
        emit(s, lv, std::max(0.0, charge));
      }
    }
  }

  // In single-station mode the first feasible station in cost order owns each (b, b') pair.
  bool claimed(int i, int j, int b, int lv, std::size_t si) const {
    const auto& order = station_order_[static_cast<std::size_t>(i) * L_ + j];
    const double battery = di_.battery_grid[b];
    for (std::size_t r = 0; r < si; ++r) {
      const int s = order[r];
      if (battery - inst_.arc(i, s).battery < inst_.b_min - kEps) continue;
      const double cap = inst_.b_max - inst_.arc(s, j).battery;
      if (di_.battery_grid[lv] <= cap + kEps) return true;
    }
    return false;
  }

  const DiscreteInstance& di_;
  const Instance& inst_;
  const std::vector<Fragment>& frags_;
  NetworkOptions opt_;
  bool exact_ = true;
  int T_ = 0, B_ = 0, L_ = 0, top_ = 0, depot_level_ = 0;
  std::vector<int> node_lo_, node_hi_, pickups_;
  std::vector<std::vector<int>> frags_by_pickup_;
  std::vector<std::vector<int>> frag_arrival_;
  std::vector<std::vector<int>> station_order_;
};

BtsNetwork finalize(const Builder& builder, const DiscreteInstance& di, std::vector<Pending>& arcs,
                    const NetworkOptions& options, const DominanceStats& stats) {
  BtsNetwork net;
  net.time_levels = static_cast<int>(di.time_grid.size()) - 1;
  net.battery_levels = static_cast<int>(di.battery_grid.size()) - 1;
  net.dominance = stats;
  const auto origins = builder.origin_keys();
  const auto dests = builder.destination_keys();

  std::vector<char> keep(arcs.size(), 1);
  if (options.prune) {
    // Backward reachability from the destination depots.
    std::unordered_map<Key, std::vector<std::size_t>> into;
    for (std::size_t a = 0; a < arcs.size(); ++a) into[arcs[a].to].push_back(a);
    std::unordered_map<Key, char> alive;
    std::vector<Key> stack(dests.begin(), dests.end());
    for (Key d : dests) alive[d] = 1;
    while (!stack.empty()) {
      Key k = stack.back();
      stack.pop_back();
      auto it = into.find(k);
      if (it == into.end()) continue;
      for (std::size_t a : it->second) {
        if (alive.emplace(arcs[a].from, 1).second) stack.push_back(arcs[a].from);
      }
    }
    for (std::size_t a = 0; a < arcs.size(); ++a) keep[a] = alive.count(arcs[a].to) ? 1 : 0;
  }
  std::vector<Key> keys(origins.begin(), origins.end());
  keys.insert(keys.end(), dests.begin(), dests.end());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    if (!keep[a]) {
      ++net.pruned_arcs;
      continue;
    }
    keys.push_back(arcs[a].from);
    keys.push_back(arcs[a].to);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::unordered_map<Key, int> id;
  id.reserve(keys.size());
  for (std::size_t n = 0; n < keys.size(); ++n) {
    id[keys[n]] = static_cast<int>(n);
    net.nodes.push_back(builder.decode(keys[n]));
  }
  for (Key o : origins) net.origin_nodes.push_back(id.at(o));
  for (Key d : dests) net.destination_nodes.push_back(id.at(d));
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    if (!keep[a]) continue;
    const auto& p = arcs[a];
    net.arcs.push_back({p.kind, id.at(p.from), id.at(p.to), p.fragment, p.tail, p.head, p.station, p.charge, p.cost});
  }
  std::sort(net.arcs.begin(), net.arcs.end(), [](const BtsArc& x, const BtsArc& y) {
    return std::tie(x.from, x.kind, x.to, x.fragment, x.station) < std::tie(y.from, y.kind, y.to, y.fragment, y.station);
  });
  net.out.assign(net.nodes.size(), {});
  net.in.assign(net.nodes.size(), {});
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    net.out[net.arcs[a].from].push_back(static_cast<int>(a));
    net.in[net.arcs[a].to].push_back(static_cast<int>(a));
  }
  bool reachable = false;
  for (int o : net.origin_nodes) reachable = reachable || !net.out[o].empty();
  if (!reachable) {
    net.arcs.clear();
    net.destination_nodes.clear();
  }
  return net;
}

}  // namespace

BtsNetwork build_network(const DiscreteInstance& di, const std::vector<Fragment>& fragments, const NetworkOptions& options) {
  if (!options.parallel) return build_network_serial(di, fragments, options);
  Builder builder(di, fragments, options);
  std::unordered_map<Key, char> seen;
  std::vector<Key> frontier = builder.origin_keys();
  for (Key k : frontier) seen[k] = 1;
  std::vector<Pending> all;
  DominanceStats stats;
  while (!frontier.empty()) {
    std::vector<std::vector<Pending>> local(frontier.size());
    std::vector<DominanceStats> local_stats(frontier.size());
    const long count = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long f = 0; f < count; ++f) builder.expand(frontier[f], local[f], local_stats[f]);
    std::vector<Key> next;
    for (std::size_t f = 0; f < local.size(); ++f) {
      stats.checked += local_stats[f].checked;
      stats.time_violations += local_stats[f].time_violations;
      stats.battery_violations += local_stats[f].battery_violations;
      for (auto& p : local[f]) {
        if (seen.emplace(p.to, 1).second && !builder.is_destination_key(p.to)) next.push_back(p.to);
        all.push_back(p);
      }
    }
    frontier.swap(next);
  }
  return finalize(builder, di, all, options, stats);
}

BtsNetwork build_network_serial(const DiscreteInstance& di, const std::vector<Fragment>& fragments, NetworkOptions options) {
  options.parallel = false;
  Builder builder(di, fragments, options);
  std::unordered_map<Key, char> seen;
  std::vector<Key> stack = builder.origin_keys();
  for (Key k : stack) seen[k] = 1;
  std::vector<Pending> all;
  DominanceStats stats;
  while (!stack.empty()) {
    Key k = stack.back();
    stack.pop_back();
    std::vector<Pending> out;
    builder.expand(k, out, stats);
    for (auto& p : out) {
      if (seen.emplace(p.to, 1).second && !builder.is_destination_key(p.to)) stack.push_back(p.to);
      all.push_back(p);
    }
  }
  return finalize(builder, di, all, options, stats);
}

std::vector<std::string> canonical_arcs(const BtsNetwork& net) {
  std::vector<std::string> rows;
  rows.reserve(net.arcs.size());
  for (const auto& a : net.arcs) {
    const auto& u = net.nodes[a.from];
    const auto& v = net.nodes[a.to];
    std::ostringstream s;
    s << to_string(a.kind) << ' ' << u.loc << ' ' << u.t << ' ' << u.b << ' ' << v.loc << ' ' << v.t << ' ' << v.b << ' '
      << a.fragment << ' ' << a.station << ' ' << a.cost;
    rows.push_back(s.str());
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

void write_network(std::ostream& out, const BtsNetwork& net) {
  out << "# kind from_loc from_t from_b to_loc to_t to_b cost station\n";
  for (const auto& a : net.arcs) {
    const auto& u = net.nodes[a.from];
    const auto& v = net.nodes[a.to];
    out << to_string(a.kind) << ' ' << u.loc << ' ' << u.t << ' ' << u.b << ' ' << v.loc << ' ' << v.t << ' ' << v.b << ' '
        << a.cost << ' ' << a.station << '\n';
  }
}

}  // namespace btsff
