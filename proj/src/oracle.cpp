#include "btsff/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "btsff/stn.hpp"

namespace btsff {

namespace {

struct Candidate {
  double bound;
  std::vector<int> visits;
};

struct BestRoute {
  double cost = kInf;
  RoutePath path;
  ScheduleResult schedule;
};

class Enumerator {
 public:
  Enumerator(const Instance& inst, bool swap, int max_stations) : inst_(inst), swap_(swap), max_stations_(max_stations) {}

  BestRoute best(unsigned mask, int origin, int destination, long& evaluated) {
    origin_ = origin;
    destination_ = destination;
    mask_ = mask;
    candidates_.clear();
    seq_.clear();
    in_.assign(inst_.size(), 0);
    load_ = 0;
    grow();
    std::sort(candidates_.begin(), candidates_.end(), [](const Candidate& a, const Candidate& b) {
      return a.bound < b.bound || (a.bound == b.bound && a.visits < b.visits);
    });
    BestRoute best;
    for (const auto& c : candidates_) {
      if (c.bound >= best.cost - 1e-9) break;
      RoutePath path{c.visits};
      ++evaluated;
      auto s = min_excess_schedule(path, inst_, swap_);
      if (!s) continue;
      const double cost = inst_.lambda * summarize(path, inst_).travel_cost + (1.0 - inst_.lambda) * s->excess_ride_total;
      if (cost < best.cost - 1e-9) {
        best.cost = cost;
        best.path = path;
        best.schedule = *s;
      }
    }
    return best;
  }

 private:
  bool prefix_feasible() const {
    std::vector<int> v{origin_};
    v.insert(v.end(), seq_.begin(), seq_.end());
    std::vector<double> lo, hi;
    for (int i : v) {
      lo.push_back(inst_.locations[i].window.earliest);
      hi.push_back(inst_.locations[i].window.latest);
    }
    Stn stn(lo, hi);
    const int last = static_cast<int>(v.size()) - 1;
    for (int k = 0; k < last; ++k) stn.add_min_gap(k, k + 1, inst_.arc(v[k], v[k + 1]).travel_time);
    for (int a = 1; a <= last; ++a) {
      if (!inst_.is_pickup(v[a])) continue;
      const int d = inst_.partner(v[a]);
      bool closed = false;
      for (int b = a + 1; b <= last; ++b) {
        if (v[b] == d) {
          stn.add_max_gap(a, b, inst_.locations[v[a]].max_ride);
          closed = true;
        }
      }
      if (!closed) {
        const double leg = inst_.arc(v[last], d).travel_time;
        stn.add_max_gap(a, last, inst_.locations[v[a]].max_ride - leg);
        stn.lower_upper(last, inst_.locations[d].window.latest - leg);
      }
    }
    return stn.earliest().has_value();
  }

  void grow() {
    const int n = inst_.n;
    bool complete = true;
    for (int p = 1; p <= n; ++p) {
      if (!(mask_ >> (p - 1) & 1u)) continue;
      const int d = inst_.partner(p);
      if (!in_[d]) complete = false;
      const int next = !in_[p] ? p : (!in_[d] ? d : -1);
      if (next < 0) continue;
      if (next == p && load_ + inst_.locations[p].load_delta > inst_.capacity) continue;
      seq_.push_back(next);
      in_[next] = 1;
      load_ += inst_.locations[next].load_delta;
      if (prefix_feasible()) grow();
      load_ -= inst_.locations[next].load_delta;
      in_[next] = 0;
      seq_.pop_back();
    }
    if (complete) add_with_stations();
  }

  void add_with_stations() {
    // Zero-load gaps: before position g of seq_ (g == size means before the destination).
    std::vector<int> gaps;
    int load = 0;
    for (std::size_t k = 0; k <= seq_.size(); ++k) {
      if (load == 0) gaps.push_back(static_cast<int>(k));
      if (k < seq_.size()) load += inst_.locations[seq_[k]].load_delta;
    }
    std::vector<int> choice(gaps.size(), -1);
    std::function<void(std::size_t, int)> rec = [&](std::size_t g, int used) {
      if (g == gaps.size()) {
        Candidate c;
        c.visits.push_back(origin_);
        for (std::size_t k = 0; k <= seq_.size(); ++k) {
          for (std::size_t q = 0; q < gaps.size(); ++q) {
            if (gaps[q] == static_cast<int>(k) && choice[q] >= 0) c.visits.push_back(choice[q]);
          }
          if (k < seq_.size()) c.visits.push_back(seq_[k]);
        }
        c.visits.push_back(destination_);
        RouteSummary s = summarize(RoutePath{c.visits}, inst_);
        c.bound = inst_.lambda * s.travel_cost + (1.0 - inst_.lambda) * s.detour_excess;
        candidates_.push_back(std::move(c));
        return;
      }
      choice[g] = -1;
      rec(g + 1, used);
      if (used < max_stations_) {
        for (int s : inst_.stations) {
          choice[g] = s;
          rec(g + 1, used + 1);
        }
        choice[g] = -1;
      }
    };
    rec(0, 0);
  }

  const Instance& inst_;
  bool swap_;
  int max_stations_;
  int origin_ = 0, destination_ = 0;
  unsigned mask_ = 0;
  std::vector<int> seq_;
  std::vector<char> in_;
  int load_ = 0;
  std::vector<Candidate> candidates_;
};

}  // namespace

OracleResult brute_force_solve(const Instance& input, Variant variant, const OracleOptions& options) {
  if (input.n > 5 || input.fleet_size > 2 || input.stations.size() > 2) {
    throw std::invalid_argument("oracle limited to n <= 5, |V| <= 2, |S| <= 2");
  }
  Instance inst = options.grid
                      ? discretize_instance(input, options.time_unit, options.battery_unit, Rounding::DEadarp).base
                      : input;
  const bool swap = variant == Variant::BatterySwap;
  OracleResult result;
  result.variant = variant;
  const int n = inst.n;
  const unsigned full = (1u << n) - 1u;
  Enumerator en(inst, swap, options.max_stations_per_route);

  const std::size_t V = inst.origins.size();
  const std::size_t D = inst.destinations.size();
  // best[o][d][mask]
  std::vector<std::vector<std::vector<BestRoute>>> best(V, std::vector<std::vector<BestRoute>>(D, std::vector<BestRoute>(full + 1)));
  for (std::size_t o = 0; o < V; ++o) {
    for (std::size_t d = 0; d < D; ++d) {
      for (unsigned mask = 1; mask <= full; ++mask) best[o][d][mask] = en.best(mask, inst.origins[o], inst.destinations[d], result.evaluated);
    }
  }

  double best_cost = kInf;
  std::vector<std::tuple<std::size_t, std::size_t, unsigned>> best_pieces;

  if (inst.depot_mode == DepotMode::Common) {
    // g[k][mask]: cheapest cover of mask by k routes.
    const int K = inst.fleet_size;
    std::vector<std::vector<double>> g(K + 1, std::vector<double>(full + 1, kInf));
    std::vector<std::vector<unsigned>> pick(K + 1, std::vector<unsigned>(full + 1, 0));
    g[0][0] = 0.0;
    for (int k = 1; k <= K; ++k) {
      g[k][0] = 0.0;
      for (unsigned mask = 1; mask <= full; ++mask) {
        g[k][mask] = g[k - 1][mask];
        pick[k][mask] = 0;
        const unsigned low = mask & (~mask + 1u);
        for (unsigned sub = mask; sub; sub = (sub - 1) & mask) {
          if (!(sub & low)) continue;
          const double c = best[0][0][sub].cost + g[k - 1][mask ^ sub];
          if (c < g[k][mask] - 1e-12) {
            g[k][mask] = c;
            pick[k][mask] = sub;
          }
        }
      }
    }
    if (g[K][full] < kInf) {
      best_cost = g[K][full];
      unsigned mask = full;
      for (int k = K; k >= 1 && mask; --k) {
        const unsigned sub = pick[k][mask];
        if (!sub) continue;
        best_pieces.emplace_back(0, 0, sub);
        mask ^= sub;
      }
    }
  } else {
    // Every origin runs one nonempty route; destinations are used at most once.
    std::vector<std::tuple<std::size_t, std::size_t, unsigned>> current;
    std::function<void(std::size_t, unsigned, unsigned, double)> rec = [&](std::size_t v, unsigned left, unsigned dest_used,
                                                                           double cost) {
      if (cost >= best_cost) return;
      if (v == V) {
        if (left == 0) {
          best_cost = cost;
          best_pieces = current;
        }
        return;
      }
      for (unsigned sub = left; sub; sub = (sub - 1) & left) {
        for (std::size_t d = 0; d < D; ++d) {
          if (dest_used >> d & 1u) continue;
          const auto& r = best[v][d][sub];
          if (r.cost == kInf) continue;
          current.emplace_back(v, d, sub);
          rec(v + 1, left ^ sub, dest_used | (1u << d), cost + r.cost);
          current.pop_back();
        }
      }
    };
    rec(0, full, 0u, 0.0);
  }
  if (best_cost == kInf) return result;
  result.feasible = true;
  result.objective = best_cost;
  for (auto [o, d, sub] : best_pieces) {
    result.routes.push_back(best[o][d][sub].path);
    result.schedules.push_back(best[o][d][sub].schedule);
  }
  return result;
}

}  // namespace btsff
