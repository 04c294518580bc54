#include "btsff/fragments.hpp"

#include <algorithm>
#include <stdexcept>

#include "btsff/lp.hpp"

namespace btsff {

Stn fragment_stn(const std::vector<int>& path, const Instance& inst) {
  std::vector<double> lo, hi;
  for (int i : path) {
    lo.push_back(inst.locations[i].window.earliest);
    hi.push_back(inst.locations[i].window.latest);
  }
  Stn stn(lo, hi);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    stn.add_min_gap(static_cast<int>(k), static_cast<int>(k + 1), inst.arc(path[k], path[k + 1]).travel_time);
  }
  for (std::size_t a = 0; a < path.size(); ++a) {
    if (!inst.is_pickup(path[a])) continue;
    for (std::size_t b = a + 1; b < path.size(); ++b) {
      if (path[b] == inst.partner(path[a])) stn.add_max_gap(static_cast<int>(a), static_cast<int>(b), inst.locations[path[a]].max_ride);
    }
  }
  return stn;
}

std::optional<std::pair<double, double>> tighten_departure_window(const std::vector<int>& path, const Instance& inst) {
  Stn stn = fragment_stn(path, inst);
  auto lo = stn.earliest();
  if (!lo) return std::nullopt;
  auto hi = stn.latest();
  if (!hi) return std::nullopt;
  return std::make_pair(lo->front(), hi->front());
}

std::optional<double> earliest_end(const Fragment& f, const Instance& inst, double ready) {
  if (ready > f.dt_latest + kEps) return std::nullopt;
  Stn stn = fragment_stn(f.path, inst);
  stn.raise_lower(0, ready);
  auto t = stn.earliest();
  if (!t) return std::nullopt;
  return t->back();
}

namespace {

struct Search {
  const Instance& inst;
  std::vector<int> path;
  std::vector<char> in_path;
  std::vector<Fragment>* out;
  double use = 0.0;
  int load = 0;

  bool prefix_ok() const {
    Stn stn = fragment_stn(path, inst);
    const int last = static_cast<int>(path.size()) - 1;
    for (int a = 0; a <= last; ++a) {
      const int p = path[a];
      if (!inst.is_pickup(p) || in_path[inst.partner(p)]) continue;
      const int d = inst.partner(p);
      const double leg = inst.arc(path[last], d).travel_time;
      stn.add_max_gap(a, last, inst.locations[p].max_ride - leg);
      stn.lower_upper(last, inst.locations[d].window.latest - leg);
    }
    return stn.earliest().has_value();
  }

  void extend() {
    const int cur = path.back();
    const int n = inst.n;
    for (int next = 1; next <= 2 * n; ++next) {
      if (in_path[next]) continue;
      const int q = inst.locations[next].load_delta;
      if (inst.is_pickup(next)) {
        if (load + q > inst.capacity) continue;
      } else if (!in_path[inst.partner(next)]) {
        continue;
      }
      const double step = inst.arc(cur, next).battery;
      if (inst.b_max - (use + step) < inst.b_min - kEps) continue;
      path.push_back(next);
      in_path[next] = 1;
      load += q;
      use += step;
      if (prefix_ok()) {
        if (load == 0) {
          emit();
        } else {
          extend();
        }
      }
      use -= step;
      load -= q;
      in_path[next] = 0;
      path.pop_back();
    }
  }

  void emit() {
    auto dt = tighten_departure_window(path, inst);
    if (!dt) return;
    Fragment f;
    f.path = path;
    for (int i : path) {
      if (inst.is_pickup(i)) f.customers.push_back(i);
    }
    std::sort(f.customers.begin(), f.customers.end());
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const auto& a = inst.arc(path[k], path[k + 1]);
      f.travel_time += a.travel_time;
      f.travel_cost += a.travel_cost;
      f.battery_use += a.battery;
    }
    f.dt_earliest = dt->first;
    f.dt_latest = dt->second;
    out->push_back(std::move(f));
  }
};

void seed_search(const Instance& inst, int pickup, std::vector<Fragment>& out) {
  Search s{inst, {pickup}, std::vector<char>(inst.size(), 0), &out, 0.0, inst.locations[pickup].load_delta};
  s.in_path[pickup] = 1;
  if (s.load > inst.capacity) return;
  if (!s.prefix_ok()) return;
  s.extend();
}

void finalize(std::vector<Fragment>& frags, const Instance& inst, const FragmentOptions& options) {
  std::sort(frags.begin(), frags.end(), [](const Fragment& a, const Fragment& b) { return a.path < b.path; });
  frags.erase(std::unique(frags.begin(), frags.end(), [](const Fragment& a, const Fragment& b) { return a.path == b.path; }),
              frags.end());
  if (!options.compute_costs) return;
  // LP solves stay on one thread; the backend keeps global state.
  for (auto& f : frags) {
    f.min_excess = min_excess_ride_time(f, inst, options.force_lp);
    f.weighted_cost = weighted_cost(f, inst.lambda);
  }
}

}  // namespace

std::vector<Fragment> enumerate_fragments_serial(const Instance& inst, const FragmentOptions& options) {
  std::vector<Fragment> frags;
  for (int p = 1; p <= inst.n; ++p) seed_search(inst, p, frags);
  finalize(frags, inst, options);
  return frags;
}

std::vector<Fragment> enumerate_fragments(const Instance& inst, const FragmentOptions& options) {
  if (!options.parallel) return enumerate_fragments_serial(inst, options);
  std::vector<std::vector<Fragment>> per_seed(inst.n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int p = 1; p <= inst.n; ++p) seed_search(inst, p, per_seed[p - 1]);
  std::vector<Fragment> frags;
  for (auto& v : per_seed) {
    frags.insert(frags.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  finalize(frags, inst, options);
  return frags;
}

double min_excess_ride_time(const Fragment& f, const Instance& inst, bool force_lp) {
  const auto& path = f.path;
  const std::size_t m = path.size();
  std::vector<double> offset(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) offset[k] = offset[k - 1] + inst.arc(path[k - 1], path[k]).travel_time;
  double detour = 0.0;
  std::vector<std::pair<int, int>> rides;
  for (std::size_t a = 0; a < m; ++a) {
    if (!inst.is_pickup(path[a])) continue;
    for (std::size_t b = a + 1; b < m; ++b) {
      if (path[b] == inst.partner(path[a])) {
        rides.emplace_back(static_cast<int>(a), static_cast<int>(b));
        detour += offset[b] - offset[a] - inst.direct_time(path[a]);
      }
    }
  }
  if (!force_lp) {
    // A schedule without waiting attains the detour lower bound.
    double start_lo = -kInf, start_hi = kInf;
    for (std::size_t k = 0; k < m; ++k) {
      start_lo = std::max(start_lo, inst.locations[path[k]].window.earliest - offset[k]);
      start_hi = std::min(start_hi, inst.locations[path[k]].window.latest - offset[k]);
    }
    if (start_lo <= start_hi + kEps) return std::max(0.0, detour);
  }
  LinearProblem lp;
  for (int i : path) lp.add_column(0.0, inst.locations[i].window.earliest, inst.locations[i].window.latest);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    lp.add_row({{static_cast<int>(k + 1), static_cast<int>(k)}, {1.0, -1.0}, inst.arc(path[k], path[k + 1]).travel_time, kInf, {}});
  }
  double direct = 0.0;
  for (auto [a, b] : rides) {
    lp.add_row({{b, a}, {1.0, -1.0}, -kInf, inst.locations[path[a]].max_ride, {}});
    lp.cost[b] += 1.0;
    lp.cost[a] -= 1.0;
    direct += inst.direct_time(path[a]);
  }
  thread_local auto backend = make_backend();
  SolveResult res = backend->solve(lp, SolveOptions{});
  if (res.status != SolveStatus::Optimal) {
    throw std::logic_error("excess ride-time LP failed on a feasible fragment");
  }
  return std::max(0.0, res.objective - direct);
}

double weighted_cost(const Fragment& f, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
  return lambda * f.travel_cost + (1.0 - lambda) * f.min_excess;
}

bool is_fragment_path(const std::vector<int>& path, const Instance& inst) {
  if (path.size() < 2 || !inst.is_pickup(path.front()) || !inst.is_delivery(path.back())) return false;
  std::vector<char> seen(inst.size(), 0);
  int load = 0;
  double use = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const int i = path[k];
    if (!inst.is_customer(i) || seen[i]) return false;
    if (inst.is_delivery(i) && !seen[inst.partner(i)]) return false;
    seen[i] = 1;
    load += inst.locations[i].load_delta;
    if (load > inst.capacity) return false;
    if (load == 0 && k + 1 != path.size()) return false;
    if (k > 0) use += inst.arc(path[k - 1], i).battery;
  }
  if (load != 0) return false;
  if (inst.b_max - use < inst.b_min - kEps) return false;
  return tighten_departure_window(path, inst).has_value();
}

void write_fragment_dump(std::ostream& out, const std::vector<Fragment>& fragments) {
  for (const auto& f : fragments) {
    for (std::size_t k = 0; k < f.path.size(); ++k) out << (k ? " " : "") << f.path[k];
    out << " | [" << f.dt_earliest << ", " << f.dt_latest << "] | " << f.travel_cost << " | " << f.min_excess << " | "
        << f.weighted_cost << '\n';
  }
}

}  // namespace btsff
