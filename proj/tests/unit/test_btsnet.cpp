#include <doctest.h>

#include <set>
#include <sstream>

#include "btsff/btsnet.hpp"
#include "btsff/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace btsff;

namespace {

struct Built {
  DiscreteInstance di;
  std::vector<Fragment> frags;
  BtsNetwork net;
};

Built build(const Instance& raw, Variant v, double tu, double bu, bool parallel = true, bool dominance = false) {
  RunOptions o;
  o.variant = v;
  o.time_unit = tu;
  o.battery_unit = bu;
  Built b{prepare_instance(raw, o), {}, {}};
  b.frags = enumerate_fragments(b.di.base);
  NetworkOptions no;
  no.battery_swap = v == Variant::BatterySwap;
  no.single_station = v == Variant::DEadarp;
  no.parallel = parallel;
  no.check_dominance = dominance;
  b.net = build_network(b.di, b.frags, no);
  return b;
}

// Every node lies on some origin-to-destination path.
bool pruned(const BtsNetwork& net) {
  std::vector<char> fwd(net.nodes.size(), 0), bwd(net.nodes.size(), 0);
  std::vector<int> stack(net.origin_nodes.begin(), net.origin_nodes.end());
  for (int o : stack) fwd[o] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int a : net.out[v])
      if (!fwd[net.arcs[a].to]++) stack.push_back(net.arcs[a].to);
  }
  stack.assign(net.destination_nodes.begin(), net.destination_nodes.end());
  for (int d : stack) bwd[d] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int a : net.in[v])
      if (!bwd[net.arcs[a].from]++) stack.push_back(net.arcs[a].from);
  }
  for (const auto& a : net.arcs)
    if (!fwd[a.from] || !bwd[a.to]) return false;
  return true;
}

}  // namespace

TEST_CASE("line network: depots, kinds and grid") {
  Built b = build(testsupport::line_instance(), Variant::DEadarp, 5, 5);
  const auto& net = b.net;
  REQUIRE(net.has_route());
  CHECK(net.time_levels == 20);
  CHECK(net.battery_levels == 4);
  const BtsNode& o = net.nodes[net.origin_nodes[0]];
  CHECK(o.loc == 0);
  CHECK(o.t == 0);
  CHECK(o.b == 4);
  const BtsNode& d = net.nodes[net.destination_nodes[0]];
  CHECK(d.loc == 5);
  CHECK(d.t == 20);
  CHECK(b.di.battery_grid[d.b] == doctest::Approx(5));
  CHECK(net.count(ArcKind::Fragment) > 0);
  CHECK(net.count(ArcKind::NodeArc) > 0);
  CHECK(net.count(ArcKind::Idle) > 0);
  CHECK(pruned(net));
  for (const auto& a : net.arcs) {
    CHECK(net.nodes[a.to].t >= net.nodes[a.from].t);
    if (a.kind == ArcKind::Fragment) {
      CHECK(a.tail_loc == b.frags[a.fragment].first());
      CHECK(a.cost == doctest::Approx(b.frags[a.fragment].weighted_cost));
    }
  }
}

TEST_CASE("tight battery forces charging arcs") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 12;
  Built b = build(inst, Variant::DEadarp, 1, 1);
  CHECK(b.net.count(ArcKind::Charging) > 0);
  for (const auto& a : b.net.arcs) {
    if (a.kind != ArcKind::Charging) continue;
    CHECK(a.station == 6);
    CHECK(a.charge >= -1e-9);
    const double before = b.di.battery_grid[b.net.nodes[a.from].b];
    const double after = b.di.battery_grid[b.net.nodes[a.to].b];
    const double use = b.di.base.arc(a.tail_loc, 6).battery + b.di.base.arc(6, a.head_loc).battery;
    if (!b.di.base.is_destination(a.head_loc)) CHECK(after == doctest::Approx(before - use + a.charge));
  }
}

TEST_CASE("battery swap arcs land on full battery minus the last leg") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 12;
  Built b = build(inst, Variant::BatterySwap, 5, 1);
  REQUIRE(b.net.count(ArcKind::Charging) > 0);
  for (const auto& a : b.net.arcs) {
    if (a.kind != ArcKind::Charging || b.di.base.is_destination(a.head_loc)) continue;
    CHECK(b.di.battery_grid[b.net.nodes[a.to].b] == doctest::Approx(12 - b.di.base.arc(6, a.head_loc).battery));
  }
}

TEST_CASE("serial and parallel builds are identical") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Instance inst = testsupport::random_instance(seed, 4, 2, 1, false);
    for (Variant v : {Variant::DEadarp, Variant::EadarpLowerBound, Variant::BatterySwap}) {
      Built a = build(inst, v, 5, 5, true);
      Built s = build(inst, v, 5, 5, false);
      CHECK(canonical_arcs(a.net) == canonical_arcs(s.net));
      CHECK(a.net.nodes.size() == s.net.nodes.size());
    }
  }
}

TEST_CASE("relaxed networks never run late or low") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Instance inst = testsupport::random_instance(seed, 4, 1, 1, false);
    inst.b_max *= 0.6;
    Built b = build(inst, Variant::EadarpLowerBound, 10, 5, true, true);
    CHECK(b.net.dominance.checked > 0);
    CHECK(b.net.dominance.time_violations == 0);
    CHECK(b.net.dominance.battery_violations == 0);
  }
}

TEST_CASE("network export lists every arc") {
  Built b = build(testsupport::line_instance(), Variant::DEadarp, 5, 5);
  std::ostringstream out;
  write_network(out, b.net);
  const std::string text = out.str();
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) >= b.net.arcs.size());
  CHECK(text.find("fragment") != std::string::npos);
}
