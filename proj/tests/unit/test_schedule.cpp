#include <doctest.h>

#include "btsff/schedule.hpp"
#include "btsff/stn.hpp"
#include "support/fixtures.hpp"

using namespace btsff;

TEST_CASE("stn earliest and latest") {
  Stn stn({0, 0, 0}, {100, 100, 30});
  stn.add_min_gap(0, 1, 10);
  stn.add_min_gap(1, 2, 5);
  auto e = stn.earliest();
  REQUIRE(e);
  CHECK((*e)[2] == doctest::Approx(15));
  auto l = stn.latest();
  REQUIRE(l);
  CHECK((*l)[0] == doctest::Approx(15));
  stn.add_max_gap(0, 2, 12);
  CHECK_FALSE(stn.earliest());
}

TEST_CASE("stn projection keeps the hint when feasible") {
  Stn stn({0, 0}, {50, 50});
  stn.add_min_gap(0, 1, 10);
  stn.add_max_gap(0, 1, 20);
  auto p = stn.project({5, 30});
  REQUIRE(p);
  CHECK((*p)[0] == doctest::Approx(10).epsilon(1e-6));
  CHECK((*p)[1] == doctest::Approx(30).epsilon(1e-6));
}

TEST_CASE("route summary") {
  Instance inst = testsupport::line_instance();
  RoutePath r{{0, 1, 2, 3, 4, 5}};
  RouteSummary s = summarize(r, inst);
  CHECK(s.travel_cost == doctest::Approx(14));
  CHECK(s.detour_excess == doctest::Approx(4));
  CHECK(structural_problem(r, inst).empty());
  CHECK_FALSE(structural_problem(RoutePath{{0, 3, 1, 5}}, inst).empty());
  CHECK_FALSE(structural_problem(RoutePath{{0, 1, 6, 3, 5}}, inst).empty());
}

TEST_CASE("feasible schedule without charging") {
  Instance inst = testsupport::line_instance();
  auto s = feasible_schedule(RoutePath{{0, 1, 2, 3, 4, 5}}, inst, false);
  REQUIRE(s);
  CHECK(s->battery_arrival.back() == doctest::Approx(6));
}

TEST_CASE("minimal charging to meet the return threshold") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 12.0;
  CHECK_FALSE(feasible_schedule(RoutePath{{0, 1, 2, 3, 4, 5}}, inst, false));
  auto s = feasible_schedule(RoutePath{{0, 1, 2, 3, 4, 6, 5}}, inst, false);
  REQUIRE(s);
  CHECK(s->battery_arrival[5] == doctest::Approx(0.0));
  CHECK(s->charge[5] == doctest::Approx(3.2));
  CHECK(s->battery_arrival.back() == doctest::Approx(1.2));
  CHECK(s->time[6] >= s->time[5] + 3.2 + 2.0 - 1e-6);
}

TEST_CASE("battery swap restores full charge") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 12.0;
  inst.gamma = 0.0;
  auto s = feasible_schedule(RoutePath{{0, 1, 2, 3, 4, 6, 5}}, inst, true);
  REQUIRE(s);
  CHECK(s->battery_arrival.back() == doctest::Approx(10.0));
}

TEST_CASE("min excess schedule delays the pickup") {
  Instance inst = testsupport::line_instance();
  inst.locations[3].window = {20, 100};
  RoutePath r{{0, 1, 3, 5}};
  auto early = feasible_schedule(r, inst, false);
  REQUIRE(early);
  CHECK(excess_of(r, inst, early->time) == doctest::Approx(8));
  auto best = min_excess_schedule(r, inst, false);
  REQUIRE(best);
  CHECK(best->excess_ride_total == doctest::Approx(0).epsilon(1e-6));
  CHECK(best->time[1] == doctest::Approx(18).epsilon(1e-6));
}

TEST_CASE("ride cap makes a route infeasible") {
  Instance inst = testsupport::line_instance();
  inst.locations[1].max_ride = 3.0;
  CHECK_FALSE(feasible_schedule(RoutePath{{0, 1, 2, 3, 4, 5}}, inst, false));
  CHECK(feasible_schedule(RoutePath{{0, 1, 3, 2, 4, 5}}, inst, false));
}

namespace {

Solution solved(const Instance& inst, std::vector<int> visits) {
  Solution sol;
  Route r;
  r.path.visits = std::move(visits);
  auto s = min_excess_schedule(r.path, inst, false);
  REQUIRE(s);
  r.schedule = *s;
  sol.objective = inst.lambda * summarize(r.path, inst).travel_cost + (1 - inst.lambda) * s->excess_ride_total;
  sol.routes.push_back(r);
  return sol;
}

}  // namespace

TEST_CASE("validator accepts a correct solution and names each breach") {
  Instance inst = testsupport::line_instance();
  Solution good = solved(inst, {0, 1, 2, 3, 4, 5});
  CHECK(validate_solution(good, inst, false).ok());

  Solution missing = solved(inst, {0, 1, 3, 5});
  CHECK(validate_solution(missing, inst, false).has(Violation::Cover));

  Solution late = good;
  late.routes[0].schedule.time[2] = 150;
  CHECK(validate_solution(late, inst, false).has(Violation::TimeWindow));

  Solution objective = good;
  objective.objective += 1.0;
  CHECK(validate_solution(objective, inst, false).has(Violation::Objective));

  Instance tight = inst;
  tight.capacity = 1;
  CHECK(validate_solution(good, tight, false).has(Violation::Capacity));

  Instance small = inst;
  small.b_max = 12;
  CHECK(validate_solution(good, small, false).has(Violation::Battery));

  Solution slow = good;
  for (std::size_t k = 3; k < slow.routes[0].schedule.time.size(); ++k) slow.routes[0].schedule.time[k] += 20;
  CHECK(validate_solution(slow, inst, false).has(Violation::RideTime));

  Solution backwards = good;
  backwards.routes[0].schedule.time[2] = backwards.routes[0].schedule.time[1];
  CHECK(validate_solution(backwards, inst, false).has(Violation::Timing));
}
