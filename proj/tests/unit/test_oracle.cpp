#include <doctest.h>

#include "btsff/oracle.hpp"
#include "support/fixtures.hpp"

using namespace btsff;

namespace {

OracleResult solve(const Instance& raw, Variant v) { return brute_force_solve(embed_service_times(raw), v); }

}  // namespace

TEST_CASE("line instance: two direct rides beat pooling") {
  auto r = solve(testsupport::line_instance(), Variant::DEadarp);
  REQUIRE(r.feasible);
  // cost 12, no excess; pooling costs 14 plus 4 excess
  CHECK(r.objective == doctest::Approx(6));
  REQUIRE(r.routes.size() == 1);
  CHECK(r.routes[0].visits == std::vector<int>{0, 1, 3, 2, 4, 5});
  CHECK(r.evaluated > 0);
}

TEST_CASE("short battery: the free detour through the station is found") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 11;
  auto r = solve(inst, Variant::DEadarp);
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(6));
  CHECK(r.routes[0].visits == std::vector<int>{0, 1, 3, 2, 4, 6, 5});
  CHECK(r.schedules[0].charge[5] == doctest::Approx(2.1));

  auto bs = solve(inst, Variant::BatterySwap);
  REQUIRE(bs.feasible);
  CHECK(bs.objective == doctest::Approx(6));
}

TEST_CASE("no station visit can rescue a hopeless battery") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 3;
  CHECK_FALSE(solve(inst, Variant::DEadarp).feasible);
}

TEST_CASE("oracle objective matches the validator") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Instance inst = embed_service_times(testsupport::random_instance(seed, 3, 2, 1));
    auto r = brute_force_solve(inst, Variant::DEadarp);
    if (!r.feasible) continue;
    Solution sol;
    sol.objective = r.objective;
    for (std::size_t k = 0; k < r.routes.size(); ++k)
      sol.routes.push_back({static_cast<int>(k), r.routes[k], r.schedules[k]});
    CHECK(validate_solution(sol, inst, false).ok());
  }
}
