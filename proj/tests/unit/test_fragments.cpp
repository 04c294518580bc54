#include <doctest.h>

#include <sstream>

#include "btsff/fragments.hpp"
#include "support/fixtures.hpp"
#include "support/fragment_oracle.hpp"
#include "support/grid_scheduler.hpp"

using namespace btsff;

namespace {

std::vector<std::vector<int>> paths(const std::vector<Fragment>& fs) {
  std::vector<std::vector<int>> out;
  for (const auto& f : fs) out.push_back(f.path);
  return out;
}

}  // namespace

TEST_CASE("line instance fragments") {
  Instance inst = testsupport::line_instance();
  auto fs = enumerate_fragments(inst);
  CHECK(paths(fs) == std::vector<std::vector<int>>{{1, 2, 3, 4}, {1, 2, 4, 3}, {1, 3}, {2, 1, 3, 4}, {2, 1, 4, 3}, {2, 4}});
  const Fragment& f = fs[0];
  CHECK(f.customers == std::vector<int>{1, 2});
  CHECK(f.travel_cost == doctest::Approx(7));
  CHECK(f.min_excess == doctest::Approx(4));
  CHECK(f.weighted_cost == doctest::Approx(0.5 * 7 + 0.5 * 4));
  CHECK(f.dt_earliest == doctest::Approx(0));
  CHECK(f.dt_latest == doctest::Approx(93));

  inst.capacity = 1;
  CHECK(paths(enumerate_fragments(inst)) == std::vector<std::vector<int>>{{1, 3}, {2, 4}});
}

TEST_CASE("fragment predicates") {
  Instance inst = testsupport::line_instance();
  CHECK(is_fragment_path({1, 2, 3, 4}, inst));
  CHECK_FALSE(is_fragment_path({1, 3, 2, 4}, inst));
  CHECK_FALSE(is_fragment_path({3, 1}, inst));
  CHECK_FALSE(is_fragment_path({1, 2, 3}, inst));
  auto w = tighten_departure_window({1, 2, 3, 4}, inst);
  REQUIRE(w);
  CHECK(w->second == doctest::Approx(93));
  CHECK(weighted_cost(Fragment{}, 0.3) == doctest::Approx(0));
  CHECK_THROWS_AS(weighted_cost(Fragment{}, 1.5), std::invalid_argument);
}

TEST_CASE("earliest end respects ready time and windows") {
  Instance inst = testsupport::line_instance();
  inst.locations[3].window = {20, 100};
  auto fs = enumerate_fragments(inst);
  const Fragment* f = nullptr;
  for (const auto& g : fs)
    if (g.path == std::vector<int>{1, 3}) f = &g;
  REQUIRE(f);
  CHECK(*earliest_end(*f, inst, 0.0) == doctest::Approx(20));
  CHECK(*earliest_end(*f, inst, 25.0) == doctest::Approx(27));
  CHECK_FALSE(earliest_end(*f, inst, 99.5));
}

TEST_CASE("fragments match the permutation oracle and the grid scheduler") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const bool integral = seed % 2 == 0;
    Instance inst = embed_service_times(testsupport::random_instance(seed, 4, 1, 1, integral));
    if (integral) inst = discretize_instance(inst, 1.0, 1.0, Rounding::DEadarp).base;
    inst.capacity = 2;
    auto fs = enumerate_fragments(inst);
    auto ref = testsupport::oracle_fragments(inst);
    REQUIRE(fs.size() == ref.size());
    for (std::size_t k = 0; k < fs.size(); ++k) {
      CHECK(fs[k].path == ref[k].path);
      CHECK(fs[k].dt_earliest == doctest::Approx(ref[k].window.earliest));
      CHECK(fs[k].dt_latest == doctest::Approx(ref[k].window.latest));
      auto grid = testsupport::grid_min_excess(inst, fs[k].path, 0.1);
      if (integral) {
        REQUIRE(grid);
        CHECK(std::abs(*grid - fs[k].min_excess) <= 0.1);
      } else if (grid) {
        // the grid only restricts schedules
        CHECK(fs[k].min_excess <= *grid + 1e-6);
      }
    }
  }
}

TEST_CASE("serial and parallel enumeration agree; LP agrees with the shortcut") {
  Instance inst = embed_service_times(testsupport::random_instance(11, 5, 1, 1, false));
  auto a = enumerate_fragments(inst);
  auto b = enumerate_fragments_serial(inst);
  auto c = enumerate_fragments(inst, FragmentOptions{true, true, true});
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].path == b[k].path);
    CHECK(a[k].min_excess == b[k].min_excess);
    CHECK(a[k].min_excess == doctest::Approx(c[k].min_excess).epsilon(1e-6));
  }
}

TEST_CASE("fragment dump") {
  Instance inst = testsupport::line_instance();
  inst.capacity = 1;
  std::ostringstream out;
  write_fragment_dump(out, enumerate_fragments(inst));
  std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind("1 3 |", 0) == 0);
}
