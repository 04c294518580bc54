#include <doctest.h>

#include <sstream>

#include "btsff/instance.hpp"
#include "support/fixtures.hpp"

using namespace btsff;

TEST_CASE("native instance parses and round-trips") {
  Instance a = testsupport::line_instance();
  CHECK(a.n == 2);
  CHECK(a.size() == 7);
  CHECK(a.stations == std::vector<int>{6});
  CHECK(a.arc(1, 2).travel_time == doctest::Approx(3.0));
  CHECK(a.arc(0, 4).battery == doctest::Approx(6.0));
  CHECK(a.depot_return_soc() == doctest::Approx(2.0));

  Instance b = testsupport::from_native(to_native(a));
  CHECK(to_native(b) == to_native(a));
}

TEST_CASE("parse errors carry the line number") {
  std::string text = testsupport::kLineInstance;
  text.replace(text.find("1 pickup 1 0 0 1 0 100 10"), 25, "1 pickup 1 0 0 1 0 100");
  try {
    testsupport::from_native(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 20);
  }
  CHECK_THROWS_AS(testsupport::from_native("[bogus]\n"), ParseError);
}

TEST_CASE("validation names the violated invariant") {
  std::string text = testsupport::kLineInstance;
  auto mutate = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  auto message = [&](const std::string& t) {
    try {
      testsupport::from_native(t);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(mutate("1 pickup 1 0 0 1 0 100", "1 pickup 1 0 0 1 50 40")).find("inverted") != std::string::npos);
  CHECK(message(mutate("3 delivery 3 0 0 -1", "3 delivery 3 0 0 -2")).find("q_i != -q_{n+i}") != std::string::npos);
  CHECK(message(mutate("n 2", "n 0")).find("n = 0") != std::string::npos);
  CHECK(message(mutate("gamma 0.1", "gamma 1.5")).find("gamma") != std::string::npos);
}

TEST_CASE("benchmark format with companion battery data") {
  const char* text = R"(2 2 480 3 30
0 0 0 0 0 0 480
1 1 0 3 1 10 40
2 4 0 3 1 20 60
3 3 0 3 -1 15 80
4 6 0 3 -1 25 90
5 0 0 0 0 0 480
6 2 0 0 0 0 480
)";
  RunConfig cfg;
  cfg.battery_capacity_kwh = 1.1;
  cfg.discharge_rate_kwh = 0.055;
  cfg.charge_rate_kwh = 0.11;
  std::istringstream in(text);
  Instance inst = parse_instance(in, InstanceFormat::BenchmarkAR, cfg);
  CHECK(inst.fleet_size == 2);
  CHECK(inst.n == 2);
  CHECK(inst.capacity == 3);
  CHECK(inst.locations[1].max_ride == doctest::Approx(30.0));
  CHECK(inst.stations == std::vector<int>{6});
  CHECK(inst.b_max == doctest::Approx(20.0));
  CHECK(inst.charge_rate() == doctest::Approx(2.0));
  CHECK(inst.gamma == doctest::Approx(0.1));

  std::istringstream empty("0 0 480 3 30\n0 0 0 0 0 0 480\n");
  CHECK_THROWS_AS(parse_instance(empty, InstanceFormat::BenchmarkAR, cfg), ValidationError);
}

TEST_CASE("format guessing") {
  CHECK(guess_format("data/a2-16.txt") == InstanceFormat::BenchmarkAR);
  CHECK(guess_format("r5-60") == InstanceFormat::BenchmarkAR);
  CHECK(guess_format("u2-16") == InstanceFormat::BenchmarkU);
  CHECK(guess_format("x.inst") == InstanceFormat::Native);
}

TEST_CASE("config file") {
  std::istringstream in("# run\ntime_unit = 5\nbattery_unit = 2.5\nvariant = bs\nstation = 1 2\nstation = 3 4\n");
  RunConfig cfg = parse_config(in);
  CHECK(cfg.time_unit == 5.0);
  CHECK(cfg.battery_unit == 2.5);
  CHECK(cfg.variant == Variant::BatterySwap);
  CHECK(cfg.station_coordinates.size() == 2);
  std::istringstream bad("time_unit 5\n");
  CHECK_THROWS_AS(parse_config(bad), ParseError);
}

TEST_CASE("service embedding adds the tail service once") {
  Instance inst = testsupport::line_instance();
  inst.locations[1].service_time = 2.0;
  Instance e = embed_service_times(inst);
  CHECK(e.arc(1, 3).travel_time == doctest::Approx(4.0));
  CHECK(e.arc(3, 1).travel_time == doctest::Approx(2.0));
  CHECK(e.arc(1, 3).travel_cost == doctest::Approx(2.0));
  CHECK(e.locations[1].max_ride == doctest::Approx(12.0));
  CHECK(embed_service_times(e).arc(1, 3).travel_time == doctest::Approx(4.0));
}

TEST_CASE("unit rounding helpers") {
  CHECK(round_to_unit(12.5, 5.0) == 15.0);
  CHECK(round_to_unit(12.4, 5.0) == 10.0);
  CHECK(ceil_to_unit(10.0, 5.0) == 10.0);
  CHECK(ceil_to_unit(10.01, 5.0) == 15.0);
  CHECK(floor_to_unit(14.99, 5.0) == 10.0);
}

TEST_CASE("discretization grids") {
  Instance inst = testsupport::line_instance();
  inst.locations[1].window = {12.0, 37.0};
  DiscreteInstance d = discretize_instance(inst, 10.0, 5.0, Rounding::DEadarp);
  CHECK(d.time_steps() == 10);
  CHECK(d.battery_steps() == 4);
  CHECK(d.base.locations[1].window.earliest == doctest::Approx(10.0));
  CHECK(d.base.locations[1].window.latest == doctest::Approx(40.0));
  CHECK(d.base.arc(1, 2).travel_time == doctest::Approx(0.0));
  CHECK(d.base.arc(0, 4).travel_time == doctest::Approx(10.0));
  CHECK(d.base.arc(0, 4).battery == doctest::Approx(5.0));
  CHECK(d.base.locations[1].max_ride == doctest::Approx(10.0));
  CHECK(d.battery_grid[d.depot_return_level] == doctest::Approx(5.0));
  CHECK(d.floor_time(37.0) == 3);
  CHECK(d.ceil_time(37.0) == 4);
  CHECK(d.nearest_time(40.0) == 4);
  CHECK(d.nearest_time(41.0) == -1);

  DiscreteInstance r = discretize_instance(inst, 10.0, 5.0, Rounding::Relaxed);
  CHECK(r.battery_grid[r.depot_return_level] == doctest::Approx(0.0));
  CHECK(r.ceil_battery(6.0) == 2);
  CHECK(r.floor_battery(6.0) == 1);

  DiscreteInstance odd = discretize_instance(inst, 10.0, 3.0, Rounding::Relaxed);
  CHECK(odd.battery_grid.back() == doctest::Approx(20.0));
}

TEST_CASE("battery transforms") {
  Instance inst = testsupport::line_instance();
  Instance s = scale_battery(inst, 0.5);
  CHECK(s.b_max == doctest::Approx(10.0));
  Instance r = round_battery(inst, 4.0);
  CHECK(r.arc(1, 2).battery == doctest::Approx(4.0));
  CHECK(r.b_max == doctest::Approx(20.0));
  inst.swap_time = 7.0;
  Instance f = fold_swap_time(inst);
  CHECK(f.arc(6, 1).travel_time == doctest::Approx(8.0));
  CHECK(f.arc(1, 6).travel_time == doctest::Approx(1.0));
}
