#include <doctest.h>

#include <sstream>

#include "btsff/oracle.hpp"
#include "btsff/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace btsff;

namespace {

RunOptions options(Variant v, double tu, double bu) {
  RunOptions o;
  o.variant = v;
  o.time_unit = tu;
  o.battery_unit = bu;
  return o;
}

}  // namespace

TEST_CASE("csv rows round-trip") {
  RunReport r;
  r.instance = "a2-16";
  r.variant = Variant::DEadarp;
  r.time_unit = 5;
  r.battery_unit = 10;
  r.fragments = 123;
  r.fragment_seconds = 0.25;
  r.network_seconds = 0.5;
  r.cpu_seconds = 1.5;
  r.wall_seconds = 2.0;
  r.objective = 301.25;
  r.lower_bound = 300;
  r.gap = 0.004;
  r.cuts = 7;
  r.status = RunStatus::Optimal;
  std::ostringstream out;
  write_csv_row(out, r);
  RunReport p = parse_csv_row(out.str());
  CHECK(p.instance == r.instance);
  CHECK(p.variant == r.variant);
  CHECK(p.fragments == r.fragments);
  CHECK(p.objective == doctest::Approx(r.objective));
  CHECK(p.lower_bound == doctest::Approx(r.lower_bound));
  CHECK(p.gap == doctest::Approx(r.gap));
  CHECK(p.cuts == 7);
  CHECK(p.status == RunStatus::Optimal);

  r.objective = kInf;
  r.gap = kInf;
  r.status = RunStatus::TimeLimit;
  std::ostringstream inf;
  write_csv_row(inf, r);
  p = parse_csv_row(inf.str());
  CHECK(p.objective == kInf);
  CHECK(p.gap == kInf);
  CHECK(p.status == RunStatus::TimeLimit);
  CHECK_THROWS_AS(parse_csv_row("a,b,c"), ParseError);
}

TEST_CASE("csv header and average row") {
  std::ostringstream out;
  write_csv_header(out);
  CHECK(out.str() == "instance,variant,time_unit,battery_unit,|F|,F-time,Net,CPU,Time,OBJ,LB,Gap,Cuts,Status\n");
  RunReport a, b;
  a.objective = 10;
  b.objective = 20;
  a.fragments = 4;
  b.fragments = 6;
  a.lower_bound = b.lower_bound = 1;
  std::ostringstream avg;
  write_csv_average(avg, {a, b});
  CHECK(avg.str().rfind("Avg,", 0) == 0);
  CHECK(avg.str().find(",15.0000,") != std::string::npos);
  CHECK(avg.str().find(",5,") != std::string::npos);
}

TEST_CASE("runs are deterministic and solutions round-trip") {
  Instance inst = testsupport::random_instance(3, 4, 2, 1);
  RunOptions o = options(Variant::DEadarp, 5, 5);
  RunResult a = run_pipeline(inst, o);
  RunResult b = run_pipeline(inst, o);
  REQUIRE(a.report.status == RunStatus::Optimal);
  CHECK(a.report.objective == b.report.objective);
  CHECK(a.report.fragments == b.report.fragments);
  CHECK(a.report.arcs == b.report.arcs);
  std::ostringstream sa, sb;
  write_solution(sa, a);
  write_solution(sb, b);
  CHECK(sa.str() == sb.str());

  std::istringstream in(sa.str());
  Solution back = read_solution(in);
  CHECK(back.objective == doctest::Approx(a.report.objective).epsilon(1e-9));
  REQUIRE(back.routes.size() == a.solution.routes.size());
  CHECK(validate_solution(back, a.working, false).ok());
}

TEST_CASE("the relaxed network bounds the continuous optimum") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Instance inst = testsupport::random_instance(seed, 3, 1, 1, false);
    auto ref = brute_force_solve(embed_service_times(inst), Variant::DEadarp);
    RunResult lb = run_pipeline(inst, options(Variant::EadarpLowerBound, 10, 10));
    if (!ref.feasible) continue;
    REQUIRE(lb.report.status == RunStatus::Optimal);
    CHECK(lb.report.objective <= ref.objective + 1e-6);
  }
}

TEST_CASE("exact battery swap matches the oracle") {
  Instance inst = testsupport::line_instance();
  inst.b_max = 11;
  RunResult r = run_bs_exact(inst, options(Variant::BatterySwap, 5, 1));
  REQUIRE(r.report.status == RunStatus::Optimal);
  auto ref = brute_force_solve(r.working, Variant::BatterySwap);
  REQUIRE(ref.feasible);
  CHECK(r.report.objective == doctest::Approx(ref.objective).epsilon(1e-9));
  CHECK(validate_solution(r.solution, r.working, true).ok());
}

TEST_CASE("time limit of zero still reports") {
  RunOptions o = options(Variant::DEadarp, 5, 5);
  o.time_limit = 0.0;
  RunResult r = run_pipeline(testsupport::random_instance(4, 4, 2, 1), o);
  CHECK(r.report.status != RunStatus::Optimal);
}
