// Serial reference vs OpenMP kernels: fragment enumeration and network generation.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "btsff/btsnet.hpp"
#include "btsff/fragments.hpp"
#include "btsff/generator.hpp"
#include "btsff/pipeline.hpp"

using namespace btsff;

namespace {

Instance make(int n) {
  GeneratorOptions g;
  g.n = n;
  g.vehicles = 3;
  g.stations = 3;
  g.seed = 17;
  g.horizon = 480;
  g.window_width = 60;
  g.capacity = 3;
  return embed_service_times(generate_instance(g).instance);
}

void fragments(benchmark::State& state, bool parallel) {
  Instance inst = make(static_cast<int>(state.range(0)));
  FragmentOptions o;
  o.parallel = parallel;
  std::size_t count = 0;
  for (auto _ : state) {
    auto fs = enumerate_fragments(inst, o);
    count = fs.size();
    benchmark::DoNotOptimize(fs.data());
  }
  state.counters["fragments"] = static_cast<double>(count);
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

void network(benchmark::State& state, bool parallel) {
  RunOptions ro;
  ro.variant = Variant::EadarpLowerBound;
  ro.time_unit = 5;
  ro.battery_unit = 5;
  DiscreteInstance di = prepare_instance(make(static_cast<int>(state.range(0))), ro);
  auto fs = enumerate_fragments(di.base);
  NetworkOptions no;
  no.parallel = parallel;
  std::size_t arcs = 0;
  for (auto _ : state) {
    BtsNetwork net = build_network(di, fs, no);
    arcs = net.arcs.size();
    benchmark::DoNotOptimize(net.arcs.data());
  }
  state.counters["arcs"] = static_cast<double>(arcs);
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(fragments, serial, false)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fragments, parallel, true)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(network, serial, false)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(network, parallel, true)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
