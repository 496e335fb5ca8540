// Serial vs OpenMP timings of the two parallel kernels, plus the
// dense-direction oracle reference.
#include "conewave/oracle.hpp"
#include "conewave/scenario.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <string>

using namespace conewave;

namespace {

const Scenario& scenario(const std::string& name) {
  static std::map<std::string, Scenario> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, load_scenario(std::string(CONEWAVE_SCENARIO_DIR) + "/" + name + ".json")).first;
  return it->second;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_Propagate(benchmark::State& state) {
  const Scenario& s = scenario("variable_speed");
  const MetricModel m = build_metric(s.metric, s.region);
  for (auto _ : state) {
    WavefrontResult r = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step, exec_of(state));
    benchmark::DoNotOptimize(r.slices.data());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

OracleOptions oracle_options(const Scenario& s, Execution exec) {
  OracleOptions o;
  o.dt_layer = s.oracle->dt_layer;
  o.neighborhood_radius = s.oracle->neighborhood_radius;
  o.t_max = s.t_grid.back();
  o.exec = exec;
  return o;
}

void BM_Oracle(benchmark::State& state) {
  const Scenario& s = scenario("constant_wind");
  const MetricModel m = build_metric(s.metric, s.region);
  const LatticeSpec grid = LatticeSpec::from_extents(s.oracle->lower, s.oracle->upper, s.oracle->dx);
  for (auto _ : state) {
    ArrivalField f = earliest_arrival(m, s.initial_set, grid, oracle_options(s, exec_of(state)));
    benchmark::DoNotOptimize(f.times.data());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_OracleReference(benchmark::State& state) {
  const Scenario& s = scenario("constant_wind");
  const MetricModel m = build_metric(s.metric, s.region);
  const LatticeSpec grid = LatticeSpec::from_extents(s.oracle->lower, s.oracle->upper, 2.0 * s.oracle->dx);
  OracleOptions o = oracle_options(s, Execution::serial);
  o.dt_layer *= 2.0;
  for (auto _ : state) {
    ArrivalField f = earliest_arrival_reference(m, s.initial_set, grid, o);
    benchmark::DoNotOptimize(f.times.data());
  }
}

}  // namespace

BENCHMARK(BM_Propagate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
