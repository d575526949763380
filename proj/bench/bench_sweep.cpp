// Serial reference vs OpenMP for the batched workloads.

#include <benchmark/benchmark.h>

#include "tbl/engine.hpp"
#include "tbl/macros.hpp"
#include "tbl/verify.hpp"

namespace {

using namespace tbl;

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

Network ring(double compliance) {
  GateParams p;
  p.balloon.compliance = compliance;
  p.open_conductance = 5.18e-7;
  Network net;
  add_ring(net, "r", 3, net.add_fixed("SUP", Pressure::from_kpa(145.0)), {"T1", "T2", "T3"}, p);
  return net;
}

// Frequency across a compliance grid, one transient per point.
void BM_ComplianceSweep(benchmark::State& state) {
  SimConfig cfg;
  cfg.t_end = 1.0;
  cfg.probes = {"T1"};
  constexpr std::size_t kPoints = 32;
  for (auto _ : state) {
    auto f = map_indices<double>(
        kPoints,
        [&](std::size_t i) {
          const auto rep = measure_oscillation(ring(6e-11 + 2e-12 * static_cast<double>(i)), cfg, "T1");
          return rep ? rep->frequency_hz : 0.0;
        },
        mode(state));
    benchmark::DoNotOptimize(f);
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_ComplianceSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Calibration(benchmark::State& state) {
  const Network tmpl = ring(5e-11);
  CalibrationOptions opt;
  opt.probe = "T1";
  opt.execution = mode(state);
  for (auto _ : state) {
    auto r = calibrate_oscillator(tmpl, {15.0, 35.0}, {}, opt);
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Calibration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

// 8-input parity tree of XOR cells built from NAND gates: 256 DC solves.
void BM_TruthTable(benchmark::State& state) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145.0));
  std::vector<std::string> level;
  for (int i = 0; i < 8; ++i) level.push_back("I" + std::to_string(i));
  const std::vector<std::string> inputs = level;
  int id = 0;
  auto nand = [&](const std::string& a, const std::string& b) {
    const std::string out = "n" + std::to_string(++id);
    add_nand_gate(net, "g" + std::to_string(id), net.node(a), net.node(b), net.node(out), sup, {});
    return out;
  };
  while (level.size() > 1) {
    std::vector<std::string> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      const std::string m = nand(level[i], level[i + 1]);
      next.push_back(nand(nand(level[i], m), nand(level[i + 1], m)));
    }
    level = next;
  }
  for (auto _ : state) {
    auto t = truth_table(net, inputs, {level[0]}, {}, mode(state));
    benchmark::DoNotOptimize(t);
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_TruthTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_FanoutLimit(benchmark::State& state) {
  for (auto _ : state) {
    auto r = fanout_limit({}, {Pressure::from_kpa(145.0), 1e8}, {}, 1024, mode(state));
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_FanoutLimit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
