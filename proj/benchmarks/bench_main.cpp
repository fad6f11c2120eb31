#include <benchmark/benchmark.h>

#include "wsnsim/config.hpp"
#include "wsnsim/event_queue.hpp"
#include "wsnsim/linkbudget.hpp"
#include "wsnsim/trace_audit.hpp"

namespace {

void BM_TwoRay(benchmark::State& state) {
  const wsnsim::RadioParams radio;
  double d = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsnsim::two_ray_rx_power(radio, d));
    d = d > 500.0 ? 10.0 : d + 1.0;
  }
}
BENCHMARK(BM_TwoRay);

void BM_EventQueue(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    wsnsim::EventQueue<int> q;
    for (int i = 0; i < n; ++i) q.push(static_cast<double>((i * 7919) % n), i);
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueue)->Arg(1 << 10)->Arg(1 << 16);

void BM_Run(benchmark::State& state, const char* name, wsnsim::RoutingMode mode) {
  auto cfg = *wsnsim::preset(name);
  cfg.routing.mode = mode;
  for (auto _ : state) benchmark::DoNotOptimize(wsnsim::run(cfg).stats.packets_delivered);
}
BENCHMARK_CAPTURE(BM_Run, fig3_aodv, "fig3", wsnsim::RoutingMode::aodv)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, fig3_newaodv, "fig3", wsnsim::RoutingMode::newaodv)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, case3_newaodv, "case3", wsnsim::RoutingMode::newaodv)->Unit(benchmark::kMillisecond);

void BM_Audit(benchmark::State& state) {
  const auto trace = wsnsim::run(*wsnsim::preset("fig3"), true).trace;
  for (auto _ : state) benchmark::DoNotOptimize(wsnsim::audit_trace(trace).ok());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_Audit)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
