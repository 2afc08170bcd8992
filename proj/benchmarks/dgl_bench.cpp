#include <benchmark/benchmark.h>

#include "dgl/dist_loop.hpp"
#include "dgl/init_protocol.hpp"
#include "dgl/metrics.hpp"
#include "dgl/synth.hpp"

namespace {

dgl::SyntheticInstance instance(std::size_t n, std::size_t m) {
  dgl::GenConfig c;
  c.n_nodes = n;
  c.n_signals = m;
  c.seed = 1;
  return dgl::generate_instance(c);
}

void BM_GenerateInstance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(instance(n, 1000));
  }
}
BENCHMARK(BM_GenerateInstance)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_InitProtocol(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)), 1000);
  for (auto _ : state) {
    dgl::MessageLedger ledger;
    benchmark::DoNotOptimize(dgl::run_initialization(*inst.comm, inst.signals, ledger));
  }
}
BENCHMARK(BM_InitProtocol)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SolveLocal(benchmark::State& state) {
  const auto inst = instance(100, 1000);
  const auto z = dgl::scaled_differences(dgl::edge_differences(inst.signals, *inst.comm),
                                         dgl::DataScaling::PerSignal);
  const dgl::GlobalRunConfig cfg;
  const auto local = cfg.local();
  std::size_t steps = 0;
  for (auto _ : state) {
    for (dgl::NodeId i = 0; i < inst.comm->n_nodes(); ++i) {
      auto s = dgl::make_node_state(*inst.comm, z.at_node(i), i, local);
      steps += dgl::solve_local(s, local);
    }
  }
  state.counters["steps_per_iter"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SolveLocal)->Unit(benchmark::kMillisecond);

void BM_DistributedRound(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)), 1000);
  const auto z = dgl::edge_differences(inst.signals, *inst.comm);
  dgl::GlobalRunConfig cfg;
  cfg.global_round_cap = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dgl::run_distributed(*inst.comm, z, cfg));
  }
}
BENCHMARK(BM_DistributedRound)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Metrics(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)), 10);
  dgl::MessageLedger ledger;
  auto learned = inst.truth.weights;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dgl::make_report(learned, inst.truth.weights, *inst.comm, ledger));
  }
}
BENCHMARK(BM_Metrics)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
