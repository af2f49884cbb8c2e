#include <benchmark/benchmark.h>

#include "caplab/capacities.hpp"
#include "caplab/channels.hpp"
#include "caplab/ensembles.hpp"
#include "caplab/kak.hpp"

namespace {

using namespace caplab;

void BM_partial_trace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SubsystemLayout l{{"a", d}, {"b", d}, {"c", d}};
  const StateVector psi = random_state(l, 1);
  const DensityOperator rho = DensityOperator::from_state(psi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(rho, {"a", "c"}));
  }
}
BENCHMARK(BM_partial_trace)->Arg(2)->Arg(3)->Arg(4);

void BM_entanglement_entropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SubsystemLayout l{{"a", d}, {"b", d}, {"c", d}, {"d", d}};
  const StateVector psi = random_state(l, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entanglement_entropy(psi, {"a", "b"}));
  }
}
BENCHMARK(BM_entanglement_entropy)->Arg(2)->Arg(3);

void BM_operator_schmidt(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const BipartiteGate gate = random_gate(d, d, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_schmidt(gate));
  }
}
BENCHMARK(BM_operator_schmidt)->Arg(2)->Arg(3);

void BM_e_u_psi(benchmark::State& state) {
  const BipartiteGate gate = random_gate(2, 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e_u_psi(gate));
  }
}
BENCHMARK(BM_e_u_psi);

void BM_kak(benchmark::State& state) {
  const BipartiteGate gate = random_gate(2, 2, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kak_decompose(gate));
  }
}
BENCHMARK(BM_kak);

void BM_holevo_dense(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const BipartiteGate gate = random_gate(d, d, 6);
  const Ensemble ens = ensemble_dense(gate, max_entangled(d, "B_U", "B_anc"));
  const Ensemble after = ens.apply(embed(gate, ens.layout()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(holevo(after, {"B_U", "B_anc", "B_2"}));
  }
}
BENCHMARK(BM_holevo_dense)->Arg(2)->Arg(3);

void BM_e_u_optimize(benchmark::State& state) {
  const BipartiteGate gate = cnot_gate();
  OptimizerConfig config;
  config.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(e_u(gate, config));
  }
}
BENCHMARK(BM_e_u_optimize)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ce_capacity(benchmark::State& state) {
  const InducedChannel ch =
      induce_channel(cnot_gate(), StateVector(SubsystemLayout{{"B_U", 2}, {"B_anc", 2}},
                                              max_entangled(2).amplitudes()));
  OptimizerConfig config;
  config.restarts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ce_capacity(ch, config));
  }
}
BENCHMARK(BM_ce_capacity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
