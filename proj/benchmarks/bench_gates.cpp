#include <benchmark/benchmark.h>

#include "fln/gates.hpp"
#include "fln/rng.hpp"

namespace {

void BM_gate_sample(benchmark::State& state) {
    fln::HardConcreteGate gate(static_cast<std::size_t>(state.range(0)), 2.3);
    fln::Rng rng(1);
    for (auto _ : state) {
        fln::GateSample s = fln::sample(gate, rng);
        benchmark::DoNotOptimize(s.z.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_gate_deterministic(benchmark::State& state) {
    fln::HardConcreteGate gate(static_cast<std::size_t>(state.range(0)), 2.3);
    for (auto _ : state) {
        std::vector<double> z = fln::deterministic(gate);
        benchmark::DoNotOptimize(z.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_gate_expected_l0(benchmark::State& state) {
    fln::HardConcreteGate gate(static_cast<std::size_t>(state.range(0)), 2.3);
    for (auto _ : state) {
        fln::ExpectedL0 l0 = fln::expected_l0(gate);
        benchmark::DoNotOptimize(l0.total);
        benchmark::DoNotOptimize(l0.grad.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_gate_sample)->Arg(784);
BENCHMARK(BM_gate_deterministic)->Arg(784);
BENCHMARK(BM_gate_expected_l0)->Arg(784);

} // namespace
