#include <benchmark/benchmark.h>

#include "fln/matrix.hpp"
#include "fln/rng.hpp"

namespace {

fln::Matrix random_matrix(std::size_t rows, std::size_t cols, fln::Rng& rng) {
    fln::Matrix m(rows, cols);
    for (double& v : m.data) v = rng.normal();
    return m;
}

// Shapes taken from the hot path of minibatch training: batch 128 against
// a 784->300 layer.
void BM_matmul(benchmark::State& state) {
    fln::Rng rng(1);
    fln::Matrix a = random_matrix(128, 300, rng);
    fln::Matrix b = random_matrix(300, 784, rng);
    for (auto _ : state) {
        fln::Matrix c = fln::matmul(a, b);
        benchmark::DoNotOptimize(c.data.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 128 * 300 * 784);
}

void BM_matmul_nt(benchmark::State& state) {
    fln::Rng rng(1);
    fln::Matrix a = random_matrix(128, 784, rng);
    fln::Matrix b = random_matrix(300, 784, rng);
    for (auto _ : state) {
        fln::Matrix c = fln::matmul_nt(a, b);
        benchmark::DoNotOptimize(c.data.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 128 * 300 * 784);
}

void BM_matmul_tn(benchmark::State& state) {
    fln::Rng rng(1);
    fln::Matrix a = random_matrix(128, 300, rng);
    fln::Matrix b = random_matrix(128, 784, rng);
    for (auto _ : state) {
        fln::Matrix c = fln::matmul_tn(a, b);
        benchmark::DoNotOptimize(c.data.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 128 * 300 * 784);
}

BENCHMARK(BM_matmul);
BENCHMARK(BM_matmul_nt);
BENCHMARK(BM_matmul_tn);

} // namespace

BENCHMARK_MAIN();
