#include <benchmark/benchmark.h>

#include "fln/data.hpp"
#include "fln/network.hpp"
#include "fln/training.hpp"

namespace {

// One full optimizer step (stochastic forward, backward, Adam on every
// parameter) on an MNIST-shaped network, via train() itself so the
// measured path is the real one.
void BM_train_step(benchmark::State& state) {
    fln::Dataset data = fln::gen_ixor(4096, 7);
    // Widen the three inputs to a 64-feature problem so layer work dominates.
    fln::Matrix wide(data.size(), 64);
    fln::Rng rng(3);
    for (std::size_t i = 0; i < wide.rows; ++i)
        for (std::size_t j = 0; j < wide.cols; ++j)
            wide(i, j) = data.features(i, j % 3) + 0.01 * rng.normal();
    data.features = std::move(wide);
    data.feature_names.clear();

    fln::TrainConfig config;
    config.batch_size = 128;
    config.lambda = 0.1;
    config.eval_every = 0; // suppress periodic evaluation inside the loop

    for (auto _ : state) {
        state.PauseTiming();
        config.iterations = 8;
        state.ResumeTiming();
        auto [net, history] = fln::train(config, data, nullptr, {256, 128},
                                         fln::TaskKind::binary);
        benchmark::DoNotOptimize(net.head.weights.data.data());
    }
    state.SetItemsProcessed(state.iterations() * 8);
}

BENCHMARK(BM_train_step)->Unit(benchmark::kMillisecond);

} // namespace
