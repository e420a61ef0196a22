#include <benchmark/benchmark.h>

#include <random>

#include "bioner/nerhead.hpp"

namespace {

void BM_HeadForward(benchmark::State& state) {
    const std::size_t dim = 128;
    const std::size_t labels = 13;  // six classes, BIO
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 0.5);
    auto params = bioner::DenseHeadParams::zeros(dim, labels);
    for (double& x : params.weights) x = gauss(rng);
    bioner::EmbeddingBatch batch(static_cast<std::size_t>(state.range(0)),
                                 std::vector<double>(dim));
    for (auto& row : batch) {
        for (double& x : row) x = gauss(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(bioner::forward(batch, params));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HashFeaturize(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(bioner::hash_featurize("carcinoma", 128, 9));
    }
}

}  // namespace

BENCHMARK(BM_HeadForward)->Arg(32)->Arg(256);
BENCHMARK(BM_HashFeaturize);

BENCHMARK_MAIN();
