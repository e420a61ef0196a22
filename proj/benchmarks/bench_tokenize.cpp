#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "bioner/tagio.hpp"

namespace {

std::string synthetic_abstract(std::size_t words) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> letter('a', 'z');
    std::uniform_int_distribution<std::size_t> len(2, 10);
    std::uniform_int_distribution<int> punct(0, 9);
    std::string text;
    for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) text += ' ';
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) text += static_cast<char>(letter(rng));
        if (punct(rng) == 0) text += ',';
    }
    text += '.';
    return text;
}

void BM_Tokenize(benchmark::State& state) {
    const std::string text = synthetic_abstract(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bioner::tokenize(text));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}

}  // namespace

BENCHMARK(BM_Tokenize)->Arg(50)->Arg(500)->Arg(5000);
