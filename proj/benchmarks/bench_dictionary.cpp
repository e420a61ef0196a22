#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "bioner/ontology.hpp"

namespace {

bioner::SynonymIndex build_index(std::size_t terms) {
    std::ostringstream source;
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> letter('a', 'z');
    for (std::size_t i = 0; i < terms; ++i) {
        std::string label;
        for (int c = 0; c < 8; ++c) label += static_cast<char>(letter(rng));
        if (i % 4 == 0) label += " syndrome";  // some multi-token synonyms
        source << R"({"term_id":"T:)" << i << R"(","default_label":")" << label
               << R"(","synonyms":[],"class":"disease"})" << '\n';
    }
    std::istringstream in(source.str());
    return bioner::ingest(in);
}

std::string text_with_hits(std::size_t words) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> letter('a', 'z');
    std::string text;
    for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) text += ' ';
        for (int c = 0; c < 8; ++c) text += static_cast<char>(letter(rng));
    }
    return text;
}

void BM_DictionaryTag(benchmark::State& state) {
    const auto index = build_index(10000);
    const std::string text = text_with_hits(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bioner::dictionary_tag(text, index));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_DictionaryTag)->Arg(100)->Arg(1000);
