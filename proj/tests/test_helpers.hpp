#ifndef BIONER_TEST_HELPERS_HPP
#define BIONER_TEST_HELPERS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bioner/eval.hpp"
#include "bioner/tagio.hpp"

namespace bioner::testing {

// Brute-force chunk enumeration, independent of the library's chunker:
// directly scans a tag-name sequence and collects maximal chunks per class
// by first principles. Used as the evaluation oracle.
inline ChunkSet oracle_chunks(const std::vector<std::string>& tags, const LabelSpace& labels) {
    ChunkSet chunks;
    for (std::size_t ci = 0; ci < labels.num_classes(); ++ci) {
        const std::string b = "B-" + labels.classes()[ci];
        const std::string i = "I-" + labels.classes()[ci];
        std::size_t t = 0;
        while (t < tags.size()) {
            const bool starts = tags[t] == b || (tags[t] == i && (t == 0 || (tags[t - 1] != b && tags[t - 1] != i)));
            if (!starts) {
                ++t;
                continue;
            }
            std::size_t end = t;
            while (end + 1 < tags.size() && tags[end + 1] == i) ++end;
            chunks.insert({ci, t, end});
            t = end + 1;
        }
    }
    return chunks;
}

struct OracleCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

inline OracleCounts oracle_counts(const ChunkSet& gold, const ChunkSet& pred) {
    OracleCounts c;
    for (const auto& chunk : pred) {
        if (gold.count(chunk)) {
            ++c.tp;
        } else {
            ++c.fp;
        }
    }
    for (const auto& chunk : gold) {
        if (!pred.count(chunk)) ++c.fn;
    }
    return c;
}

// Random BIO tag sequence over k classes.
inline std::vector<std::string> random_tags(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                            const LabelSpace& labels) {
    std::uniform_int_distribution<std::size_t> pick(0, 2 * k);
    std::vector<std::string> tags(n);
    for (std::size_t t = 0; t < n; ++t) tags[t] = labels.label_name(pick(rng));
    return tags;
}

// Tokens "t0 t1 t2 ..." with single-space gaps, spans consistent.
inline std::vector<Token> synthetic_tokens(std::size_t n) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::string text = "t" + std::to_string(i);
        tokens.push_back({text, {pos, pos + text.size()}});
        pos += text.size() + 1;
    }
    return tokens;
}

}  // namespace bioner::testing

#endif
