#include "bioner/weaklabel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bioner/utf8.hpp"
#include "json.hpp"

namespace bioner {

using nlohmann::json;

std::uint64_t sample_hash(std::uint64_t seed, const std::string& doc_id) {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 1099511628211ULL;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
    for (char c : doc_id) mix(static_cast<unsigned char>(c));
    return h;
}

bool sampled(std::uint64_t seed, const std::string& doc_id, double fraction) {
    return static_cast<double>(sample_hash(seed, doc_id) % 1000000ULL) < fraction * 1e6;
}

WeakDataset build(const std::vector<Document>& corpus, const std::set<std::string>& blocklist,
                  double fraction, LabelMode mode, std::uint64_t seed, const LabelSpace& labels) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw WeakLabelError("fraction must be in (0,1], got " + std::to_string(fraction));
    }
    WeakDataset dataset;
    dataset.mode = mode;
    dataset.provenance = "fraction=" + std::to_string(fraction) +
                         ";seed=" + std::to_string(seed) +
                         ";mode=" + (mode == LabelMode::Hard ? "hard" : "soft");
    for (const Document& doc : corpus) {
        if (blocklist.count(doc.doc_id)) continue;
        if (fraction < 1.0 && !sampled(seed, doc.doc_id, fraction)) continue;
        for (const Section& sec : doc.sections) {
            WeakRecord rec;
            rec.doc_id = doc.doc_id;
            rec.tokens = tokenize(sec.text);
            rec.targets = encode(sec.entities, rec.tokens, labels, mode);
            if (mode == LabelMode::Hard) {
                for (auto& vec : rec.targets) vec = harden(vec);
            }
            dataset.records.push_back(std::move(rec));
        }
    }
    return dataset;
}

std::vector<double> harden(const std::vector<double>& soft, double threshold) {
    std::vector<double> hard(soft.size(), 0.0);
    bool any = false;
    for (std::size_t j = 1; j < soft.size(); ++j) {
        if (soft[j] >= threshold) {
            hard[j] = 1.0;
            any = true;
        }
    }
    if (!hard.empty()) hard[0] = any ? 0.0 : 1.0;
    return hard;
}

CorpusStats corpus_stats(const WeakDataset& dataset) {
    CorpusStats stats;
    std::set<std::string> ids;
    for (const WeakRecord& rec : dataset.records) {
        ids.insert(rec.doc_id);
        ++stats.sentences;
        stats.words += rec.tokens.size();
    }
    stats.abstracts = ids.size();
    stats.words_per_sentence =
        stats.sentences > 0
            ? static_cast<double>(stats.words) / static_cast<double>(stats.sentences)
            : 0.0;
    return stats;
}

std::string CorpusStats::to_json() const {
    return json{{"abstracts", abstracts},
                {"sentences", sentences},
                {"words", words},
                {"words_per_sentence", words_per_sentence}}
        .dump();
}

std::string AdjacencyStats::to_json() const {
    return json{{"total_entities", total_entities},
                {"entities_with_adjacent_same_class", entities_with_adjacent_same_class},
                {"entities_not_io_delimitable", entities_not_io_delimitable}}
        .dump();
}

namespace {

bool gap_is_separator_free(const std::vector<char32_t>& scalars, std::size_t from,
                           std::size_t to, bool& has_word_char) {
    // Returns true when the gap [from, to) holds no alphanumeric text.
    has_word_char = false;
    for (std::size_t i = from; i < to && i < scalars.size(); ++i) {
        char32_t cp = scalars[i];
        const bool alnum = (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') ||
                           (cp >= U'a' && cp <= U'z') || cp >= 0x80;
        if (alnum) {
            has_word_char = true;
            return false;
        }
    }
    return true;
}

}  // namespace

AdjacencyStats adjacency_stats(const std::vector<Document>& corpus) {
    AdjacencyStats stats;
    for (const Document& doc : corpus) {
        for (const Section& sec : doc.sections) {
            const std::size_t n = sec.entities.size();
            stats.total_entities += n;
            if (n < 2) continue;
            const auto scalars = utf8::decode(sec.text);
            std::vector<bool> adjacent(n, false);
            std::vector<bool> not_delim(n, false);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    if (a == b) continue;
                    const Entity& ea = sec.entities[a];
                    const Entity& eb = sec.entities[b];
                    if (ea.entity_class != eb.entity_class) continue;
                    if (ea.spans.empty() || eb.spans.empty()) continue;
                    const std::size_t a_end = ea.spans.back().end;
                    const std::size_t b_start = eb.spans.front().start;
                    if (b_start < a_end) continue;
                    bool has_word = false;
                    if (!gap_is_separator_free(scalars, a_end, b_start, has_word)) continue;
                    adjacent[a] = adjacent[b] = true;
                    // Zero intervening tokens: nothing but whitespace in
                    // the gap (punctuation still yields a token).
                    const std::string gap = utf8::encode(scalars, a_end, b_start);
                    if (tokenize(gap).empty()) not_delim[a] = not_delim[b] = true;
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (adjacent[i]) ++stats.entities_with_adjacent_same_class;
                if (not_delim[i]) ++stats.entities_not_io_delimitable;
            }
        }
    }
    return stats;
}

std::set<std::string> read_blocklist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw WeakLabelError("cannot open blocklist file: " + path);
    std::set<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.insert(line);
    }
    return ids;
}

void write_weak_dataset(std::ostream& out, const WeakDataset& dataset) {
    const char* mode = dataset.mode == LabelMode::Hard ? "hard" : "soft";
    for (const WeakRecord& rec : dataset.records) {
        json tokens = json::array();
        for (const Token& t : rec.tokens) tokens.push_back(t.text);
        out << json{{"doc_id", rec.doc_id}, {"tokens", tokens}, {"targets", rec.targets},
                    {"mode", mode}}
                   .dump()
            << '\n';
    }
}

void write_weak_dataset_file(const std::string& path, const WeakDataset& dataset) {
    std::ofstream out(path);
    if (!out) throw WeakLabelError("cannot open output file: " + path);
    write_weak_dataset(out, dataset);
}

WeakDataset read_weak_dataset(std::istream& in) {
    WeakDataset dataset;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw WeakLabelError("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
        WeakRecord rec;
        rec.doc_id = j.at("doc_id").get<std::string>();
        for (const auto& t : j.at("tokens")) {
            rec.tokens.push_back({t.get<std::string>(), {0, 0}});
        }
        rec.targets = j.at("targets").get<TargetVectorSequence>();
        dataset.records.push_back(std::move(rec));
        if (j.value("mode", "hard") == std::string("soft")) dataset.mode = LabelMode::Soft;
    }
    return dataset;
}

WeakDataset read_weak_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw WeakLabelError("cannot open dataset file: " + path);
    return read_weak_dataset(in);
}

}  // namespace bioner
