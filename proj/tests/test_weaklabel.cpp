#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "bioner/weaklabel.hpp"

using namespace bioner;

namespace {

std::vector<Document> synthetic_corpus(std::size_t n) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < n; ++i) {
        Document doc;
        doc.doc_id = "PMID:" + std::to_string(i);
        Section sec{"abstract", "EGFR binds p53", {}, {}};
        sec.entities.push_back({{{0, 4}}, "gene", "EGFR", 0.9, "bern2"});
        doc.sections.push_back(sec);
        docs.push_back(doc);
    }
    return docs;
}

}  // namespace

TEST_CASE("build: full blocklist gives an empty dataset") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    const auto corpus = synthetic_corpus(20);
    std::set<std::string> blocklist;
    for (const auto& d : corpus) blocklist.insert(d.doc_id);
    const auto dataset = build(corpus, blocklist, 1.0, LabelMode::Hard, 0, labels);
    CHECK(dataset.records.empty());
}

TEST_CASE("build: fraction 1.0, empty blocklist includes everything") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    const auto corpus = synthetic_corpus(25);
    const auto dataset = build(corpus, {}, 1.0, LabelMode::Hard, 0, labels);
    CHECK(dataset.records.size() == 25);
}

TEST_CASE("build: fraction 0.1 over 1000 docs samples deterministically within bounds") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    const auto corpus = synthetic_corpus(1000);
    const auto a = build(corpus, {}, 0.1, LabelMode::Hard, 42, labels);
    const auto b = build(corpus, {}, 0.1, LabelMode::Hard, 42, labels);
    CHECK(a.records.size() >= 60);
    CHECK(a.records.size() <= 140);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].doc_id == b.records[i].doc_id);
        CHECK(a.records[i].targets == b.records[i].targets);
    }
    // Order independence: shuffled corpus selects the same id set.
    auto shuffled = corpus;
    std::mt19937_64 rng(7);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto c = build(shuffled, {}, 0.1, LabelMode::Hard, 42, labels);
    std::set<std::string> ids_a, ids_c;
    for (const auto& r : a.records) ids_a.insert(r.doc_id);
    for (const auto& r : c.records) ids_c.insert(r.doc_id);
    CHECK(ids_a == ids_c);
}

TEST_CASE("build: blocklisted ids never appear") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    const auto corpus = synthetic_corpus(200);
    std::set<std::string> blocklist;
    for (std::size_t i = 0; i < 200; i += 3) blocklist.insert("PMID:" + std::to_string(i));
    const auto dataset = build(corpus, blocklist, 1.0, LabelMode::Hard, 1, labels);
    for (const auto& rec : dataset.records) CHECK(blocklist.count(rec.doc_id) == 0);
}

TEST_CASE("build: invalid fraction rejected") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    CHECK_THROWS_AS(build({}, {}, 0.0, LabelMode::Hard, 0, labels), WeakLabelError);
    CHECK_THROWS_AS(build({}, {}, 1.5, LabelMode::Hard, 0, labels), WeakLabelError);
}

TEST_CASE("build: hard mode emits only 0/1, soft mode carries confidences") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    const auto corpus = synthetic_corpus(5);
    const auto hard = build(corpus, {}, 1.0, LabelMode::Hard, 0, labels);
    for (const auto& rec : hard.records) {
        for (const auto& vec : rec.targets) {
            for (double v : vec) CHECK((v == 0.0 || v == 1.0));
        }
    }
    const auto soft = build(corpus, {}, 1.0, LabelMode::Soft, 0, labels);
    CHECK(soft.records[0].targets[0][1] == doctest::Approx(0.9));
}

TEST_CASE("harden thresholds and recomputes O") {
    CHECK(harden({0.1, 0.9, 0.2}) == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(harden({0.5, 0.5, 0.5}) == std::vector<double>{0.0, 1.0, 1.0});  // >= rule
    CHECK(harden({0.2, 0.3, 0.4}) == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("harden is idempotent") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<double> v(7);
        for (double& x : v) x = uniform(rng);
        const auto once = harden(v);
        CHECK(harden(once) == once);
    }
}

TEST_CASE("corpus_stats on a hand-tokenized sentence") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    std::vector<Document> corpus(1);
    corpus[0].doc_id = "d1";
    corpus[0].sections.push_back({"s", "IL-2 binds.", {}, {}});
    const auto dataset = build(corpus, {}, 1.0, LabelMode::Hard, 0, labels);
    const auto stats = corpus_stats(dataset);
    CHECK(stats.abstracts == 1);
    CHECK(stats.sentences == 1);
    CHECK(stats.words == 5);
    CHECK(stats.words_per_sentence == doctest::Approx(5.0));
}

TEST_CASE("corpus_stats on an empty dataset") {
    const auto stats = corpus_stats(WeakDataset{});
    CHECK(stats.abstracts == 0);
    CHECK(stats.sentences == 0);
    CHECK(stats.words == 0);
    CHECK(stats.words_per_sentence == 0.0);
}

TEST_CASE("adjacency: whitespace-separated same-class pair counts both ways") {
    // species mentions back to back, only a space between
    Document doc;
    doc.doc_id = "d";
    Section sec{"s", "goldfish Carassius auratus", {}, {}};
    sec.entities.push_back({{{0, 8}}, "species", "goldfish", 1.0, ""});
    sec.entities.push_back({{{9, 26}}, "species", "Carassius auratus", 1.0, ""});
    doc.sections.push_back(sec);
    const auto stats = adjacency_stats({doc});
    CHECK(stats.total_entities == 2);
    CHECK(stats.entities_with_adjacent_same_class == 2);
    CHECK(stats.entities_not_io_delimitable == 2);
}

TEST_CASE("adjacency: intervening word token breaks adjacency") {
    Document doc;
    doc.doc_id = "d";
    Section sec{"s", "EGFR and KRAS", {}, {}};
    sec.entities.push_back({{{0, 4}}, "gene", "EGFR", 1.0, ""});
    sec.entities.push_back({{{9, 13}}, "gene", "KRAS", 1.0, ""});
    doc.sections.push_back(sec);
    const auto stats = adjacency_stats({doc});
    CHECK(stats.entities_with_adjacent_same_class == 0);
    CHECK(stats.entities_not_io_delimitable == 0);
}

TEST_CASE("adjacency: punctuation-separated pair is adjacent but delimitable") {
    Document doc;
    doc.doc_id = "d";
    Section sec{"s", "EGFR, KRAS", {}, {}};
    sec.entities.push_back({{{0, 4}}, "gene", "EGFR", 1.0, ""});
    sec.entities.push_back({{{6, 10}}, "gene", "KRAS", 1.0, ""});
    doc.sections.push_back(sec);
    const auto stats = adjacency_stats({doc});
    CHECK(stats.entities_with_adjacent_same_class == 2);
    CHECK(stats.entities_not_io_delimitable == 0);
}

TEST_CASE("adjacency fixture: 2 adjacent pairs, 1 with zero intervening tokens") {
    Document doc;
    doc.doc_id = "d";
    // pair 1: space only; pair 2: comma between (a token, so delimitable)
    Section s1{"s1", "aaa bbb", {}, {}};
    s1.entities.push_back({{{0, 3}}, "gene", "aaa", 1.0, ""});
    s1.entities.push_back({{{4, 7}}, "gene", "bbb", 1.0, ""});
    Section s2{"s2", "ccc, ddd", {}, {}};
    s2.entities.push_back({{{0, 3}}, "gene", "ccc", 1.0, ""});
    s2.entities.push_back({{{5, 8}}, "gene", "ddd", 1.0, ""});
    doc.sections = {s1, s2};
    const auto stats = adjacency_stats({doc});
    CHECK(stats.total_entities == 4);
    CHECK(stats.entities_with_adjacent_same_class == 4);
    CHECK(stats.entities_not_io_delimitable == 2);
    CHECK(stats.entities_not_io_delimitable <= stats.entities_with_adjacent_same_class);
}

TEST_CASE("weak dataset file round-trip") {
    LabelSpace labels({"gene"}, TagSchema::BIO);
    const auto dataset = build(synthetic_corpus(3), {}, 1.0, LabelMode::Hard, 0, labels);
    std::ostringstream out;
    write_weak_dataset(out, dataset);
    std::istringstream in(out.str());
    const auto back = read_weak_dataset(in);
    REQUIRE(back.records.size() == dataset.records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i) {
        CHECK(back.records[i].doc_id == dataset.records[i].doc_id);
        CHECK(back.records[i].targets == dataset.records[i].targets);
    }
}
