#include "doctest.h"

#include <sstream>

#include "bioner/ontology.hpp"

using namespace bioner;

TEST_CASE("ingest: default label is indexed") {
    std::istringstream in(
        R"({"term_id":"MONDO:1","default_label":"melanoma","synonyms":[],"class":"disease"})"
        "\n");
    const auto index = ingest(in);
    const auto entries = index.lookup({"melanoma"});
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].term_id == "MONDO:1");
    CHECK(entries[0].entity_class == "disease");
}

TEST_CASE("ingest: same synonym under two classes keeps both") {
    std::istringstream in(
        R"({"term_id":"HGNC:3236","default_label":"EGFR","synonyms":[],"class":"gene"})"
        "\n"
        R"({"term_id":"CHEM:9","default_label":"EGFR","synonyms":[],"class":"chemical"})"
        "\n");
    const auto index = ingest(in);
    CHECK(index.lookup({"egfr"}).size() == 2);
}

TEST_CASE("ingest two sources: 3 + 5 terms with 1 shared synonym gives 7 keys") {
    std::istringstream source_a(
        R"({"term_id":"A:1","default_label":"alpha","synonyms":[],"class":"gene"})"
        "\n"
        R"({"term_id":"A:2","default_label":"beta","synonyms":[],"class":"gene"})"
        "\n"
        R"({"term_id":"A:3","default_label":"shared","synonyms":[],"class":"gene"})"
        "\n"
        R"({"term_id":"B:1","default_label":"delta","synonyms":[],"class":"disease"})"
        "\n"
        R"({"term_id":"B:2","default_label":"epsilon","synonyms":[],"class":"disease"})"
        "\n"
        R"({"term_id":"B:3","default_label":"zeta","synonyms":[],"class":"disease"})"
        "\n"
        R"({"term_id":"B:4","default_label":"eta","synonyms":[],"class":"disease"})"
        "\n"
        R"({"term_id":"B:5","default_label":"shared","synonyms":[],"class":"disease"})"
        "\n");
    const auto index = ingest(source_a);
    CHECK(index.synonym_count() == 7);
    CHECK(index.lookup({"shared"}).size() == 2);
}

TEST_CASE("ingest: malformed records skipped and counted") {
    std::istringstream in(
        "not json\n"
        R"({"term_id":"A:1","default_label":"alpha","synonyms":[],"class":"gene"})"
        "\n"
        R"({"missing":"fields"})"
        "\n");
    const auto index = ingest(in);
    CHECK(index.skipped_records() == 2);
    CHECK(index.lookup({"alpha"}).size() == 1);
}

TEST_CASE("ingest: empty source gives empty index") {
    std::istringstream in("");
    const auto index = ingest(in);
    CHECK(index.synonym_count() == 0);
}

TEST_CASE("ingest idempotence: same source twice, identical lookups") {
    const std::string source =
        R"({"term_id":"A:1","default_label":"lung cancer","synonyms":["carcinoma"],"class":"disease"})"
        "\n";
    std::istringstream in1(source), in2(source);
    const auto a = ingest(in1);
    const auto b = ingest(in2);
    CHECK(a.synonym_count() == b.synonym_count());
    CHECK(a.lookup({"lung", "cancer"}) == b.lookup({"lung", "cancer"}));
    CHECK(a.lookup({"carcinoma"}) == b.lookup({"carcinoma"}));
}

TEST_CASE("TSV adapter") {
    std::istringstream in(
        "MONDO:1\tmelanoma\tskin cancer|naevocarcinoma\tdisease\n"
        "badline\n");
    const auto index = ingest_tsv(in);
    CHECK(index.lookup({"melanoma"}).size() == 1);
    CHECK(index.lookup({"skin", "cancer"}).size() == 1);
    CHECK(index.lookup({"naevocarcinoma"}).size() == 1);
    CHECK(index.skipped_records() == 1);
}

TEST_CASE("dictionary_tag: single-token match") {
    std::istringstream in(
        R"({"term_id":"MONDO:1","default_label":"melanoma","synonyms":[],"class":"disease"})"
        "\n");
    const auto index = ingest(in);
    const auto entities = dictionary_tag("melanoma of skin", index);
    REQUIRE(entities.size() == 1);
    CHECK(entities[0].spans == std::vector<CharSpan>{{0, 8}});
    CHECK(entities[0].entity_class == "disease");
    CHECK(entities[0].confidence == 1.0);
    CHECK(entities[0].source == "dictionary");
}

TEST_CASE("dictionary_tag: leftmost-longest wins within a class") {
    std::istringstream in(
        R"({"term_id":"D:1","default_label":"lung cancer","synonyms":[],"class":"disease"})"
        "\n"
        R"({"term_id":"D:2","default_label":"cancer","synonyms":[],"class":"disease"})"
        "\n");
    const auto index = ingest(in);
    const auto entities = dictionary_tag("lung cancer", index);
    REQUIRE(entities.size() == 1);
    CHECK(entities[0].match_text == "lung cancer");
}

TEST_CASE("dictionary_tag: different classes may overlap") {
    std::istringstream in(
        R"({"term_id":"G:1","default_label":"EGFR","synonyms":[],"class":"gene"})"
        "\n"
        R"({"term_id":"C:1","default_label":"EGFR","synonyms":[],"class":"chemical"})"
        "\n");
    const auto index = ingest(in);
    const auto entities = dictionary_tag("EGFR", index);
    CHECK(entities.size() == 2);
}

TEST_CASE("dictionary_tag: case folding on by default") {
    std::istringstream in(
        R"({"term_id":"D:1","default_label":"Melanoma","synonyms":[],"class":"disease"})"
        "\n");
    const auto index = ingest(in);
    CHECK(dictionary_tag("MELANOMA", index).size() == 1);

    std::istringstream in2(
        R"({"term_id":"D:1","default_label":"Melanoma","synonyms":[],"class":"disease"})"
        "\n");
    const auto exact = ingest(in2, /*case_fold=*/false);
    CHECK(dictionary_tag("MELANOMA", exact).empty());
    CHECK(dictionary_tag("Melanoma", exact).size() == 1);
}

TEST_CASE("dictionary_tag invariants: match_text indexed, per-class spans disjoint") {
    std::istringstream in(
        R"({"term_id":"D:1","default_label":"lung cancer","synonyms":["cancer"],"class":"disease"})"
        "\n"
        R"({"term_id":"G:1","default_label":"cancer","synonyms":[],"class":"gene"})"
        "\n");
    const auto index = ingest(in);
    const auto entities =
        dictionary_tag("cancer research on lung cancer and cancer cells", index);
    for (const auto& e : entities) {
        std::vector<std::string> toks;
        std::stringstream words(e.match_text);
        std::string w;
        while (words >> w) toks.push_back(w);
        CHECK(!index.lookup(toks).empty());
    }
    // within one class, spans must not overlap
    for (std::size_t i = 0; i < entities.size(); ++i) {
        for (std::size_t j = i + 1; j < entities.size(); ++j) {
            if (entities[i].entity_class != entities[j].entity_class) continue;
            const auto& a = entities[i].spans[0];
            const auto& b = entities[j].spans[0];
            CHECK((a.end <= b.start || b.end <= a.start));
        }
    }
}
