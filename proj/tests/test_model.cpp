#include "doctest.h"

#include <sstream>

#include "bioner/model.hpp"
#include "bioner/utf8.hpp"

using namespace bioner;

TEST_CASE("nesting: overlapping entities of different classes coexist") {
    Section sec{"title", "EGFR inhibitor", {}, {}};
    add_entity(sec, {{{0, 4}}, "gene", "", 1.0, "test"});
    add_entity(sec, {{{0, 14}}, "chemical", "", 1.0, "test"});
    REQUIRE(sec.entities.size() == 2);
    CHECK(sec.entities[0].entity_class == "gene");
    CHECK(sec.entities[1].entity_class == "chemical");
}

TEST_CASE("out-of-bounds span is rejected with span and length") {
    Section sec{"title", "EGFR inhibitor", {}, {}};  // length 14
    CHECK_THROWS_WITH_AS(add_entity(sec, {{{10, 20}}, "gene", "", 1.0, ""}),
                         doctest::Contains("length 14"), ModelError);
    CHECK(sec.entities.empty());
}

TEST_CASE("non-contiguous entity stored as one entity") {
    Section sec{"s", "left and right ventricle", {}, {}};
    add_entity(sec, {{{0, 4}, {15, 24}}, "anatomy", "", 1.0, ""});
    REQUIRE(sec.entities.size() == 1);
    CHECK(sec.entities[0].spans.size() == 2);
}

TEST_CASE("entity_text joins non-contiguous spans with one space") {
    Section sec{"s", "left and right ventricle", {}, {}};
    CHECK(entity_text(sec, {{{0, 4}}, "anatomy", "", 1.0, ""}) == "left");
    CHECK(entity_text(sec, {{{0, 4}, {15, 24}}, "anatomy", "", 1.0, ""}) == "left ventricle");
    CHECK_THROWS_AS(entity_text(sec, {{}, "anatomy", "", 1.0, ""}), ModelError);
}

TEST_CASE("offsets are Unicode scalars, not bytes") {
    // "α-synuclein": the Greek letter is 2 bytes but 1 scalar.
    Section sec{"s", "α-synuclein binds", {}, {}};
    CHECK(section_length(sec) == 17);
    add_entity(sec, {{{0, 11}}, "gene", "", 1.0, ""});
    CHECK(entity_text(sec, sec.entities[0]) == "α-synuclein");
}

TEST_CASE("entities list in insertion order") {
    Section sec{"s", "aaaa bbbb cccc", {}, {}};
    for (std::size_t i = 0; i < 5; ++i) {
        add_entity(sec, {{{i, i + 2}}, "gene", "", 1.0, "step" + std::to_string(i)});
    }
    REQUIRE(sec.entities.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(sec.entities[i].source == "step" + std::to_string(i));
}

TEST_CASE("entities with identical spans but different classes coexist") {
    Section sec{"s", "EGFR", {}, {}};
    add_entity(sec, {{{0, 4}}, "gene", "", 1.0, ""});
    add_entity(sec, {{{0, 4}}, "chemical", "", 1.0, ""});
    CHECK(sec.entities.size() == 2);
}

TEST_CASE("corpus JSON-lines round-trip") {
    Document doc;
    doc.doc_id = "PMID:123";
    Section sec{"abstract", "EGFR inhibitor", {}, {}};
    add_entity(sec, {{{0, 4}}, "gene", "EGFR", 0.75, "dictionary"});
    doc.sections.push_back(sec);

    const std::string line = document_to_json_line(doc);
    const Document back = document_from_json_line(line);
    CHECK(back.doc_id == doc.doc_id);
    REQUIRE(back.sections.size() == 1);
    CHECK(back.sections[0].text == "EGFR inhibitor");
    REQUIRE(back.sections[0].entities.size() == 1);
    CHECK(back.sections[0].entities[0].confidence == doctest::Approx(0.75));
    CHECK(back.sections[0].entities[0].spans == doc.sections[0].entities[0].spans);
}

TEST_CASE("corpus reader reports the offending line") {
    std::istringstream in("{\"doc_id\":\"a\",\"sections\":[]}\nnot json\n");
    CHECK_THROWS_WITH_AS(read_corpus(in), doctest::Contains("line 2"), ModelError);
}

TEST_CASE("tolerant reader skips and counts bad lines") {
    std::istringstream in("{\"doc_id\":\"a\",\"sections\":[]}\nnot json\n{\"doc_id\":\"b\",\"sections\":[]}\n");
    std::size_t skipped = 0;
    auto docs = read_corpus_tolerant(in, skipped);
    CHECK(docs.size() == 2);
    CHECK(skipped == 1);
}
