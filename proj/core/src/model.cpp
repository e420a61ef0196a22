#include "bioner/model.hpp"

#include <fstream>
#include <sstream>

#include "bioner/utf8.hpp"
#include "json.hpp"

namespace bioner {

using nlohmann::json;

void validate_entity(const Entity& entity) {
    if (entity.spans.empty()) throw ModelError("entity has no spans");
    for (std::size_t i = 0; i < entity.spans.size(); ++i) {
        const CharSpan& s = entity.spans[i];
        if (s.start >= s.end) {
            throw ModelError("degenerate span [" + std::to_string(s.start) + "," +
                             std::to_string(s.end) + ")");
        }
        if (i > 0 && entity.spans[i - 1].end > s.start) {
            throw ModelError("entity spans unsorted or overlapping");
        }
    }
}

std::size_t section_length(const Section& section) {
    return utf8::length(section.text);
}

void add_entity(Section& section, Entity entity) {
    validate_entity(entity);
    const std::size_t len = section_length(section);
    for (const CharSpan& s : entity.spans) {
        if (s.end > len) {
            throw ModelError("entity span [" + std::to_string(s.start) + "," +
                             std::to_string(s.end) + ") exceeds section '" + section.name +
                             "' length " + std::to_string(len));
        }
    }
    section.entities.push_back(std::move(entity));
}

std::string entity_text(const Section& section, const Entity& entity) {
    validate_entity(entity);
    const auto scalars = utf8::decode(section.text);
    std::string out;
    for (std::size_t i = 0; i < entity.spans.size(); ++i) {
        if (i > 0) out += ' ';
        out += utf8::encode(scalars, entity.spans[i].start, entity.spans[i].end);
    }
    return out;
}

static json entity_to_json(const Entity& e) {
    json spans = json::array();
    for (const CharSpan& s : e.spans) spans.push_back({s.start, s.end});
    json j{{"spans", spans}, {"class", e.entity_class}, {"confidence", e.confidence}};
    if (!e.match_text.empty()) j["match_text"] = e.match_text;
    if (!e.source.empty()) j["source"] = e.source;
    return j;
}

static Entity entity_from_json(const json& j) {
    Entity e;
    for (const auto& s : j.at("spans")) {
        e.spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
    }
    e.entity_class = j.at("class").get<std::string>();
    e.confidence = j.value("confidence", 1.0);
    e.match_text = j.value("match_text", std::string());
    e.source = j.value("source", std::string());
    return e;
}

Document document_from_json_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ModelError(std::string("bad corpus line: ") + e.what());
    }
    try {
        Document doc;
        doc.doc_id = j.at("doc_id").get<std::string>();
        if (doc.doc_id.empty()) throw ModelError("empty doc_id");
        for (const auto& js : j.at("sections")) {
            Section sec;
            sec.name = js.at("name").get<std::string>();
            sec.text = js.at("text").get<std::string>();
            if (js.contains("entities")) {
                for (const auto& je : js["entities"]) sec.entities.push_back(entity_from_json(je));
            }
            doc.sections.push_back(std::move(sec));
        }
        return doc;
    } catch (const json::exception& e) {
        throw ModelError(std::string("bad corpus line: ") + e.what());
    }
}

std::string document_to_json_line(const Document& doc) {
    json sections = json::array();
    for (const Section& sec : doc.sections) {
        json entities = json::array();
        for (const Entity& e : sec.entities) entities.push_back(entity_to_json(e));
        sections.push_back({{"name", sec.name}, {"text", sec.text}, {"entities", entities}});
    }
    json j{{"doc_id", doc.doc_id}, {"sections", sections}};
    if (doc.failed) j["failed"] = true;
    return j.dump();
}

std::vector<Document> read_corpus(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            docs.push_back(document_from_json_line(line));
        } catch (const ModelError& e) {
            throw ModelError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return docs;
}

std::vector<Document> read_corpus_tolerant(std::istream& in, std::size_t& skipped) {
    std::vector<Document> docs;
    std::string line;
    skipped = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            docs.push_back(document_from_json_line(line));
        } catch (const ModelError&) {
            ++skipped;
        }
    }
    return docs;
}

std::vector<Document> read_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open corpus file: " + path);
    return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Document>& docs) {
    for (const Document& d : docs) out << document_to_json_line(d) << '\n';
}

void write_corpus_file(const std::string& path, const std::vector<Document>& docs) {
    std::ofstream out(path);
    if (!out) throw ModelError("cannot open output file: " + path);
    write_corpus(out, docs);
}

}  // namespace bioner
