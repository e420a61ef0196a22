#ifndef BIONER_MODEL_HPP
#define BIONER_MODEL_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bioner {

/// Half-open character span [start, end). Offsets count Unicode scalar
/// values of the section text, not bytes.
struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const CharSpan&) const = default;
    auto operator<=>(const CharSpan&) const = default;
};

/// A single entity mention. Multi-span entities are non-contiguous; distinct
/// entities may overlap each other (nesting).
struct Entity {
    std::vector<CharSpan> spans;
    std::string entity_class;
    std::string match_text;
    double confidence = 1.0;
    std::string source;

    bool operator==(const Entity&) const = default;
};

struct ProcessingError {
    std::string step;
    std::string message;

    bool operator==(const ProcessingError&) const = default;
};

struct Section {
    std::string name;
    std::string text;
    std::vector<Entity> entities;
    std::vector<ProcessingError> errors;

    bool operator==(const Section&) const = default;
};

struct Document {
    std::string doc_id;
    std::vector<Section> sections;
    bool failed = false;

    bool operator==(const Document&) const = default;
};

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Validates span ordering/overlap rules for a single entity.
/// Throws ModelError if spans are empty, unsorted, or overlapping.
void validate_entity(const Entity& entity);

/// Appends an entity to the section after bounds checking against the
/// section's scalar length. Overlap with existing entities is allowed.
void add_entity(Section& section, Entity entity);

/// Surface text of the entity; non-contiguous spans joined with one space.
std::string entity_text(const Section& section, const Entity& entity);

/// Scalar length of the section text.
std::size_t section_length(const Section& section);

// JSON-lines corpus I/O. One document per line:
// {"doc_id": str, "sections": [{"name", "text", "entities": [...]}]}
Document document_from_json_line(const std::string& line);
std::string document_to_json_line(const Document& doc);

std::vector<Document> read_corpus(std::istream& in);
/// Tolerant variant: unreadable lines are skipped and counted.
std::vector<Document> read_corpus_tolerant(std::istream& in, std::size_t& skipped);
std::vector<Document> read_corpus_file(const std::string& path);
void write_corpus(std::ostream& out, const std::vector<Document>& docs);
void write_corpus_file(const std::string& path, const std::vector<Document>& docs);

}  // namespace bioner

#endif
