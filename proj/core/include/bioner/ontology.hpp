#ifndef BIONER_ONTOLOGY_HPP
#define BIONER_ONTOLOGY_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bioner/model.hpp"
#include "bioner/tagio.hpp"

namespace bioner {

class OntologyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OntologyTerm {
    std::string term_id;
    std::string default_label;
    std::vector<std::string> synonyms;
    std::string entity_class;
};

struct IndexEntry {
    std::string term_id;
    std::string entity_class;

    bool operator==(const IndexEntry&) const = default;
    auto operator<=>(const IndexEntry&) const = default;
};

/// Token-sequence trie over normalized synonyms. Immutable after
/// ingestion; matching walks the trie once per start token, so tagging a
/// text is linear in its length times the longest synonym.
class SynonymIndex {
  public:
    explicit SynonymIndex(bool case_fold = true);

    void add_term(const OntologyTerm& term);

    std::size_t synonym_count() const { return synonym_keys_; }
    std::size_t skipped_records() const { return skipped_; }
    bool case_fold() const { return case_fold_; }

    /// Entries for an exact normalized token sequence, empty when absent.
    std::vector<IndexEntry> lookup(const std::vector<std::string>& tokens) const;

    /// Longest match per entity class starting at token position `start`.
    struct ClassMatch {
        std::string entity_class;
        std::size_t token_count = 0;
        std::vector<std::string> term_ids;
    };
    std::vector<ClassMatch> matches_at(const std::vector<Token>& tokens, std::size_t start) const;

    std::string normalize(const std::string& token) const;

  private:
    friend SynonymIndex ingest(std::istream&, bool);
    friend SynonymIndex ingest_tsv(std::istream&, bool);
    struct Node {
        std::map<std::string, std::size_t> children;
        std::vector<IndexEntry> entries;
    };
    std::vector<Node> nodes_;
    bool case_fold_;
    std::size_t synonym_keys_ = 0;
    std::size_t skipped_ = 0;
};

/// Ingests JSON-lines term records:
/// {"term_id", "default_label", "synonyms": [...], "class"}.
/// Malformed records are skipped and counted.
SynonymIndex ingest(std::istream& in, bool case_fold = true);
SynonymIndex ingest_file(const std::string& path, bool case_fold = true);

/// TSV adapter: id<TAB>label<TAB>pipe-separated synonyms<TAB>class.
SynonymIndex ingest_tsv(std::istream& in, bool case_fold = true);
SynonymIndex ingest_tsv_file(const std::string& path, bool case_fold = true);

/// Dictionary NER: leftmost-longest token-sequence matching per class.
/// Matches of different classes may overlap. Entities carry confidence 1.0
/// and source "dictionary".
std::vector<Entity> dictionary_tag(const std::string& text, const SynonymIndex& index);

}  // namespace bioner

#endif
