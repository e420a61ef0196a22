#ifndef BIONER_WEAKLABEL_HPP
#define BIONER_WEAKLABEL_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "bioner/model.hpp"
#include "bioner/tagio.hpp"

namespace bioner {

struct WeakRecord {
    std::string doc_id;
    std::vector<Token> tokens;
    TargetVectorSequence targets;
};

struct WeakDataset {
    std::vector<WeakRecord> records;
    LabelMode mode = LabelMode::Hard;
    std::string provenance;
    std::size_t skipped_lines = 0;
};

struct CorpusStats {
    std::size_t abstracts = 0;
    std::size_t sentences = 0;
    std::size_t words = 0;
    double words_per_sentence = 0.0;

    std::string to_json() const;
};

struct AdjacencyStats {
    std::size_t total_entities = 0;
    std::size_t entities_with_adjacent_same_class = 0;
    std::size_t entities_not_io_delimitable = 0;

    std::string to_json() const;
};

class WeakLabelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Stable 64-bit hash of (seed, doc_id) used for order-independent
/// subsampling. FNV-1a over the seed bytes followed by the id bytes.
std::uint64_t sample_hash(std::uint64_t seed, const std::string& doc_id);

/// True when the document passes the fractional sample at the given seed:
/// sample_hash mod 10^6 < fraction * 10^6.
bool sampled(std::uint64_t seed, const std::string& doc_id, double fraction);

/// Builds a weakly supervised dataset from a prediction corpus. Documents
/// on the blocklist are excluded; the rest pass a deterministic hash
/// sample. One record per section.
WeakDataset build(const std::vector<Document>& corpus, const std::set<std::string>& blocklist,
                  double fraction, LabelMode mode, std::uint64_t seed, const LabelSpace& labels);

/// Thresholds a soft target vector to hard 0/1 and recomputes the O
/// element (1 iff no B/I element is 1).
std::vector<double> harden(const std::vector<double>& soft, double threshold = 0.5);

CorpusStats corpus_stats(const WeakDataset& dataset);

/// Adjacency statistics over an annotated corpus. Two same-class entities
/// are adjacent when only whitespace/punctuation separates them; the pair
/// is not IO-delimitable when no token lies between them.
AdjacencyStats adjacency_stats(const std::vector<Document>& corpus);

std::set<std::string> read_blocklist_file(const std::string& path);

// Dataset JSON lines: {"doc_id", "tokens", "targets": [[...]...], "mode"}.
void write_weak_dataset(std::ostream& out, const WeakDataset& dataset);
void write_weak_dataset_file(const std::string& path, const WeakDataset& dataset);
WeakDataset read_weak_dataset(std::istream& in);
WeakDataset read_weak_dataset_file(const std::string& path);

}  // namespace bioner

#endif
