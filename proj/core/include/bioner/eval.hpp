#ifndef BIONER_EVAL_HPP
#define BIONER_EVAL_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bioner/tagio.hpp"

namespace bioner {

/// (class index, start token, end token inclusive) chunks over one
/// tokenization.
using ChunkTriple = std::tuple<std::size_t, std::size_t, std::size_t>;
using ChunkSet = std::set<ChunkTriple>;

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;  // gold chunk count
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct EvalReport {
    std::map<std::string, ClassMetrics> per_class;
    double macro_f1 = 0.0;

    std::string to_json() const;
    std::string to_table() const;
};

class EvalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Projects a probability matrix onto one class: a single-class tag sequence
/// built from the B-i, I-i, and O rows by threshold-then-argmax.
std::vector<std::string> per_class_split(const ProbMatrix& matrix, std::size_t class_idx,
                                         const LabelSpace& labels, double threshold);

/// Chunks of one class from a full (possibly multi-class) tag sequence.
ChunkSet chunks_of_class(const std::vector<std::string>& tags, std::size_t class_idx,
                         const LabelSpace& labels);

/// Chunks of every class, from tag names.
ChunkSet chunks_from_tags(const std::vector<std::string>& tags, const LabelSpace& labels);

/// Exact-match entity-level precision/recall/F1 between two chunk sets.
EvalReport entity_prf1(const ChunkSet& gold, const ChunkSet& pred, const LabelSpace& labels);

/// Corpus-level evaluation: per class, aggregate TP/FP/FN over all
/// sentences, then compute P/R/F1 and the macro average.
EvalReport evaluate_corpus(const std::vector<ProbRecord>& predictions,
                           const std::vector<ConllSentence>& gold, const LabelSpace& labels,
                           double threshold);

}  // namespace bioner

#endif
