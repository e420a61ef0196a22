#ifndef BIONER_TAGIO_HPP
#define BIONER_TAGIO_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bioner/model.hpp"

namespace bioner {

struct Token {
    std::string text;
    CharSpan span;  // scalar offsets into the section text

    bool operator==(const Token&) const = default;
};

enum class TagSchema { BIO, IO };

class TagError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Ordered tag vocabulary. Index 0 is "O". Under BIO, class i occupies
/// indices 2i+1 (B) and 2i+2 (I); under IO, index i+1 (I).
class LabelSpace {
  public:
    LabelSpace(std::vector<std::string> classes, TagSchema schema);

    std::size_t size() const;              // 2k+1 or k+1
    std::size_t num_classes() const { return classes_.size(); }
    TagSchema schema() const { return schema_; }
    const std::vector<std::string>& classes() const { return classes_; }

    std::size_t begin_index(std::size_t class_idx) const;   // BIO only: B-c
    std::size_t inside_index(std::size_t class_idx) const;  // I-c
    std::string label_name(std::size_t label_idx) const;    // "O", "B-gene", ...
    std::size_t label_index(const std::string& label_name) const;  // throws TagError
    std::size_t class_index(const std::string& class_name) const;  // throws TagError

  private:
    std::vector<std::string> classes_;
    TagSchema schema_;
};

/// Per-token label probabilities, label-major: rows() == label count,
/// cols() == token count. Columns need not sum to 1.
class ProbMatrix {
  public:
    ProbMatrix() = default;
    ProbMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
    double at(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

    bool operator==(const ProbMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// One vector per token, same length as the LabelSpace. Labels are
/// independent: several classes may be active on the same token.
using TargetVectorSequence = std::vector<std::vector<double>>;

enum class LabelMode { Hard, Soft };

/// Splits text into tokens: maximal alphanumeric runs stay whole, every
/// other non-whitespace character becomes a one-character token.
std::vector<Token> tokenize(const std::string& text);

/// Encodes entities as per-token multi-label targets. A token is activated
/// by an entity when any entity span overlaps the token span.
TargetVectorSequence encode(const std::vector<Entity>& entities, const std::vector<Token>& tokens,
                            const LabelSpace& labels, LabelMode mode);

/// Per-class threshold-then-argmax tag decision for one token column.
/// Returns the label index assigned for class class_idx: 0 for O,
/// otherwise the B/I label index.
std::size_t decide_tag(const ProbMatrix& matrix, std::size_t class_idx, std::size_t col,
                       const LabelSpace& labels, double threshold);

/// Decodes a probability matrix into contiguous entities using
/// conlleval-style chunking per class.
std::vector<Entity> decode(const ProbMatrix& matrix, const std::vector<Token>& tokens,
                           const LabelSpace& labels, double threshold);

struct ConllSentence {
    std::vector<std::string> tokens;
    std::vector<std::string> tags;

    bool operator==(const ConllSentence&) const = default;
};

std::vector<ConllSentence> parse_conll(std::istream& in);
std::vector<ConllSentence> parse_conll_file(const std::string& path);
void write_conll(std::ostream& out, const std::vector<ConllSentence>& sentences);
void write_conll_file(const std::string& path, const std::vector<ConllSentence>& sentences);

/// One-hot multi-label targets from a single-label tag sequence.
TargetVectorSequence conll_to_targets(const std::vector<std::string>& tags,
                                      const LabelSpace& labels);

/// Targets viewed as a label-major matrix (adapter for decode/eval).
ProbMatrix targets_to_matrix(const TargetVectorSequence& targets, const LabelSpace& labels);

// Probability-matrix file: one JSON object per sentence,
// {"tokens": [...], "probs": [[label-dim vector per token], ...]}.
struct ProbRecord {
    std::vector<std::string> tokens;
    ProbMatrix matrix;
};

std::vector<ProbRecord> read_probs(std::istream& in, const LabelSpace& labels);
std::vector<ProbRecord> read_probs_file(const std::string& path, const LabelSpace& labels);
void write_probs(std::ostream& out, const std::vector<ProbRecord>& records);
void write_probs_file(const std::string& path, const std::vector<ProbRecord>& records);

}  // namespace bioner

#endif
