#include "bioner/eval.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace bioner {

using nlohmann::json;

namespace {

ClassMetrics finalize(std::size_t tp, std::size_t fp, std::size_t fn) {
    ClassMetrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.support = tp + fn;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
    return m;
}

EvalReport report_from_counts(const std::vector<std::array<std::size_t, 3>>& counts,
                              const LabelSpace& labels) {
    EvalReport report;
    double f1_sum = 0.0;
    for (std::size_t ci = 0; ci < labels.num_classes(); ++ci) {
        ClassMetrics m = finalize(counts[ci][0], counts[ci][1], counts[ci][2]);
        f1_sum += m.f1;
        report.per_class[labels.classes()[ci]] = m;
    }
    report.macro_f1 = f1_sum / static_cast<double>(labels.num_classes());
    return report;
}

}  // namespace

std::string EvalReport::to_json() const {
    json per;
    for (const auto& [name, m] : per_class) {
        per[name] = {{"precision", m.precision}, {"recall", m.recall},   {"f1", m.f1},
                     {"support", m.support},     {"tp", m.tp},           {"fp", m.fp},
                     {"fn", m.fn}};
    }
    return json{{"per_class", per}, {"macro_f1", macro_f1}}.dump(2);
}

std::string EvalReport::to_table() const {
    std::ostringstream out;
    std::size_t width = 8;
    for (const auto& [name, m] : per_class) width = std::max(width, name.size() + 2);
    out << std::left << std::setw(static_cast<int>(width)) << "class" << std::right
        << std::setw(10) << "P" << std::setw(10) << "R" << std::setw(10) << "F1" << std::setw(10)
        << "support" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const auto& [name, m] : per_class) {
        out << std::left << std::setw(static_cast<int>(width)) << name << std::right
            << std::setw(10) << m.precision << std::setw(10) << m.recall << std::setw(10) << m.f1
            << std::setw(10) << m.support << '\n';
    }
    out << std::left << std::setw(static_cast<int>(width)) << "macro" << std::right << std::setw(30)
        << "" << std::setw(10) << macro_f1;
    out << '\n';
    return out.str();
}

std::vector<std::string> per_class_split(const ProbMatrix& matrix, std::size_t class_idx,
                                         const LabelSpace& labels, double threshold) {
    if (class_idx >= labels.num_classes()) {
        throw EvalError("class index " + std::to_string(class_idx) + " out of range");
    }
    if (matrix.rows() != labels.size()) {
        throw EvalError("matrix row count does not match label space");
    }
    std::vector<std::string> tags(matrix.cols());
    for (std::size_t t = 0; t < matrix.cols(); ++t) {
        tags[t] = labels.label_name(decide_tag(matrix, class_idx, t, labels, threshold));
    }
    return tags;
}

ChunkSet chunks_of_class(const std::vector<std::string>& tags, std::size_t class_idx,
                         const LabelSpace& labels) {
    const std::string b_tag = "B-" + labels.classes()[class_idx];
    const std::string i_tag = "I-" + labels.classes()[class_idx];
    const bool bio = labels.schema() == TagSchema::BIO;
    ChunkSet chunks;
    bool in_chunk = false;
    std::size_t start = 0;
    auto flush = [&](std::size_t end_excl) {
        if (in_chunk) chunks.insert({class_idx, start, end_excl - 1});
        in_chunk = false;
    };
    for (std::size_t t = 0; t < tags.size(); ++t) {
        const bool is_b = bio && tags[t] == b_tag;
        const bool is_i = tags[t] == i_tag;
        if (!is_b && !is_i) {
            flush(t);
            continue;
        }
        if (is_b || !in_chunk) {
            flush(t);
            in_chunk = true;
            start = t;
        }
    }
    flush(tags.size());
    return chunks;
}

ChunkSet chunks_from_tags(const std::vector<std::string>& tags, const LabelSpace& labels) {
    ChunkSet all;
    for (std::size_t ci = 0; ci < labels.num_classes(); ++ci) {
        auto part = chunks_of_class(tags, ci, labels);
        all.insert(part.begin(), part.end());
    }
    return all;
}

EvalReport entity_prf1(const ChunkSet& gold, const ChunkSet& pred, const LabelSpace& labels) {
    std::vector<std::array<std::size_t, 3>> counts(labels.num_classes(), {0, 0, 0});
    for (const ChunkTriple& c : pred) {
        const std::size_t ci = std::get<0>(c);
        if (gold.count(c)) {
            ++counts[ci][0];
        } else {
            ++counts[ci][1];
        }
    }
    for (const ChunkTriple& c : gold) {
        if (!pred.count(c)) ++counts[std::get<0>(c)][2];
    }
    return report_from_counts(counts, labels);
}

EvalReport evaluate_corpus(const std::vector<ProbRecord>& predictions,
                           const std::vector<ConllSentence>& gold, const LabelSpace& labels,
                           double threshold) {
    if (predictions.size() != gold.size()) {
        throw EvalError("sentence count mismatch: " + std::to_string(predictions.size()) +
                        " predictions vs " + std::to_string(gold.size()) + " gold");
    }
    std::vector<std::array<std::size_t, 3>> counts(labels.num_classes(), {0, 0, 0});
    for (std::size_t s = 0; s < predictions.size(); ++s) {
        if (predictions[s].matrix.cols() != gold[s].tags.size()) {
            throw EvalError("token count mismatch at sentence " + std::to_string(s));
        }
        for (std::size_t ci = 0; ci < labels.num_classes(); ++ci) {
            const auto pred_tags = per_class_split(predictions[s].matrix, ci, labels, threshold);
            const auto pred_chunks = chunks_of_class(pred_tags, ci, labels);
            const auto gold_chunks = chunks_of_class(gold[s].tags, ci, labels);
            for (const ChunkTriple& c : pred_chunks) {
                if (gold_chunks.count(c)) {
                    ++counts[ci][0];
                } else {
                    ++counts[ci][1];
                }
            }
            for (const ChunkTriple& c : gold_chunks) {
                if (!pred_chunks.count(c)) ++counts[ci][2];
            }
        }
    }
    return report_from_counts(counts, labels);
}

}  // namespace bioner
