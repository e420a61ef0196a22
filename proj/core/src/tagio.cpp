#include "bioner/tagio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bioner/utf8.hpp"
#include "json.hpp"

namespace bioner {

using nlohmann::json;

LabelSpace::LabelSpace(std::vector<std::string> classes, TagSchema schema)
    : classes_(std::move(classes)), schema_(schema) {
    if (classes_.empty()) throw TagError("label space needs at least one class");
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        for (std::size_t j = i + 1; j < classes_.size(); ++j) {
            if (classes_[i] == classes_[j]) throw TagError("duplicate class: " + classes_[i]);
        }
    }
}

std::size_t LabelSpace::size() const {
    return schema_ == TagSchema::BIO ? 2 * classes_.size() + 1 : classes_.size() + 1;
}

std::size_t LabelSpace::begin_index(std::size_t class_idx) const {
    if (schema_ != TagSchema::BIO) throw TagError("B tags only exist under BIO");
    return 2 * class_idx + 1;
}

std::size_t LabelSpace::inside_index(std::size_t class_idx) const {
    return schema_ == TagSchema::BIO ? 2 * class_idx + 2 : class_idx + 1;
}

std::string LabelSpace::label_name(std::size_t label_idx) const {
    if (label_idx == 0) return "O";
    if (label_idx >= size()) throw TagError("label index out of range");
    if (schema_ == TagSchema::BIO) {
        std::size_t ci = (label_idx - 1) / 2;
        return ((label_idx - 1) % 2 == 0 ? "B-" : "I-") + classes_[ci];
    }
    return "I-" + classes_[label_idx - 1];
}

std::size_t LabelSpace::label_index(const std::string& name) const {
    if (name == "O") return 0;
    if (name.size() < 3 || name[1] != '-' || (name[0] != 'B' && name[0] != 'I')) {
        throw TagError("unknown tag: " + name);
    }
    const std::size_t ci = class_index(name.substr(2));
    if (name[0] == 'B') return begin_index(ci);
    return inside_index(ci);
}

std::size_t LabelSpace::class_index(const std::string& class_name) const {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i] == class_name) return i;
    }
    throw TagError("unknown entity class: " + class_name);
}

ProbMatrix::ProbMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

namespace {

bool is_space_cp(char32_t cp) {
    if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v') {
        return true;
    }
    if (cp == 0x85 || cp == 0xA0 || cp == 0x1680 || cp == 0x2028 || cp == 0x2029 ||
        cp == 0x202F || cp == 0x205F || cp == 0x3000) {
        return true;
    }
    return cp >= 0x2000 && cp <= 0x200A;
}

bool is_alnum_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') ||
               (cp >= U'a' && cp <= U'z');
    }
    // Common non-ASCII punctuation splits; other non-ASCII scalars
    // (Greek letters etc.) behave as word characters.
    if (cp >= 0x2010 && cp <= 0x2027) return false;  // dashes, quotes, bullets
    if (cp == 0xB7 || cp == 0xAB || cp == 0xBB || cp == 0x2039 || cp == 0x203A) return false;
    return !is_space_cp(cp);
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    const auto scalars = utf8::decode(text);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < scalars.size()) {
        if (is_space_cp(scalars[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (is_alnum_cp(scalars[i])) {
            while (i < scalars.size() && is_alnum_cp(scalars[i])) ++i;
        } else {
            ++i;
        }
        Token tok;
        tok.span = {start, i};
        tok.text = utf8::encode(scalars, start, i);
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

namespace {

bool overlaps(const CharSpan& a, const CharSpan& b) {
    return a.start < b.end && b.start < a.end;
}

bool entity_overlaps_token(const Entity& entity, const Token& token) {
    return std::any_of(entity.spans.begin(), entity.spans.end(),
                       [&](const CharSpan& s) { return overlaps(s, token.span); });
}

}  // namespace

TargetVectorSequence encode(const std::vector<Entity>& entities, const std::vector<Token>& tokens,
                            const LabelSpace& labels, LabelMode mode) {
    TargetVectorSequence targets(tokens.size(), std::vector<double>(labels.size(), 0.0));
    for (const Entity& entity : entities) {
        const std::size_t ci = labels.class_index(entity.entity_class);
        const double value = mode == LabelMode::Hard ? 1.0 : entity.confidence;
        bool first = true;
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            if (!entity_overlaps_token(entity, tokens[t])) continue;
            std::size_t label = labels.inside_index(ci);
            if (first && labels.schema() == TagSchema::BIO) label = labels.begin_index(ci);
            first = false;
            targets[t][label] = std::max(targets[t][label], value);
        }
    }
    for (auto& vec : targets) {
        double max_active = 0.0;
        for (std::size_t j = 1; j < vec.size(); ++j) max_active = std::max(max_active, vec[j]);
        vec[0] = 1.0 - max_active;
    }
    return targets;
}

std::size_t decide_tag(const ProbMatrix& matrix, std::size_t class_idx, std::size_t col,
                       const LabelSpace& labels, double threshold) {
    if (labels.schema() == TagSchema::IO) {
        const std::size_t ii = labels.inside_index(class_idx);
        return matrix.at(ii, col) >= threshold ? ii : 0;
    }
    const std::size_t bi = labels.begin_index(class_idx);
    const std::size_t ii = labels.inside_index(class_idx);
    const double pb = matrix.at(bi, col);
    const double pi = matrix.at(ii, col);
    if (std::max(pb, pi) < threshold) return 0;
    return pb >= pi ? bi : ii;
}

namespace {

struct Chunk {
    std::size_t first_token;
    std::size_t last_token;  // inclusive
    double confidence;
};

// conlleval default rules for one class: a chunk starts at B, or at I when
// the previous token was O (or the sequence start); ends before O, B, or
// the sequence end.
std::vector<Chunk> extract_chunks(const std::vector<std::size_t>& tag_per_token,
                                  const ProbMatrix& matrix, std::size_t class_idx,
                                  const LabelSpace& labels) {
    std::vector<Chunk> chunks;
    const bool bio = labels.schema() == TagSchema::BIO;
    const std::size_t bi = bio ? labels.begin_index(class_idx) : 0;
    bool in_chunk = false;
    std::size_t start = 0;
    double prob_sum = 0.0;
    auto flush = [&](std::size_t end_excl) {
        if (!in_chunk) return;
        chunks.push_back({start, end_excl - 1, prob_sum / static_cast<double>(end_excl - start)});
        in_chunk = false;
    };
    for (std::size_t t = 0; t < tag_per_token.size(); ++t) {
        const std::size_t tag = tag_per_token[t];
        if (tag == 0) {
            flush(t);
            continue;
        }
        const bool starts = !in_chunk || (bio && tag == bi);
        if (starts) {
            flush(t);
            in_chunk = true;
            start = t;
            prob_sum = 0.0;
        }
        prob_sum += matrix.at(tag, t);
    }
    flush(tag_per_token.size());
    return chunks;
}

}  // namespace

std::vector<Entity> decode(const ProbMatrix& matrix, const std::vector<Token>& tokens,
                           const LabelSpace& labels, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw TagError("threshold must be in [0,1], got " + std::to_string(threshold));
    }
    if (matrix.rows() != labels.size() || matrix.cols() != tokens.size()) {
        throw TagError("probability matrix shape " + std::to_string(matrix.rows()) + "x" +
                       std::to_string(matrix.cols()) + " does not match " +
                       std::to_string(labels.size()) + " labels x " +
                       std::to_string(tokens.size()) + " tokens");
    }
    std::vector<Entity> entities;
    for (std::size_t ci = 0; ci < labels.num_classes(); ++ci) {
        std::vector<std::size_t> tags(tokens.size());
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            tags[t] = decide_tag(matrix, ci, t, labels, threshold);
        }
        for (const Chunk& c : extract_chunks(tags, matrix, ci, labels)) {
            Entity e;
            e.spans = {{tokens[c.first_token].span.start, tokens[c.last_token].span.end}};
            e.entity_class = labels.classes()[ci];
            e.confidence = c.confidence;
            e.source = "decode";
            entities.push_back(std::move(e));
        }
    }
    std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) {
        if (a.spans[0] != b.spans[0]) return a.spans[0] < b.spans[0];
        return a.entity_class < b.entity_class;
    });
    return entities;
}

std::vector<ConllSentence> parse_conll(std::istream& in) {
    std::vector<ConllSentence> sentences;
    ConllSentence current;
    std::string line;
    std::size_t lineno = 0;
    auto flush = [&] {
        if (!current.tokens.empty()) {
            sentences.push_back(std::move(current));
            current = {};
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        const std::size_t sep = line.find_first_of("\t ");
        if (sep == std::string::npos) {
            throw TagError("line " + std::to_string(lineno) + ": expected 'token<TAB>tag'");
        }
        const std::size_t tag_start = line.find_first_not_of("\t ", sep);
        if (tag_start == std::string::npos) {
            throw TagError("line " + std::to_string(lineno) + ": missing tag");
        }
        current.tokens.push_back(line.substr(0, sep));
        current.tags.push_back(line.substr(tag_start));
    }
    flush();
    return sentences;
}

std::vector<ConllSentence> parse_conll_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TagError("cannot open CoNLL file: " + path);
    return parse_conll(in);
}

void write_conll(std::ostream& out, const std::vector<ConllSentence>& sentences) {
    for (const ConllSentence& s : sentences) {
        for (std::size_t i = 0; i < s.tokens.size(); ++i) {
            out << s.tokens[i] << '\t' << s.tags[i] << '\n';
        }
        out << '\n';
    }
}

void write_conll_file(const std::string& path, const std::vector<ConllSentence>& sentences) {
    std::ofstream out(path);
    if (!out) throw TagError("cannot open output file: " + path);
    write_conll(out, sentences);
}

TargetVectorSequence conll_to_targets(const std::vector<std::string>& tags,
                                      const LabelSpace& labels) {
    TargetVectorSequence targets(tags.size(), std::vector<double>(labels.size(), 0.0));
    for (std::size_t t = 0; t < tags.size(); ++t) {
        targets[t][labels.label_index(tags[t])] = 1.0;
    }
    return targets;
}

ProbMatrix targets_to_matrix(const TargetVectorSequence& targets, const LabelSpace& labels) {
    ProbMatrix m(labels.size(), targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (targets[t].size() != labels.size()) throw TagError("target vector length mismatch");
        for (std::size_t j = 0; j < labels.size(); ++j) m.at(j, t) = targets[t][j];
    }
    return m;
}

std::vector<ProbRecord> read_probs(std::istream& in, const LabelSpace& labels) {
    std::vector<ProbRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw TagError("probs line " + std::to_string(lineno) + ": " + e.what());
        }
        ProbRecord rec;
        rec.tokens = j.at("tokens").get<std::vector<std::string>>();
        const auto& probs = j.at("probs");
        if (probs.size() != rec.tokens.size()) {
            throw TagError("probs line " + std::to_string(lineno) + ": token/vector count mismatch");
        }
        rec.matrix = ProbMatrix(labels.size(), rec.tokens.size());
        for (std::size_t t = 0; t < probs.size(); ++t) {
            if (probs[t].size() != labels.size()) {
                throw TagError("probs line " + std::to_string(lineno) + ": vector length " +
                               std::to_string(probs[t].size()) + " != label count " +
                               std::to_string(labels.size()));
            }
            for (std::size_t r = 0; r < labels.size(); ++r) {
                rec.matrix.at(r, t) = probs[t][r].get<double>();
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ProbRecord> read_probs_file(const std::string& path, const LabelSpace& labels) {
    std::ifstream in(path);
    if (!in) throw TagError("cannot open probs file: " + path);
    return read_probs(in, labels);
}

void write_probs(std::ostream& out, const std::vector<ProbRecord>& records) {
    for (const ProbRecord& rec : records) {
        json probs = json::array();
        for (std::size_t t = 0; t < rec.matrix.cols(); ++t) {
            json col = json::array();
            for (std::size_t r = 0; r < rec.matrix.rows(); ++r) col.push_back(rec.matrix.at(r, t));
            probs.push_back(std::move(col));
        }
        out << json{{"tokens", rec.tokens}, {"probs", probs}}.dump() << '\n';
    }
}

void write_probs_file(const std::string& path, const std::vector<ProbRecord>& records) {
    std::ofstream out(path);
    if (!out) throw TagError("cannot open output file: " + path);
    write_probs(out, records);
}

}  // namespace bioner
