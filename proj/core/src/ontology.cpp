#include "bioner/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bioner {

using nlohmann::json;

SynonymIndex::SynonymIndex(bool case_fold) : case_fold_(case_fold) {
    nodes_.emplace_back();  // root
}

std::string SynonymIndex::normalize(const std::string& token) const {
    if (!case_fold_) return token;
    std::string out = token;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void SynonymIndex::add_term(const OntologyTerm& term) {
    std::vector<std::string> synonyms = term.synonyms;
    if (!term.default_label.empty()) synonyms.push_back(term.default_label);
    for (const std::string& synonym : synonyms) {
        std::vector<Token> tokens = tokenize(synonym);
        if (tokens.empty()) continue;
        std::size_t node = 0;
        for (const Token& tok : tokens) {
            const std::string key = normalize(tok.text);
            auto it = nodes_[node].children.find(key);
            if (it == nodes_[node].children.end()) {
                nodes_.emplace_back();
                it = nodes_[node].children.emplace(key, nodes_.size() - 1).first;
            }
            node = it->second;
        }
        IndexEntry entry{term.term_id, term.entity_class};
        auto& entries = nodes_[node].entries;
        if (entries.empty()) ++synonym_keys_;
        if (std::find(entries.begin(), entries.end(), entry) == entries.end()) {
            entries.push_back(entry);
        }
    }
}

std::vector<IndexEntry> SynonymIndex::lookup(const std::vector<std::string>& tokens) const {
    std::size_t node = 0;
    for (const std::string& tok : tokens) {
        auto it = nodes_[node].children.find(normalize(tok));
        if (it == nodes_[node].children.end()) return {};
        node = it->second;
    }
    return nodes_[node].entries;
}

std::vector<SynonymIndex::ClassMatch> SynonymIndex::matches_at(const std::vector<Token>& tokens,
                                                               std::size_t start) const {
    std::vector<ClassMatch> best;
    std::size_t node = 0;
    for (std::size_t depth = 0; start + depth < tokens.size(); ++depth) {
        auto it = nodes_[node].children.find(normalize(tokens[start + depth].text));
        if (it == nodes_[node].children.end()) break;
        node = it->second;
        for (const IndexEntry& entry : nodes_[node].entries) {
            auto pos = std::find_if(best.begin(), best.end(), [&](const ClassMatch& m) {
                return m.entity_class == entry.entity_class;
            });
            if (pos == best.end()) {
                best.push_back({entry.entity_class, depth + 1, {entry.term_id}});
            } else if (pos->token_count < depth + 1) {
                pos->token_count = depth + 1;
                pos->term_ids = {entry.term_id};
            } else if (pos->token_count == depth + 1) {
                pos->term_ids.push_back(entry.term_id);
            }
        }
    }
    return best;
}

SynonymIndex ingest(std::istream& in, bool case_fold) {
    SynonymIndex index(case_fold);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            OntologyTerm term;
            term.term_id = j.at("term_id").get<std::string>();
            term.default_label = j.at("default_label").get<std::string>();
            if (j.contains("synonyms")) {
                term.synonyms = j["synonyms"].get<std::vector<std::string>>();
            }
            term.entity_class = j.at("class").get<std::string>();
            index.add_term(term);
        } catch (const json::exception&) {
            ++index.skipped_;
        }
    }
    return index;
}

SynonymIndex ingest_file(const std::string& path, bool case_fold) {
    std::ifstream in(path);
    if (!in) throw OntologyError("cannot open ontology file: " + path);
    return ingest(in, case_fold);
}

SynonymIndex ingest_tsv(std::istream& in, bool case_fold) {
    SynonymIndex index(case_fold);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t tab = line.find('\t', pos);
            fields.push_back(line.substr(pos, tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (fields.size() != 4 || fields[0].empty() || fields[3].empty()) {
            ++index.skipped_;
            continue;
        }
        OntologyTerm term;
        term.term_id = fields[0];
        term.default_label = fields[1];
        std::stringstream syns(fields[2]);
        std::string syn;
        while (std::getline(syns, syn, '|')) {
            if (!syn.empty()) term.synonyms.push_back(syn);
        }
        term.entity_class = fields[3];
        index.add_term(term);
    }
    return index;
}

SynonymIndex ingest_tsv_file(const std::string& path, bool case_fold) {
    std::ifstream in(path);
    if (!in) throw OntologyError("cannot open ontology file: " + path);
    return ingest_tsv(in, case_fold);
}

std::vector<Entity> dictionary_tag(const std::string& text, const SynonymIndex& index) {
    const std::vector<Token> tokens = tokenize(text);
    std::map<std::string, std::size_t> next_free;  // per class, first usable token index
    std::vector<Entity> entities;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        for (const auto& match : index.matches_at(tokens, t)) {
            auto [it, inserted] = next_free.emplace(match.entity_class, 0);
            if (t < it->second) continue;  // inside an earlier match of this class
            Entity e;
            e.spans = {{tokens[t].span.start, tokens[t + match.token_count - 1].span.end}};
            e.entity_class = match.entity_class;
            e.confidence = 1.0;
            e.source = "dictionary";
            std::string match_text;
            for (std::size_t k = 0; k < match.token_count; ++k) {
                if (k > 0) match_text += ' ';
                match_text += tokens[t + k].text;
            }
            e.match_text = match_text;
            entities.push_back(std::move(e));
            it->second = t + match.token_count;
        }
    }
    std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) {
        if (a.spans[0] != b.spans[0]) return a.spans[0] < b.spans[0];
        return a.entity_class < b.entity_class;
    });
    return entities;
}

}  // namespace bioner
