// Command-line driver for the bioner toolkit: dictionary NER, tag
// encoding/decoding, entity-level evaluation, weak-label dataset
// construction, classifier-head training, and pipeline benchmarking.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bioner/eval.hpp"
#include "bioner/model.hpp"
#include "bioner/nerhead.hpp"
#include "bioner/ontology.hpp"
#include "bioner/pipeline.hpp"
#include "bioner/tagio.hpp"
#include "bioner/utf8.hpp"
#include "bioner/weaklabel.hpp"

namespace {

using namespace bioner;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonOpts {
    std::vector<std::string> classes = {"gene",    "disease",   "chemical",
                                        "species", "cell_line", "cell_type"};
    std::string schema = "bio";
    double threshold = 0.5;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--classes", opts.classes, "Entity class names, in label order")
        ->delimiter(',');
    cmd->add_option("--schema", opts.schema, "Tag schema: bio or io (IO cannot delimit consecutive same-class entities; not recommended)")
        ->check(CLI::IsMember({"bio", "io"}));
    cmd->add_option("--threshold", opts.threshold, "Decoding threshold")
        ->check(CLI::Range(0.0, 1.0));
}

LabelSpace label_space(const CommonOpts& opts) {
    if (opts.schema == "io") {
        std::cerr << "warning: IO tagging merges consecutive same-class entities; "
                     "BIO is recommended\n";
    }
    return LabelSpace(opts.classes, opts.schema == "bio" ? TagSchema::BIO : TagSchema::IO);
}

std::vector<Token> tokens_from_texts(const std::vector<std::string>& texts) {
    // Reconstructs spans for tokens stored as bare strings by joining with
    // single spaces.
    std::vector<Token> tokens;
    std::size_t pos = 0;
    for (const std::string& text : texts) {
        const std::size_t len = utf8::length(text);
        tokens.push_back({text, {pos, pos + len}});
        pos += len + 1;
    }
    return tokens;
}

class DictionaryStep : public Step {
  public:
    explicit DictionaryStep(std::shared_ptr<const SynonymIndex> index) : index_(std::move(index)) {}
    std::string name() const override { return "dictionary"; }
    void apply(Document& doc) override {
        for (Section& sec : doc.sections) {
            for (Entity& e : dictionary_tag(sec.text, *index_)) {
                add_entity(sec, std::move(e));
            }
        }
    }

  private:
    std::shared_ptr<const SynonymIndex> index_;
};

SynonymIndex load_ontology(const std::string& path, bool tsv, bool case_fold) {
    return tsv ? ingest_tsv_file(path, case_fold) : ingest_file(path, case_fold);
}

int cmd_ingest_ontology(const std::string& input, bool tsv, bool case_fold) {
    const SynonymIndex index = load_ontology(input, tsv, case_fold);
    std::cout << json{{"synonym_keys", index.synonym_count()},
                      {"skipped_records", index.skipped_records()}}
                     .dump()
              << '\n';
    if (index.synonym_count() == 0) std::cerr << "warning: ontology source is empty\n";
    return kExitOk;
}

int cmd_tag(const std::string& input, const std::string& ontology, bool tsv,
            const std::string& output, std::size_t batch_size, std::size_t workers) {
    auto index = std::make_shared<SynonymIndex>(load_ontology(ontology, tsv, true));
    Pipeline pipeline({{StepSharing::Shareable, [index] {
                            return std::make_shared<DictionaryStep>(index);
                        }}});
    RunOptions options;
    options.batch_size = batch_size;
    options.workers = workers;
    auto result = pipeline.run(read_corpus_file(input), options);
    write_corpus_file(output, result.documents);
    std::cerr << result.report.to_table();
    return kExitOk;
}

int cmd_encode(const std::string& input, const CommonOpts& opts, const std::string& mode,
               const std::string& output) {
    const LabelSpace labels = label_space(opts);
    const LabelMode label_mode = mode == "soft" ? LabelMode::Soft : LabelMode::Hard;
    std::vector<ProbRecord> records;
    for (const Document& doc : read_corpus_file(input)) {
        for (const Section& sec : doc.sections) {
            ProbRecord rec;
            const auto tokens = tokenize(sec.text);
            for (const Token& t : tokens) rec.tokens.push_back(t.text);
            rec.matrix = targets_to_matrix(encode(sec.entities, tokens, labels, label_mode), labels);
            records.push_back(std::move(rec));
        }
    }
    write_probs_file(output, records);
    return kExitOk;
}

int cmd_decode(const std::string& input, const CommonOpts& opts, const std::string& output) {
    const LabelSpace labels = label_space(opts);
    std::vector<Document> docs;
    std::size_t i = 0;
    for (const ProbRecord& rec : read_probs_file(input, labels)) {
        const auto tokens = tokens_from_texts(rec.tokens);
        Document doc;
        doc.doc_id = "s" + std::to_string(i++);
        Section sec;
        sec.name = "sentence";
        std::string text;
        for (std::size_t t = 0; t < rec.tokens.size(); ++t) {
            if (t > 0) text += ' ';
            text += rec.tokens[t];
        }
        sec.text = text;
        for (Entity& e : decode(rec.matrix, tokens, labels, opts.threshold)) {
            e.match_text = entity_text(sec, e);
            sec.entities.push_back(std::move(e));
        }
        doc.sections.push_back(std::move(sec));
        docs.push_back(std::move(doc));
    }
    write_corpus_file(output, docs);
    return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, const CommonOpts& opts,
             bool as_table) {
    const LabelSpace labels = label_space(opts);
    const auto gold = parse_conll_file(gold_path);
    const auto preds = read_probs_file(pred_path, labels);
    const EvalReport report = evaluate_corpus(preds, gold, labels, opts.threshold);
    std::cout << (as_table ? report.to_table() : report.to_json() + "\n");
    return kExitOk;
}

int cmd_weak_build(const std::string& input, const std::string& blocklist_path, double fraction,
                   const std::string& mode, std::uint64_t seed, const CommonOpts& opts,
                   const std::string& output) {
    const LabelSpace labels = label_space(opts);
    std::set<std::string> blocklist;
    if (!blocklist_path.empty()) blocklist = read_blocklist_file(blocklist_path);
    std::ifstream in(input);
    if (!in) throw ModelError("cannot open corpus file: " + input);
    std::size_t skipped = 0;
    const auto corpus = read_corpus_tolerant(in, skipped);
    if (skipped > 0) std::cerr << "skipped " << skipped << " unreadable corpus lines\n";
    const auto dataset = build(corpus, blocklist, fraction,
                               mode == "soft" ? LabelMode::Soft : LabelMode::Hard, seed, labels);
    write_weak_dataset_file(output, dataset);
    std::cerr << "records=" << dataset.records.size() << " provenance=" << dataset.provenance
              << '\n';
    return kExitOk;
}

int cmd_weak_stats(const std::string& input) {
    std::cout << corpus_stats(read_weak_dataset_file(input)).to_json() << '\n';
    return kExitOk;
}

int cmd_weak_adjacency(const std::string& input) {
    std::cout << adjacency_stats(read_corpus_file(input)).to_json() << '\n';
    return kExitOk;
}

int cmd_train_head(const std::string& input, const CommonOpts& opts, std::size_t dim,
                   const TrainConfig& config, const std::string& output) {
    const LabelSpace labels = label_space(opts);
    const WeakDataset dataset = read_weak_dataset_file(input);
    const std::uint64_t seed = config.seed;
    auto featurizer = [dim, seed](const std::string& tok) {
        return hash_featurize(tok, dim, seed);
    };
    const TrainResult result = train(dataset.records, featurizer, labels.size(), config);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < labels.size(); ++j) names.push_back(labels.label_name(j));
    save_head_params(output, result.params, names);
    std::cerr << "final_loss=" << result.loss_trace.back() << " epochs=" << config.epochs << '\n';
    return kExitOk;
}

int cmd_predict_head(const std::string& input, const std::string& params_path, std::uint64_t seed,
                     const std::string& output) {
    std::vector<std::string> names;
    const DenseHeadParams params = load_head_params(params_path, names);
    const std::size_t dim = params.dim;
    std::vector<ProbRecord> records;
    for (const Document& doc : read_corpus_file(input)) {
        for (const Section& sec : doc.sections) {
            ProbRecord rec;
            EmbeddingBatch batch;
            for (const Token& t : tokenize(sec.text)) {
                rec.tokens.push_back(t.text);
                batch.push_back(hash_featurize(t.text, dim, seed));
            }
            rec.matrix = forward(batch, params);
            records.push_back(std::move(rec));
        }
    }
    write_probs_file(output, records);
    return kExitOk;
}

int cmd_bench(const std::string& input, const std::string& ontology, bool tsv,
              std::vector<std::size_t> batch_sizes, bool as_table) {
    auto index = std::make_shared<SynonymIndex>(load_ontology(ontology, tsv, true));
    Pipeline pipeline({{StepSharing::Shareable, [index] {
                            return std::make_shared<DictionaryStep>(index);
                        }}});
    const auto corpus = read_corpus_file(input);
    if (batch_sizes.empty()) batch_sizes = {1};
    json reports = json::array();
    for (std::size_t batch_size : batch_sizes) {
        const RunResult result = bench(pipeline, corpus, batch_size);
        if (as_table) {
            std::cout << "batch_size=" << batch_size << '\n' << result.report.to_table();
        } else {
            reports.push_back({{"batch_size", batch_size},
                               {"report", json::parse(result.report.to_json())}});
        }
    }
    if (!as_table) std::cout << reports.dump(2) << '\n';
    return kExitOk;
}

int cmd_conll_convert(const std::string& input, const CommonOpts& opts, const std::string& output) {
    const LabelSpace labels = label_space(opts);
    std::vector<ProbRecord> records;
    for (const ConllSentence& sentence : parse_conll_file(input)) {
        ProbRecord rec;
        rec.tokens = sentence.tokens;
        rec.matrix = targets_to_matrix(conll_to_targets(sentence.tags, labels), labels);
        records.push_back(std::move(rec));
    }
    write_probs_file(output, records);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biomedical NER toolkit: dictionary tagging, BIO/IO codecs, "
                 "entity-level evaluation, weak labeling, and a trainable "
                 "sigmoid tagging head"};
    app.require_subcommand(1);

    // ingest-ontology
    auto* ingest_cmd = app.add_subcommand("ingest-ontology",
                                          "Validate a datasource and report vocabulary stats. "
                                          "Input: JSON lines {term_id, default_label, synonyms, class} "
                                          "or TSV (id, label, pipe-separated synonyms, class)");
    std::string ingest_input;
    bool ingest_tsv_flag = false;
    bool ingest_no_fold = false;
    ingest_cmd->add_option("--input", ingest_input, "Term records")->required();
    ingest_cmd->add_flag("--tsv", ingest_tsv_flag, "Input is TSV");
    ingest_cmd->add_flag("--no-case-fold", ingest_no_fold, "Disable case folding");

    // tag
    auto* tag_cmd = app.add_subcommand("tag", "Dictionary NER over a JSON-lines corpus");
    std::string tag_input, tag_ontology, tag_output;
    bool tag_tsv = false;
    std::size_t tag_batch = 32, tag_workers = 1;
    tag_cmd->add_option("--input", tag_input, "Corpus JSON lines")->required();
    tag_cmd->add_option("--ontology", tag_ontology, "Term records")->required();
    tag_cmd->add_flag("--tsv", tag_tsv, "Ontology is TSV");
    tag_cmd->add_option("--output", tag_output, "Tagged corpus output")->required();
    tag_cmd->add_option("--batch-size", tag_batch)->check(CLI::PositiveNumber);
    tag_cmd->add_option("--workers", tag_workers)->check(CLI::PositiveNumber);

    // encode
    auto* encode_cmd =
        app.add_subcommand("encode", "Encode corpus entities to per-token target vectors "
                                     "(probs-file format)");
    CommonOpts encode_opts;
    std::string encode_input, encode_output, encode_mode = "hard";
    encode_cmd->add_option("--input", encode_input)->required();
    encode_cmd->add_option("--output", encode_output)->required();
    encode_cmd->add_option("--mode", encode_mode)->check(CLI::IsMember({"hard", "soft"}));
    add_common(encode_cmd, encode_opts);

    // decode
    auto* decode_cmd = app.add_subcommand(
        "decode", "Decode a probability-matrix file into an entity corpus");
    CommonOpts decode_opts;
    std::string decode_input, decode_output;
    decode_cmd->add_option("--input", decode_input)->required();
    decode_cmd->add_option("--output", decode_output)->required();
    add_common(decode_cmd, decode_opts);

    // eval
    auto* eval_cmd = app.add_subcommand(
        "eval", "Entity-level P/R/F1 of a probs file against gold CoNLL tags");
    CommonOpts eval_opts;
    std::string eval_gold, eval_pred;
    bool eval_table = false;
    eval_cmd->add_option("--gold", eval_gold, "Gold CoNLL file (token TAB tag)")->required();
    eval_cmd->add_option("--pred", eval_pred, "Prediction probs JSON lines")->required();
    eval_cmd->add_flag("--table", eval_table, "Print an aligned table instead of JSON");
    add_common(eval_cmd, eval_opts);

    // weak
    auto* weak_cmd = app.add_subcommand("weak", "Weak-label dataset operations");
    weak_cmd->require_subcommand(1);
    auto* weak_build_cmd = weak_cmd->add_subcommand("build", "Build a weakly labeled dataset");
    CommonOpts weak_opts;
    std::string weak_input, weak_blocklist, weak_mode = "hard", weak_output;
    double weak_fraction = 1.0;
    std::uint64_t weak_seed = 0;
    weak_build_cmd->add_option("--input", weak_input, "Prediction corpus JSON lines")->required();
    weak_build_cmd->add_option("--blocklist", weak_blocklist, "One doc_id per line");
    weak_build_cmd->add_option("--fraction", weak_fraction, "Sampling fraction in (0,1]")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
    weak_build_cmd->add_option("--mode", weak_mode)->check(CLI::IsMember({"hard", "soft"}));
    weak_build_cmd->add_option("--seed", weak_seed);
    weak_build_cmd->add_option("--output", weak_output)->required();
    add_common(weak_build_cmd, weak_opts);

    auto* weak_stats_cmd = weak_cmd->add_subcommand("stats", "Corpus statistics of a dataset");
    std::string weak_stats_input;
    weak_stats_cmd->add_option("--input", weak_stats_input)->required();

    auto* weak_adj_cmd =
        weak_cmd->add_subcommand("adjacency", "Adjacent same-class entity statistics");
    std::string weak_adj_input;
    weak_adj_cmd->add_option("--input", weak_adj_input, "Annotated corpus JSON lines")->required();

    // train-head
    auto* train_cmd = app.add_subcommand("train-head", "Train the sigmoid tagging head");
    CommonOpts train_opts;
    std::string train_input, train_output;
    std::size_t train_dim = 128;
    TrainConfig train_config;
    train_cmd->add_option("--input", train_input, "Weak dataset JSON lines")->required();
    train_cmd->add_option("--output", train_output, "Parameter file")->required();
    train_cmd->add_option("--dim", train_dim)->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", train_config.learning_rate)->check(CLI::PositiveNumber);
    train_cmd->add_option("--epochs", train_config.epochs);
    train_cmd->add_option("--seed", train_config.seed);
    add_common(train_cmd, train_opts);

    // predict-head
    auto* predict_cmd =
        app.add_subcommand("predict-head", "Run the head over a corpus, write a probs file");
    std::string predict_input, predict_params, predict_output;
    std::uint64_t predict_seed = 0;
    predict_cmd->add_option("--input", predict_input, "Corpus JSON lines")->required();
    predict_cmd->add_option("--params", predict_params)->required();
    predict_cmd->add_option("--seed", predict_seed, "Featurizer seed (must match training)");
    predict_cmd->add_option("--output", predict_output)->required();

    // bench
    auto* bench_cmd =
        app.add_subcommand("bench", "Throughput benchmark of the dictionary pipeline");
    std::string bench_input, bench_ontology;
    bool bench_tsv = false, bench_table = false;
    std::vector<std::size_t> bench_batches = {1, 32};
    bench_cmd->add_option("--input", bench_input)->required();
    bench_cmd->add_option("--ontology", bench_ontology)->required();
    bench_cmd->add_flag("--tsv", bench_tsv);
    bench_cmd->add_option("--batch-sizes", bench_batches)->delimiter(',');
    bench_cmd->add_flag("--table", bench_table);

    // conll convert
    auto* conll_cmd = app.add_subcommand("conll", "CoNLL file operations");
    conll_cmd->require_subcommand(1);
    auto* conll_convert_cmd =
        conll_cmd->add_subcommand("convert", "CoNLL tags to one-hot probs file");
    CommonOpts conll_opts;
    std::string conll_input, conll_output;
    conll_convert_cmd->add_option("--input", conll_input)->required();
    conll_convert_cmd->add_option("--output", conll_output)->required();
    add_common(conll_convert_cmd, conll_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest_cmd) return cmd_ingest_ontology(ingest_input, ingest_tsv_flag, !ingest_no_fold);
        if (*tag_cmd) return cmd_tag(tag_input, tag_ontology, tag_tsv, tag_output, tag_batch,
                                     tag_workers);
        if (*encode_cmd) return cmd_encode(encode_input, encode_opts, encode_mode, encode_output);
        if (*decode_cmd) return cmd_decode(decode_input, decode_opts, decode_output);
        if (*eval_cmd) return cmd_eval(eval_gold, eval_pred, eval_opts, eval_table);
        if (*weak_build_cmd) {
            return cmd_weak_build(weak_input, weak_blocklist, weak_fraction, weak_mode, weak_seed,
                                  weak_opts, weak_output);
        }
        if (*weak_stats_cmd) return cmd_weak_stats(weak_stats_input);
        if (*weak_adj_cmd) return cmd_weak_adjacency(weak_adj_input);
        if (*train_cmd) {
            return cmd_train_head(train_input, train_opts, train_dim, train_config, train_output);
        }
        if (*predict_cmd) {
            return cmd_predict_head(predict_input, predict_params, predict_seed, predict_output);
        }
        if (*bench_cmd) return cmd_bench(bench_input, bench_ontology, bench_tsv, bench_batches,
                                         bench_table);
        if (*conll_convert_cmd) return cmd_conll_convert(conll_input, conll_opts, conll_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    std::cerr << app.help();
    return kExitUsage;
}
