#include "bioner/nerhead.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include "json.hpp"

namespace bioner {

using nlohmann::json;

DenseHeadParams DenseHeadParams::zeros(std::size_t dim, std::size_t label_count) {
    DenseHeadParams p;
    p.dim = dim;
    p.label_count = label_count;
    p.weights.assign(dim * label_count, 0.0);
    p.bias.assign(label_count, 0.0);
    return p;
}

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

constexpr double kEps = 1e-12;

}  // namespace

ProbMatrix forward(const EmbeddingBatch& embeddings, const DenseHeadParams& params) {
    ProbMatrix out(params.label_count, embeddings.size());
    for (std::size_t t = 0; t < embeddings.size(); ++t) {
        const auto& h = embeddings[t];
        if (h.size() != params.dim) {
            throw HeadError("embedding dim " + std::to_string(h.size()) +
                            " does not match head dim " + std::to_string(params.dim));
        }
        for (std::size_t j = 0; j < params.label_count; ++j) {
            double logit = params.bias[j];
            for (std::size_t r = 0; r < params.dim; ++r) logit += h[r] * params.w(r, j);
            out.at(j, t) = sigmoid(logit);
        }
    }
    return out;
}

double bce_loss(const ProbMatrix& probs, const TargetVectorSequence& targets) {
    if (probs.cols() != targets.size()) throw HeadError("token count mismatch in bce_loss");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (targets[t].size() != probs.rows()) throw HeadError("label count mismatch in bce_loss");
        for (std::size_t j = 0; j < probs.rows(); ++j) {
            double p = std::clamp(probs.at(j, t), kEps, 1.0 - kEps);
            double target = targets[t][j];
            sum -= target * std::log(p) + (1.0 - target) * std::log(1.0 - p);
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

HeadGradients grad(const EmbeddingBatch& embeddings, const DenseHeadParams& params,
                   const TargetVectorSequence& targets) {
    if (embeddings.size() != targets.size()) throw HeadError("token count mismatch in grad");
    HeadGradients g;
    g.weights.assign(params.dim * params.label_count, 0.0);
    g.bias.assign(params.label_count, 0.0);
    const ProbMatrix probs = forward(embeddings, params);
    const double n = static_cast<double>(embeddings.size() * params.label_count);
    for (std::size_t t = 0; t < embeddings.size(); ++t) {
        if (targets[t].size() != params.label_count) throw HeadError("label count mismatch in grad");
        for (std::size_t j = 0; j < params.label_count; ++j) {
            const double dlogit = (probs.at(j, t) - targets[t][j]) / n;
            g.bias[j] += dlogit;
            for (std::size_t r = 0; r < params.dim; ++r) {
                g.weights[r * params.label_count + j] += embeddings[t][r] * dlogit;
            }
        }
    }
    return g;
}

TrainResult train(const std::vector<WeakRecord>& records,
                  const std::function<std::vector<double>(const std::string&)>& featurizer,
                  std::size_t label_count, const TrainConfig& config) {
    EmbeddingBatch embeddings;
    TargetVectorSequence targets;
    for (const WeakRecord& rec : records) {
        for (std::size_t t = 0; t < rec.tokens.size(); ++t) {
            embeddings.push_back(featurizer(rec.tokens[t].text));
            targets.push_back(rec.targets[t]);
        }
    }
    if (embeddings.empty()) throw HeadError("training dataset is empty");

    TrainResult result;
    result.params = DenseHeadParams::zeros(embeddings.front().size(), label_count);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double loss = bce_loss(forward(embeddings, result.params), targets);
        if (!std::isfinite(loss)) {
            throw HeadError("non-finite loss at epoch " + std::to_string(epoch));
        }
        result.loss_trace.push_back(loss);
        const HeadGradients g = grad(embeddings, result.params, targets);
        for (std::size_t i = 0; i < result.params.weights.size(); ++i) {
            result.params.weights[i] -= config.learning_rate * g.weights[i];
        }
        for (std::size_t j = 0; j < label_count; ++j) {
            result.params.bias[j] -= config.learning_rate * g.bias[j];
        }
    }
    return result;
}

namespace {

std::uint64_t fnv1a(std::uint64_t seed, const char* data, std::size_t len) {
    std::uint64_t h = 14695981039346656037ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::vector<double> hash_featurize(const std::string& token, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw HeadError("embedding dimension must be positive");
    std::vector<double> v(dim, 0.0);
    if (token.empty()) return v;
    const std::string padded = "^" + token + "$";
    for (std::size_t n = 2; n <= 3; ++n) {
        if (padded.size() < n) continue;
        for (std::size_t i = 0; i + n <= padded.size(); ++i) {
            const std::uint64_t h = fnv1a(seed + n, padded.data() + i, n);
            const std::size_t bucket = (h >> 1) % dim;
            const double sign = (h & 1) ? 1.0 : -1.0;
            v[bucket] += sign;
        }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

void save_head_params(const std::string& path, const DenseHeadParams& params,
                      const std::vector<std::string>& label_names) {
    std::ofstream out(path);
    if (!out) throw HeadError("cannot open parameter file for writing: " + path);
    out << json{{"d", params.dim},
                {"labels", label_names},
                {"W", params.weights},
                {"b", params.bias}}
               .dump()
        << '\n';
}

DenseHeadParams load_head_params(const std::string& path, std::vector<std::string>& label_names) {
    std::ifstream in(path);
    if (!in) throw HeadError("cannot open parameter file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw HeadError(std::string("bad parameter file: ") + e.what());
    }
    DenseHeadParams p;
    p.dim = j.at("d").get<std::size_t>();
    label_names = j.at("labels").get<std::vector<std::string>>();
    p.label_count = label_names.size();
    p.weights = j.at("W").get<std::vector<double>>();
    p.bias = j.at("b").get<std::vector<double>>();
    if (p.weights.size() != p.dim * p.label_count || p.bias.size() != p.label_count) {
        throw HeadError("parameter file shapes are inconsistent");
    }
    return p;
}

}  // namespace bioner
