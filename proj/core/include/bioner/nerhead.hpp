#ifndef BIONER_NERHEAD_HPP
#define BIONER_NERHEAD_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bioner/tagio.hpp"
#include "bioner/weaklabel.hpp"

namespace bioner {

class HeadError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sigmoid dense layer over per-token embeddings. W is stored row-major,
/// shape d x label_count.
struct DenseHeadParams {
    std::size_t dim = 0;
    std::size_t label_count = 0;
    std::vector<double> weights;  // dim * label_count
    std::vector<double> bias;     // label_count

    static DenseHeadParams zeros(std::size_t dim, std::size_t label_count);
    double& w(std::size_t row, std::size_t col) { return weights[row * label_count + col]; }
    double w(std::size_t row, std::size_t col) const { return weights[row * label_count + col]; }
};

struct HeadGradients {
    std::vector<double> weights;
    std::vector<double> bias;
};

struct TrainConfig {
    double learning_rate = 0.5;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
    double threshold = 0.5;
};

struct TrainResult {
    DenseHeadParams params;
    std::vector<double> loss_trace;  // one entry per epoch, post-update
};

/// Embedding batch: one row of length dim per token.
using EmbeddingBatch = std::vector<std::vector<double>>;

/// o[j] = sigmoid(h . W[:,j] + b[j]) per token; output label-major.
ProbMatrix forward(const EmbeddingBatch& embeddings, const DenseHeadParams& params);

/// Mean binary cross entropy over all (token, label) elements. Accepts
/// soft targets in [0,1]; probabilities are clamped to [1e-12, 1-1e-12].
double bce_loss(const ProbMatrix& probs, const TargetVectorSequence& targets);

/// Analytic gradient of the mean BCE through the sigmoid:
/// d(loss)/d(logit) = (p - t) / N per element.
HeadGradients grad(const EmbeddingBatch& embeddings, const DenseHeadParams& params,
                   const TargetVectorSequence& targets);

/// Full-batch gradient descent from zero initialization. Throws HeadError
/// on an empty dataset or a non-finite loss (with the epoch number).
TrainResult train(const std::vector<WeakRecord>& records,
                  const std::function<std::vector<double>(const std::string&)>& featurizer,
                  std::size_t label_count, const TrainConfig& config);

/// Deterministic character n-gram (n in {2,3}) hash embedding with +-1
/// bucket signs, L2-normalized. The empty token maps to the zero vector.
std::vector<double> hash_featurize(const std::string& token, std::size_t dim, std::uint64_t seed);

// Parameter file: {"d", "labels", "W": row-major, "b"}.
void save_head_params(const std::string& path, const DenseHeadParams& params,
                      const std::vector<std::string>& label_names);
DenseHeadParams load_head_params(const std::string& path, std::vector<std::string>& label_names);

}  // namespace bioner

#endif
