#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Hashed bag-of-tokens features feeding a linear softmax head, trained with
// mini-batch SGD. Small enough to train in milliseconds, which is all the
// surrounding pipeline needs from a model.
namespace stk {

inline constexpr std::size_t kDefaultDim = 4096;
inline constexpr std::string_view kHashName = "fnv1a64";

// FNV-1a, 64-bit, over the UTF-8 bytes.
std::uint64_t Fnv1a64(std::string_view bytes);

// Sparse count vector. indices strictly increasing, counts >= 1.
struct FeatureVector {
  std::vector<std::uint32_t> indices;
  std::vector<std::uint32_t> counts;
  std::size_t dim = kDefaultDim;

  bool operator==(const FeatureVector&) const = default;
};

// Lowercases, splits on runs of non-alphanumeric characters.
std::vector<std::string> FeatureTokens(std::string_view text);

// Hashes each string into [0, dim). dim must be a power of two.
FeatureVector HashFeatures(std::span<const std::string> features, std::size_t dim);
FeatureVector Featurize(std::string_view text, std::size_t dim = kDefaultDim);

// Row-major K x D weights plus K biases.
struct ModelParams {
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static ModelParams Zeros(std::size_t num_classes, std::size_t dim);

  double& w(std::size_t k, std::size_t j) { return weights[k * dim + j]; }
  double w(std::size_t k, std::size_t j) const { return weights[k * dim + j]; }

  bool operator==(const ModelParams&) const = default;
};

struct Example {
  FeatureVector x;
  std::size_t label = 0;
};

std::vector<double> Logits(const ModelParams& p, const FeatureVector& x);
std::vector<double> PredictProba(const ModelParams& p, const FeatureVector& x);

struct LossGrad {
  double loss = 0.0;
  ModelParams grad;
};

// Mean cross-entropy over the batch plus l2 * ||W||^2 / 2 (bias is not
// regularized), with its exact gradient.
LossGrad LossAndGrad(const ModelParams& p, std::span<const Example> batch,
                     double l2);
double Loss(const ModelParams& p, std::span<const Example> batch, double l2);

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  double l2 = 1e-4;
  std::size_t batch_size = 16;  // 0 means full batch
};

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_loss;  // full objective after each epoch
};

// Starts from W = 0, b = 0. Examples are visited in an order reshuffled each
// epoch from the seeded generator. Throws kDivergence naming the epoch if the
// objective becomes non-finite.
TrainResult TrainTraced(std::span<const Example> data, const TrainConfig& cfg,
                        std::size_t num_classes);
ModelParams Train(std::span<const Example> data, const TrainConfig& cfg,
                  std::size_t num_classes);

// Fisher-Yates driven by mt19937_64, spelled out so the permutation does not
// depend on the standard library's std::shuffle.
void SeededShuffle(std::span<std::size_t> items, std::mt19937_64& rng);

}  // namespace stk
