#include "stk/toy_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "stk/error.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

void CheckShapes(const ModelParams& p, const FeatureVector& x) {
  if (x.dim != p.dim) {
    Fail(ErrorKind::kShape, "feature dim " + std::to_string(x.dim) +
                                " does not match model dim " +
                                std::to_string(p.dim));
  }
  if (p.weights.size() != p.num_classes * p.dim ||
      p.bias.size() != p.num_classes) {
    Fail(ErrorKind::kShape, "model parameter arrays do not match K x D");
  }
  if (!x.indices.empty() && x.indices.back() >= p.dim) {
    Fail(ErrorKind::kShape, "feature index out of range");
  }
}

double LogSumExp(std::span<const double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - top);
  return top + std::log(sum);
}

void Softmax(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

}  // namespace

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> FeatureTokens(std::string_view text) {
  const std::u32string cps = utf8::ToLower(utf8::Decode(text));
  std::vector<std::string> tokens;
  std::u32string current;
  for (char32_t cp : cps) {
    if (utf8::IsAlnum(cp)) {
      current.push_back(cp);
    } else if (!current.empty()) {
      tokens.push_back(utf8::Encode(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(utf8::Encode(current));
  return tokens;
}

FeatureVector HashFeatures(std::span<const std::string> features, std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0 || dim > (1ULL << 31)) {
    Fail(ErrorKind::kInvalidArgument,
         "feature dimension must be a power of two, got " + std::to_string(dim));
  }
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const std::string& f : features) {
    ++counts[static_cast<std::uint32_t>(Fnv1a64(f) & (dim - 1))];
  }
  FeatureVector out;
  out.dim = dim;
  for (const auto& [index, count] : counts) {
    out.indices.push_back(index);
    out.counts.push_back(count);
  }
  return out;
}

FeatureVector Featurize(std::string_view text, std::size_t dim) {
  return HashFeatures(FeatureTokens(text), dim);
}

ModelParams ModelParams::Zeros(std::size_t num_classes, std::size_t dim) {
  ModelParams p;
  p.num_classes = num_classes;
  p.dim = dim;
  p.weights.assign(num_classes * dim, 0.0);
  p.bias.assign(num_classes, 0.0);
  return p;
}

std::vector<double> Logits(const ModelParams& p, const FeatureVector& x) {
  CheckShapes(p, x);
  std::vector<double> z(p.bias);
  for (std::size_t k = 0; k < p.num_classes; ++k) {
    for (std::size_t i = 0; i < x.indices.size(); ++i) {
      z[k] += p.w(k, x.indices[i]) * x.counts[i];
    }
  }
  return z;
}

std::vector<double> PredictProba(const ModelParams& p, const FeatureVector& x) {
  std::vector<double> z = Logits(p, x);
  Softmax(z);
  return z;
}

LossGrad LossAndGrad(const ModelParams& p, std::span<const Example> batch,
                     double l2) {
  if (batch.empty()) Fail(ErrorKind::kInvalidArgument, "empty batch");
  LossGrad out;
  out.grad = ModelParams::Zeros(p.num_classes, p.dim);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double ce = 0.0;
  for (const Example& ex : batch) {
    if (ex.label >= p.num_classes) {
      Fail(ErrorKind::kInvalidArgument,
           "class index " + std::to_string(ex.label) + " out of range");
    }
    std::vector<double> z = Logits(p, ex.x);
    ce += LogSumExp(z) - z[ex.label];
    Softmax(z);
    for (std::size_t k = 0; k < p.num_classes; ++k) {
      const double delta = (z[k] - (k == ex.label ? 1.0 : 0.0)) * inv_n;
      out.grad.bias[k] += delta;
      for (std::size_t i = 0; i < ex.x.indices.size(); ++i) {
        out.grad.w(k, ex.x.indices[i]) += delta * ex.x.counts[i];
      }
    }
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    sq += p.weights[i] * p.weights[i];
    out.grad.weights[i] += l2 * p.weights[i];
  }
  out.loss = ce * inv_n + 0.5 * l2 * sq;
  return out;
}

double Loss(const ModelParams& p, std::span<const Example> batch, double l2) {
  if (batch.empty()) Fail(ErrorKind::kInvalidArgument, "empty batch");
  double ce = 0.0;
  for (const Example& ex : batch) {
    if (ex.label >= p.num_classes) {
      Fail(ErrorKind::kInvalidArgument,
           "class index " + std::to_string(ex.label) + " out of range");
    }
    const std::vector<double> z = Logits(p, ex.x);
    ce += LogSumExp(z) - z[ex.label];
  }
  double sq = 0.0;
  for (double w : p.weights) sq += w * w;
  return ce / static_cast<double>(batch.size()) + 0.5 * l2 * sq;
}

void SeededShuffle(std::span<std::size_t> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    // Rejection sampling for an unbiased draw from [0, i).
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::mt19937_64::max() -
                                (std::mt19937_64::max() % bound + 1) % bound;
    std::uint64_t r = rng();
    while (r > limit) r = rng();
    std::swap(items[i - 1], items[r % bound]);
  }
}

TrainResult TrainTraced(std::span<const Example> data, const TrainConfig& cfg,
                        std::size_t num_classes) {
  if (data.empty()) Fail(ErrorKind::kInvalidArgument, "training data is empty");
  if (num_classes == 0) Fail(ErrorKind::kInvalidArgument, "no classes");
  if (cfg.epochs <= 0) Fail(ErrorKind::kInvalidArgument, "epochs must be positive");
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    Fail(ErrorKind::kInvalidArgument, "learning rate must be finite and >= 0");
  }
  if (!(cfg.l2 >= 0.0) || !std::isfinite(cfg.l2)) {
    Fail(ErrorKind::kInvalidArgument, "l2 must be finite and >= 0");
  }
  const std::size_t dim = data.front().x.dim;
  for (const Example& ex : data) {
    if (ex.x.dim != dim) Fail(ErrorKind::kShape, "examples disagree on feature dim");
    if (ex.label >= num_classes) {
      Fail(ErrorKind::kInvalidArgument,
           "class index " + std::to_string(ex.label) + " out of range");
    }
  }

  TrainResult result;
  result.params = ModelParams::Zeros(num_classes, dim);
  ModelParams& params = result.params;
  const std::size_t batch_size =
      cfg.batch_size == 0 ? data.size() : std::min(cfg.batch_size, data.size());

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::vector<Example> batch;
  batch.reserve(batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededShuffle(order, rng);
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(data[order[i]]);
      const LossGrad lg = LossAndGrad(params, batch, cfg.l2);
      if (!std::isfinite(lg.loss)) {
        Fail(ErrorKind::kDivergence,
             "training diverged in epoch " + std::to_string(epoch));
      }
      for (std::size_t i = 0; i < params.weights.size(); ++i) {
        params.weights[i] -= cfg.learning_rate * lg.grad.weights[i];
      }
      for (std::size_t k = 0; k < num_classes; ++k) {
        params.bias[k] -= cfg.learning_rate * lg.grad.bias[k];
      }
    }
    const double loss = Loss(params, data, cfg.l2);
    if (!std::isfinite(loss)) {
      Fail(ErrorKind::kDivergence,
           "training diverged in epoch " + std::to_string(epoch));
    }
    result.epoch_loss.push_back(loss);
  }
  return result;
}

ModelParams Train(std::span<const Example> data, const TrainConfig& cfg,
                  std::size_t num_classes) {
  return TrainTraced(data, cfg, num_classes).params;
}

}  // namespace stk
