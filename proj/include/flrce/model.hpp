#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "flrce/data.hpp"
#include "flrce/errors.hpp"
#include "flrce/param_vector.hpp"
#include "flrce/rng.hpp"

namespace flrce {

enum class Activation { relu, tanh };

// Fully-connected network shape. An empty hidden list degenerates to
// multinomial logistic regression.
struct ModelSpec {
  int input_dim = 0;
  std::vector<int> hidden_dims;
  int output_classes = 0;
  Activation activation = Activation::relu;

  std::vector<int> layer_dims() const {
    std::vector<int> dims;
    dims.reserve(hidden_dims.size() + 2);
    dims.push_back(input_dim);
    dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
    dims.push_back(output_classes);
    return dims;
  }

  std::size_t param_count() const {
    const auto dims = layer_dims();
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      n += (static_cast<std::size_t>(dims[l]) + 1) * static_cast<std::size_t>(dims[l + 1]);
    }
    return n;
  }

  void validate() const {
    if (input_dim < 1) throw ConfigError("model.input_dim must be >= 1");
    if (output_classes < 2) throw ConfigError("model.output_classes must be >= 2");
    for (const int h : hidden_dims) {
      if (h < 1) throw ConfigError("model.hidden dims must be >= 1");
    }
  }
};

struct TrainConfig {
  double learning_rate = 0.1;
  int local_epochs = 5;
  int batch_size = 16;

  void validate() const {
    if (!(learning_rate >= 0.0)) throw ConfigError("train.learning_rate must be >= 0");
    if (local_epochs < 1) throw ConfigError("train.local_epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  }
};

namespace detail {

// Offsets of one dense layer inside the flat parameter vector. Weights are
// row-major per output unit, biases follow the weight block.
struct LayerView {
  std::size_t w_off;
  std::size_t b_off;
  int fan_in;
  int fan_out;
};

inline std::vector<LayerView> layer_layout(const ModelSpec& spec) {
  const auto dims = spec.layer_dims();
  std::vector<LayerView> layers;
  layers.reserve(dims.size() - 1);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    LayerView v;
    v.fan_in = dims[l];
    v.fan_out = dims[l + 1];
    v.w_off = off;
    v.b_off = off + static_cast<std::size_t>(v.fan_in) * static_cast<std::size_t>(v.fan_out);
    off = v.b_off + static_cast<std::size_t>(v.fan_out);
    layers.push_back(v);
  }
  return layers;
}

inline double activate(double z, Activation a) {
  return a == Activation::relu ? std::max(0.0, z) : std::tanh(z);
}

inline double activate_grad(double z, Activation a) {
  if (a == Activation::relu) return z > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(z);
  return 1.0 - t * t;
}

// Forward pass for one sample; fills pre-activations and activations per
// layer. activations[0] is the input row; the last entry holds raw logits.
inline void forward_sample(std::span<const double> params,
                           const std::vector<LayerView>& layers, Activation act,
                           std::span<const double> input,
                           std::vector<std::vector<double>>& preact,
                           std::vector<std::vector<double>>& activations) {
  activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& lv = layers[l];
    auto& z = preact[l];
    z.assign(static_cast<std::size_t>(lv.fan_out), 0.0);
    const auto& a_in = activations[l];
    for (int o = 0; o < lv.fan_out; ++o) {
      double s = params[lv.b_off + static_cast<std::size_t>(o)];
      const std::size_t row = lv.w_off + static_cast<std::size_t>(o) * static_cast<std::size_t>(lv.fan_in);
      for (int i = 0; i < lv.fan_in; ++i) {
        s += params[row + static_cast<std::size_t>(i)] * a_in[static_cast<std::size_t>(i)];
      }
      z[static_cast<std::size_t>(o)] = s;
    }
    auto& a_out = activations[l + 1];
    a_out.resize(z.size());
    const bool last = l + 1 == layers.size();
    for (std::size_t o = 0; o < z.size(); ++o) {
      a_out[o] = last ? z[o] : activate(z[o], act);
    }
  }
}

// Numerically stable mean softmax cross-entropy from logits.
inline double cross_entropy(std::span<const double> logits, int label) {
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double z : logits) sum += std::exp(z - zmax);
  return std::log(sum) - (logits[static_cast<std::size_t>(label)] - zmax);
}

inline void check_batch(const ModelSpec& spec, std::span<const double> params,
                        const Dataset& data, std::span<const std::size_t> idx) {
  if (params.size() != spec.param_count()) {
    throw ConfigError("model: parameter vector size does not match spec");
  }
  if (data.feature_width != spec.input_dim) {
    throw ConfigError("model: feature width does not match model input_dim");
  }
  if (idx.empty()) throw ConfigError("model: empty batch");
  for (const std::size_t i : idx) {
    if (data.labels[i] < 0 || data.labels[i] >= spec.output_classes) {
      throw ConfigError("model: label out of range for output_classes");
    }
  }
}

}  // namespace detail

// Seeded uniform(-s, s) weight init with s = 1/sqrt(fan_in); biases zero.
inline ParamVector init_params(const ModelSpec& spec, Rng& rng) {
  spec.validate();
  ParamVector params(spec.param_count(), 0.0);
  for (const auto& lv : detail::layer_layout(spec)) {
    const double s = 1.0 / std::sqrt(static_cast<double>(lv.fan_in));
    const std::size_t n_w = static_cast<std::size_t>(lv.fan_in) * static_cast<std::size_t>(lv.fan_out);
    for (std::size_t i = 0; i < n_w; ++i) {
      params[lv.w_off + i] = rng.uniform(-s, s);
    }
  }
  return params;
}

// Mean softmax cross-entropy over the index subset (all rows when empty
// subset overloads are used).
inline double forward_loss(std::span<const double> params, const ModelSpec& spec,
                           const Dataset& data, std::span<const std::size_t> idx) {
  detail::check_batch(spec, params, data, idx);
  const auto layers = detail::layer_layout(spec);
  std::vector<std::vector<double>> preact(layers.size());
  std::vector<std::vector<double>> activations(layers.size() + 1);
  double total = 0.0;
  for (const std::size_t i : idx) {
    detail::forward_sample(params, layers, spec.activation, data.row(i), preact, activations);
    total += detail::cross_entropy(activations.back(), data.labels[i]);
  }
  return total / static_cast<double>(idx.size());
}

inline double forward_loss(std::span<const double> params, const ModelSpec& spec,
                           const Dataset& data) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return forward_loss(params, spec, data, idx);
}

// Gradient of the mean loss over the index subset, via backprop. Same
// dimension as `params`.
inline ParamVector gradient(std::span<const double> params, const ModelSpec& spec,
                            const Dataset& data, std::span<const std::size_t> idx) {
  detail::check_batch(spec, params, data, idx);
  const auto layers = detail::layer_layout(spec);
  ParamVector grad(params.size(), 0.0);
  std::vector<std::vector<double>> preact(layers.size());
  std::vector<std::vector<double>> activations(layers.size() + 1);
  std::vector<double> delta, delta_prev;

  for (const std::size_t i : idx) {
    detail::forward_sample(params, layers, spec.activation, data.row(i), preact, activations);

    // dL/dlogits = softmax - onehot
    const auto& logits = activations.back();
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    delta.resize(logits.size());
    for (std::size_t o = 0; o < logits.size(); ++o) {
      delta[o] = std::exp(logits[o] - zmax);
      sum += delta[o];
    }
    for (auto& d : delta) d /= sum;
    delta[static_cast<std::size_t>(data.labels[i])] -= 1.0;

    for (std::size_t l = layers.size(); l-- > 0;) {
      const auto& lv = layers[l];
      const auto& a_in = activations[l];
      for (int o = 0; o < lv.fan_out; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        grad[lv.b_off + static_cast<std::size_t>(o)] += d;
        const std::size_t row = lv.w_off + static_cast<std::size_t>(o) * static_cast<std::size_t>(lv.fan_in);
        for (int in = 0; in < lv.fan_in; ++in) {
          grad[row + static_cast<std::size_t>(in)] += d * a_in[static_cast<std::size_t>(in)];
        }
      }
      if (l == 0) break;
      delta_prev.assign(static_cast<std::size_t>(lv.fan_in), 0.0);
      for (int in = 0; in < lv.fan_in; ++in) {
        double s = 0.0;
        for (int o = 0; o < lv.fan_out; ++o) {
          s += params[lv.w_off + static_cast<std::size_t>(o) * static_cast<std::size_t>(lv.fan_in) +
                      static_cast<std::size_t>(in)] *
               delta[static_cast<std::size_t>(o)];
        }
        delta_prev[static_cast<std::size_t>(in)] =
            s * detail::activate_grad(preact[l - 1][static_cast<std::size_t>(in)], spec.activation);
      }
      delta = delta_prev;
    }
  }

  const double scale = 1.0 / static_cast<double>(idx.size());
  for (auto& g : grad) g *= scale;
  return grad;
}

inline ParamVector gradient(std::span<const double> params, const ModelSpec& spec,
                            const Dataset& data) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return gradient(params, spec, data, idx);
}

// Argmax class prediction; ties resolve to the smallest class index.
inline int predict(std::span<const double> params, const ModelSpec& spec,
                   std::span<const double> input) {
  const auto layers = detail::layer_layout(spec);
  std::vector<std::vector<double>> preact(layers.size());
  std::vector<std::vector<double>> activations(layers.size() + 1);
  detail::forward_sample(params, layers, spec.activation, input, preact, activations);
  const auto& logits = activations.back();
  return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

// Fraction of correctly classified rows.
inline double accuracy(std::span<const double> params, const ModelSpec& spec,
                       const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(params, spec, data.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

// Local mini-batch SGD for `local_epochs` passes with a seeded per-epoch
// shuffle; returns the parameter delta (final local weights minus received
// weights). With one epoch and a full batch this is exactly -lr * gradient.
// Returns nullopt for a client with no data (skip signal).
inline std::optional<ParamVector> local_train(const ParamVector& global,
                                              const Dataset& data,
                                              const ModelSpec& spec,
                                              const TrainConfig& cfg,
                                              std::uint64_t seed) {
  cfg.validate();
  if (data.size() == 0) return std::nullopt;
  if (global.size() != spec.param_count()) {
    throw ConfigError("local_train: parameter vector size does not match spec");
  }

  ParamVector w = global;
  Rng rng(seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      const std::span<const std::size_t> chunk(order.data() + start, len);
      const ParamVector g = gradient(w, spec, data, chunk);
      add_scaled(w, -cfg.learning_rate, g);
    }
  }
  return subtract(w, global);
}

}  // namespace flrce
