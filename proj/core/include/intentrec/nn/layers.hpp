/*
 * Copyright 2026 The intentrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "intentrec/tensor.hpp"

namespace intentrec::nn {

enum class Mode { kTrain, kInfer };

enum class LayerKind {
  kDense,
  kConv1D,
  kBiLSTM,
  kDropout,
  kReLU,
  kSoftmax,
  kFlatten,
  kConcat,
};

std::string_view to_string(LayerKind kind);

/// A trainable tensor together with its accumulated gradient. The gradient
/// always has the parameter's shape and is zeroed between optimizer steps.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
  void zero_grad() { grad.fill(0.0); }
};

/// Base of the layer catalog. Every layer works on a single example; batches
/// are handled by the caller.
///
/// `forward` caches whatever `backward` needs and must precede it. `infer`
/// is a pure function of the input and the parameters, which makes a frozen
/// layer safe to share across threads.
class Layer {
 public:
  explicit Layer(std::string name) : name_(std::move(name)) {}
  virtual ~Layer() = default;

  const std::string& name() const { return name_; }
  virtual LayerKind kind() const = 0;

  virtual Shape output_shape(const Shape& input) const = 0;
  virtual Tensor infer(const Tensor& input) const = 0;
  virtual Tensor forward(const Tensor& input, Mode mode) = 0;
  virtual Tensor backward(const Tensor& upstream) = 0;

  virtual std::vector<Parameter*> parameters() { return {}; }
  virtual std::vector<const Parameter*> parameters() const { return {}; }
  virtual std::unique_ptr<Layer> clone() const = 0;

  // Dropout layers override; everything else is deterministic.
  virtual void reseed(std::uint64_t /*seed*/) {}

 protected:
  [[noreturn]] void shape_error(const Shape& expected, const Shape& got) const;
  [[noreturn]] void missing_forward() const;

 private:
  std::string name_;
};

using LayerPtr = std::unique_ptr<Layer>;

/// Fully connected layer on a 1-D input: y = x W + b, W is (d_in, d_out).
class Dense final : public Layer {
 public:
  Dense(std::string name, std::size_t d_in, std::size_t d_out);

  LayerKind kind() const override { return LayerKind::kDense; }
  Shape output_shape(const Shape& input) const override;
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  std::vector<Parameter*> parameters() override { return {&weights_, &bias_}; }
  std::vector<const Parameter*> parameters() const override {
    return {&weights_, &bias_};
  }
  LayerPtr clone() const override { return std::make_unique<Dense>(*this); }

  std::size_t in_features() const { return d_in_; }
  std::size_t out_features() const { return d_out_; }
  Parameter& weights() { return weights_; }
  Parameter& bias() { return bias_; }

 private:
  std::size_t d_in_, d_out_;
  Parameter weights_, bias_;
  std::optional<Tensor> input_;
};

/// Valid (unpadded) 1-D convolution over the token axis.
/// Input (L, d_in) -> output (L - k + 1, c); kernel is (k, d_in, c).
class Conv1D final : public Layer {
 public:
  Conv1D(std::string name, std::size_t kernel_size, std::size_t d_in,
         std::size_t filters);

  LayerKind kind() const override { return LayerKind::kConv1D; }
  Shape output_shape(const Shape& input) const override;
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  std::vector<Parameter*> parameters() override { return {&kernel_, &bias_}; }
  std::vector<const Parameter*> parameters() const override {
    return {&kernel_, &bias_};
  }
  LayerPtr clone() const override { return std::make_unique<Conv1D>(*this); }

  std::size_t kernel_size() const { return k_; }
  std::size_t filters() const { return c_; }
  Parameter& kernel() { return kernel_; }
  Parameter& bias() { return bias_; }

 private:
  std::size_t k_, d_in_, c_;
  Parameter kernel_, bias_;
  std::optional<Tensor> input_;
};

/// Bidirectional LSTM, many-to-one. Input (L, d_in) -> (2h): the final
/// forward state followed by the final backward state (the backward pass
/// reads the sequence from L-1 down to 0). The two directions have
/// independent parameters; each direction holds four gates (input, forget,
/// cell, output), each with a (d_in + h, h) kernel and an (h) bias.
class BiLSTM final : public Layer {
 public:
  BiLSTM(std::string name, std::size_t d_in, std::size_t hidden);

  LayerKind kind() const override { return LayerKind::kBiLSTM; }
  Shape output_shape(const Shape& input) const override;
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  std::vector<Parameter*> parameters() override;
  std::vector<const Parameter*> parameters() const override;
  LayerPtr clone() const override { return std::make_unique<BiLSTM>(*this); }

  std::size_t hidden() const { return h_; }

  static constexpr std::size_t kGates = 4;  // i, f, g, o

  struct Direction {
    Parameter kernels[kGates];
    Parameter biases[kGates];
  };
  Direction& direction(std::size_t i) { return dirs_[i]; }

 private:
  // Per-step activations kept for backpropagation through time.
  struct StepCache {
    std::vector<double> z;        // [x_t, h_{t-1}]
    std::vector<double> gates;    // 4h post-activation
    std::vector<double> c_prev;   // h
    std::vector<double> c;        // h
  };

  std::vector<double> run_direction(const Tensor& input, std::size_t dir,
                                    std::vector<StepCache>* cache) const;
  void backprop_direction(std::size_t dir, std::span<const double> dh_final,
                          const std::vector<StepCache>& cache,
                          Tensor& input_grad);

  std::size_t d_in_, h_;
  Direction dirs_[2];
  std::optional<std::vector<StepCache>> cache_[2];
  std::size_t cached_len_ = 0;
};

/// Inverted dropout; identity at inference.
class Dropout final : public Layer {
 public:
  Dropout(std::string name, double p, std::uint64_t seed = 0);

  LayerKind kind() const override { return LayerKind::kDropout; }
  Shape output_shape(const Shape& input) const override { return input; }
  Tensor infer(const Tensor& input) const override { return input; }
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  LayerPtr clone() const override { return std::make_unique<Dropout>(*this); }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }

  double rate() const { return p_; }

 private:
  double p_;
  std::mt19937_64 rng_;
  std::optional<Tensor> mask_;
};

class ReLU final : public Layer {
 public:
  using Layer::Layer;
  LayerKind kind() const override { return LayerKind::kReLU; }
  Shape output_shape(const Shape& input) const override { return input; }
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  LayerPtr clone() const override { return std::make_unique<ReLU>(*this); }

 private:
  std::optional<Tensor> input_;
};

/// Softmax over the last axis (each row of a matrix, or the whole vector).
class Softmax final : public Layer {
 public:
  using Layer::Layer;
  LayerKind kind() const override { return LayerKind::kSoftmax; }
  Shape output_shape(const Shape& input) const override { return input; }
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  LayerPtr clone() const override { return std::make_unique<Softmax>(*this); }

 private:
  std::optional<Tensor> output_;
};

class Flatten final : public Layer {
 public:
  using Layer::Layer;
  LayerKind kind() const override { return LayerKind::kFlatten; }
  Shape output_shape(const Shape& input) const override {
    return {shape_size(input)};
  }
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  LayerPtr clone() const override { return std::make_unique<Flatten>(*this); }

 private:
  std::optional<Shape> input_shape_;
};

/// Ordered chain of layers.
class Sequential {
 public:
  Sequential() = default;
  Sequential(const Sequential& other);
  Sequential& operator=(const Sequential& other);
  Sequential(Sequential&&) noexcept = default;
  Sequential& operator=(Sequential&&) noexcept = default;

  Layer& add(LayerPtr layer);
  template <typename L, typename... Args>
  L& emplace(Args&&... args) {
    return static_cast<L&>(add(std::make_unique<L>(std::forward<Args>(args)...)));
  }

  Shape output_shape(const Shape& input) const;
  Tensor infer(const Tensor& input) const;
  Tensor forward(const Tensor& input, Mode mode);
  Tensor backward(const Tensor& upstream);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  void zero_grad();
  void reseed(std::uint64_t seed);

  std::size_t size() const { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }

  // Visits every layer including those nested in Concat branches.
  template <typename F>
  void for_each_layer(F&& f) const;

 private:
  std::vector<LayerPtr> layers_;
};

/// Runs several branches on the same input and joins their outputs.
///   kFlat:        branch outputs are 1-D and concatenated end to end.
///   kCropChannel: branch outputs are (L_b, c_b); every branch is cropped
///                 to the shortest L_b (leading rows kept) and the results
///                 are concatenated along the channel axis.
class Concat final : public Layer {
 public:
  enum class Join { kFlat, kCropChannel };

  Concat(std::string name, std::vector<Sequential> branches, Join join);

  LayerKind kind() const override { return LayerKind::kConcat; }
  Shape output_shape(const Shape& input) const override;
  Tensor infer(const Tensor& input) const override;
  Tensor forward(const Tensor& input, Mode mode) override;
  Tensor backward(const Tensor& upstream) override;
  std::vector<Parameter*> parameters() override;
  std::vector<const Parameter*> parameters() const override;
  LayerPtr clone() const override { return std::make_unique<Concat>(*this); }
  void reseed(std::uint64_t seed) override;

  Join join() const { return join_; }
  const std::vector<Sequential>& branches() const { return branches_; }
  std::vector<Sequential>& branches() { return branches_; }

 private:
  Tensor merge(const std::vector<Tensor>& outs) const;

  std::vector<Sequential> branches_;
  Join join_;
  std::optional<std::vector<Shape>> branch_shapes_;
  std::optional<Shape> input_shape_;
};

template <typename F>
void Sequential::for_each_layer(F&& f) const {
  for (const auto& layer : layers_) {
    f(*layer);
    if (layer->kind() == LayerKind::kConcat) {
      for (const auto& b : static_cast<const Concat&>(*layer).branches()) {
        b.for_each_layer(f);
      }
    }
  }
}

/// Glorot-uniform initialisation of every kernel in `net`; biases zero,
/// LSTM forget-gate biases one.
void initialize(Sequential& net, std::uint64_t seed);

}  // namespace intentrec::nn
