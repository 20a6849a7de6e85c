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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intentrec/nn/layers.hpp"
#include "intentrec/tensor.hpp"

namespace intentrec {

enum class Architecture { kCnn, kParCnn, kBiLstm, kParCnnBiLstm };

std::string_view to_string(Architecture a);
// Accepts "cnn", "par_cnn", "bilstm", "par_cnn_bilstm".
Architecture parse_architecture(std::string_view name);

struct ModelConfig {
  Architecture architecture = Architecture::kCnn;
  std::size_t d_in = 100;      // embedding dimension
  std::size_t seq_len = 13;    // padded length L
  std::size_t classes = 12;    // cl
  std::size_t filters = 64;    // c
  std::size_t kernel = 5;      // k (simple CNN)
  std::vector<std::size_t> parallel_kernels{2, 3, 4, 5};
  std::size_t hidden = 128;    // h: FC width and LSTM units
  double dropout = 0.5;        // p
  std::uint64_t seed = 42;     // parameter initialisation

  /// Throws std::invalid_argument (or ShapeError for kernels longer than L).
  void validate() const;

  std::string to_json() const;
  static ModelConfig from_json(std::string_view text);
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Classifier network for one architecture. The input of `network` is the
/// embedded request (L, d_in); its output is the (cl) posterior.
struct ModelGraph {
  ModelConfig config;
  nn::Sequential network;

  Shape input_shape() const { return {config.seq_len, config.d_in}; }
};

/// Embed -> Conv1D(k, c) -> ReLU -> Flatten -> Dense(h) -> ReLU -> Dropout(p)
///       -> Dense(cl) -> Softmax
ModelGraph build_cnn(const ModelConfig& cfg);

/// Parallel Conv1D branches (one per kernel in parallel_kernels, c filters,
/// ReLU, Flatten) -> Concat -> Dense(h) -> ReLU -> Dropout -> Dense(cl) -> Softmax
ModelGraph build_parallel_cnn(const ModelConfig& cfg);

/// BiLSTM(h, many-to-one -> 2h) -> Dense(h) -> ReLU -> Dropout -> Dense(cl) -> Softmax
ModelGraph build_bilstm(const ModelConfig& cfg);

/// Parallel Conv1D branches (ReLU), cropped to the shortest branch length
/// and stacked channel-wise -> BiLSTM(h) -> Dense(h) -> ReLU -> Dropout
/// -> Dense(cl) -> Softmax
ModelGraph build_parcnn_bilstm(const ModelConfig& cfg);

// Dispatches on cfg.architecture.
ModelGraph build_model(const ModelConfig& cfg);

std::size_t count_parameters(const nn::Layer& layer);
std::size_t count_parameters(const nn::Sequential& net);
/// Trainable tensors of the graph, plus `embedding_rows * d_in` when the
/// embedding table is trained with the classifier.
std::size_t count_parameters(const ModelGraph& g, std::size_t trainable_embedding_rows = 0);

/// Posteriors (B, cl) for a batch of embedded requests, inference mode.
Tensor predict(const ModelGraph& g, std::span<const Tensor> batch);
/// Posterior (cl) for one embedded request.
Tensor predict_one(const ModelGraph& g, const Tensor& input);

}  // namespace intentrec
