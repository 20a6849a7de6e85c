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

#include "intentrec/models.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "intentrec/error.hpp"

namespace intentrec {

using nn::Concat;
using nn::Sequential;

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::kCnn: return "cnn";
    case Architecture::kParCnn: return "par_cnn";
    case Architecture::kBiLstm: return "bilstm";
    case Architecture::kParCnnBiLstm: return "par_cnn_bilstm";
  }
  return "?";
}

Architecture parse_architecture(std::string_view name) {
  for (auto a : {Architecture::kCnn, Architecture::kParCnn, Architecture::kBiLstm,
                 Architecture::kParCnnBiLstm}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown architecture '" + std::string(name) +
                              "' (expected cnn, par_cnn, bilstm or par_cnn_bilstm)");
}

void ModelConfig::validate() const {
  if (classes < 2) throw std::invalid_argument("model needs at least 2 classes");
  if (d_in < 1 || seq_len < 1 || hidden < 1 || filters < 1) {
    throw std::invalid_argument("model dimensions d_in, seq_len, hidden, filters must be >= 1");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("dropout must be in [0, 1)");
  auto check_kernel = [&](std::size_t k) {
    if (k < 1 || k > seq_len) {
      throw ShapeError("kernel size " + std::to_string(k) + " does not fit padded length " +
                       std::to_string(seq_len));
    }
  };
  if (architecture == Architecture::kCnn) check_kernel(kernel);
  if (architecture == Architecture::kParCnn || architecture == Architecture::kParCnnBiLstm) {
    if (parallel_kernels.empty()) throw std::invalid_argument("parallel_kernels is empty");
    for (auto k : parallel_kernels) check_kernel(k);
  }
}

std::string ModelConfig::to_json() const {
  nlohmann::json j;
  j["architecture"] = std::string(to_string(architecture));
  j["d_in"] = d_in;
  j["seq_len"] = seq_len;
  j["classes"] = classes;
  j["filters"] = filters;
  j["kernel"] = kernel;
  j["parallel_kernels"] = parallel_kernels;
  j["hidden"] = hidden;
  j["dropout"] = dropout;
  j["seed"] = seed;
  return j.dump(2);
}

ModelConfig ModelConfig::from_json(std::string_view text) {
  ModelConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    c.architecture = parse_architecture(j.at("architecture").get<std::string>());
    c.d_in = j.value("d_in", c.d_in);
    c.seq_len = j.value("seq_len", c.seq_len);
    c.classes = j.value("classes", c.classes);
    c.filters = j.value("filters", c.filters);
    c.kernel = j.value("kernel", c.kernel);
    c.parallel_kernels = j.value("parallel_kernels", c.parallel_kernels);
    c.hidden = j.value("hidden", c.hidden);
    c.dropout = j.value("dropout", c.dropout);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model config: ") + e.what());
  }
  return c;
}

namespace {

// Dense(h) -> ReLU -> Dropout -> Dense(cl) -> Softmax
void add_head(Sequential& net, std::size_t width, const ModelConfig& cfg) {
  net.emplace<nn::Dense>("fc1", width, cfg.hidden);
  net.emplace<nn::ReLU>("fc1_relu");
  net.emplace<nn::Dropout>("dropout", cfg.dropout, cfg.seed);
  net.emplace<nn::Dense>("fc_out", cfg.hidden, cfg.classes);
  net.emplace<nn::Softmax>("softmax");
}

std::vector<Sequential> conv_branches(const ModelConfig& cfg, bool flatten) {
  std::vector<Sequential> branches;
  for (std::size_t k : cfg.parallel_kernels) {
    const std::string p = "branch_k" + std::to_string(k) + ".";
    Sequential b;
    b.emplace<nn::Conv1D>(p + "conv", k, cfg.d_in, cfg.filters);
    b.emplace<nn::ReLU>(p + "relu");
    if (flatten) b.emplace<nn::Flatten>(p + "flatten");
    branches.push_back(std::move(b));
  }
  return branches;
}

ModelGraph finish(const ModelConfig& cfg, Sequential net) {
  nn::initialize(net, cfg.seed);
  ModelGraph g{cfg, std::move(net)};
  // Shape-chain check.
  const Shape out = g.network.output_shape(g.input_shape());
  if (out != Shape{cfg.classes}) {
    throw ShapeError("model output " + shape_to_string(out) + " != (" + std::to_string(cfg.classes) + ")");
  }
  return g;
}

void expect(const ModelConfig& cfg, Architecture a) {
  if (cfg.architecture != a) {
    throw std::invalid_argument("builder for " + std::string(to_string(a)) + " given config for " +
                                std::string(to_string(cfg.architecture)));
  }
  cfg.validate();
}

}  // namespace

ModelGraph build_cnn(const ModelConfig& cfg) {
  expect(cfg, Architecture::kCnn);
  Sequential net;
  net.emplace<nn::Conv1D>("conv", cfg.kernel, cfg.d_in, cfg.filters);
  net.emplace<nn::ReLU>("conv_relu");
  net.emplace<nn::Flatten>("flatten");
  add_head(net, (cfg.seq_len - cfg.kernel + 1) * cfg.filters, cfg);
  return finish(cfg, std::move(net));
}

ModelGraph build_parallel_cnn(const ModelConfig& cfg) {
  expect(cfg, Architecture::kParCnn);
  Sequential net;
  std::size_t width = 0;
  for (std::size_t k : cfg.parallel_kernels) width += (cfg.seq_len - k + 1) * cfg.filters;
  net.emplace<Concat>("concat", conv_branches(cfg, true), Concat::Join::kFlat);
  add_head(net, width, cfg);
  return finish(cfg, std::move(net));
}

ModelGraph build_bilstm(const ModelConfig& cfg) {
  expect(cfg, Architecture::kBiLstm);
  Sequential net;
  net.emplace<nn::BiLSTM>("bilstm", cfg.d_in, cfg.hidden);
  add_head(net, 2 * cfg.hidden, cfg);
  return finish(cfg, std::move(net));
}

ModelGraph build_parcnn_bilstm(const ModelConfig& cfg) {
  expect(cfg, Architecture::kParCnnBiLstm);
  Sequential net;
  net.emplace<Concat>("concat", conv_branches(cfg, false), Concat::Join::kCropChannel);
  net.emplace<nn::BiLSTM>("bilstm", cfg.filters * cfg.parallel_kernels.size(), cfg.hidden);
  add_head(net, 2 * cfg.hidden, cfg);
  return finish(cfg, std::move(net));
}

ModelGraph build_model(const ModelConfig& cfg) {
  switch (cfg.architecture) {
    case Architecture::kCnn: return build_cnn(cfg);
    case Architecture::kParCnn: return build_parallel_cnn(cfg);
    case Architecture::kBiLstm: return build_bilstm(cfg);
    case Architecture::kParCnnBiLstm: return build_parcnn_bilstm(cfg);
  }
  throw std::invalid_argument("unknown architecture");
}

std::size_t count_parameters(const nn::Layer& layer) {
  std::size_t n = 0;
  for (const auto* p : layer.parameters()) n += p->value.size();
  return n;
}

std::size_t count_parameters(const nn::Sequential& net) {
  std::size_t n = 0;
  for (const auto* p : net.parameters()) n += p->value.size();
  return n;
}

std::size_t count_parameters(const ModelGraph& g, std::size_t trainable_embedding_rows) {
  return count_parameters(g.network) + trainable_embedding_rows * g.config.d_in;
}

Tensor predict_one(const ModelGraph& g, const Tensor& input) {
  if (input.shape() != g.input_shape()) {
    throw ShapeError("model expects input " + shape_to_string(g.input_shape()) + ", got " +
                     input.shape_string());
  }
  if (!input.all_finite()) throw NumericError("model input contains non-finite values");
  return g.network.infer(input);
}

Tensor predict(const ModelGraph& g, std::span<const Tensor> batch) {
  Tensor out({batch.size(), g.config.classes});
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Tensor p = predict_one(g, batch[b]);
    std::copy(p.values().begin(), p.values().end(), out.row(b).begin());
  }
  return out;
}

}  // namespace intentrec
