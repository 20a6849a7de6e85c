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
#include <vector>

#include "intentrec/tensor.hpp"

namespace intentrec {

/// softmax(Q K^T / sqrt(d_k)) V with Q (n, d_k), K (m, d_k), V (m, d_v).
/// When `weights` is given it receives the (n, m) attention matrix.
Tensor scaled_dot_product_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                                    Tensor* weights = nullptr);

/// One encoder block: multi-head self-attention with residual, then a
/// position-wise ReLU feed-forward network with residual. No positional
/// encoding and no normalisation.
struct AttentionLayer {
  std::size_t d_model = 0;
  std::size_t heads = 0;
  std::size_t d_k = 0;
  std::size_t d_ff = 0;
  std::vector<Tensor> w_q, w_k, w_v;  // per head, (d_model, d_k)
  Tensor w_o;                         // (heads * d_k, d_model)
  Tensor w_1, b_1;                    // (d_model, d_ff), (d_ff)
  Tensor w_2, b_2;                    // (d_ff, d_model), (d_model)

  /// Glorot-uniform projections, zero biases. d_model must divide by heads.
  static AttentionLayer random(std::size_t d_model, std::size_t heads, std::size_t d_ff,
                               std::uint64_t seed);

  // Throws ShapeError when the tensors do not fit together.
  void validate() const;
};

Tensor self_attention_encode(const Tensor& seq_emb, const AttentionLayer& layer);

}  // namespace intentrec
