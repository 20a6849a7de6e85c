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

#include "intentrec/attention.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "intentrec/error.hpp"

namespace intentrec {

namespace {

// (a x b) * (b x c)
Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::size_t n = a.dim(0), inner = a.dim(1), m = b.dim(1);
  Tensor out({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    double* o = out.data() + i * m;
    for (std::size_t p = 0; p < inner; ++p) {
      const double x = a.at(i, p);
      const double* br = b.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) o[j] += x * br[j];
    }
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace

Tensor scaled_dot_product_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                                    Tensor* weights) {
  require(q.rank() == 2 && k.rank() == 2 && v.rank() == 2, "attention expects matrices");
  const std::size_t n = q.dim(0), dk = q.dim(1), m = k.dim(0), dv = v.dim(1);
  if (dk == 0) throw ShapeError("attention: d_k must be positive");
  require(k.dim(1) == dk, "attention: Q is " + q.shape_string() + " but K is " + k.shape_string());
  require(v.dim(0) == m, "attention: K is " + k.shape_string() + " but V is " + v.shape_string());

  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  Tensor w({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < dk; ++p) s += q.at(i, p) * k.at(j, p);
      w.at(i, j) = s * scale;
    }
    auto row = w.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& x : row) {
      x = std::exp(x - mx);
      sum += x;
    }
    for (double& x : row) x /= sum;
  }
  Tensor out({n, dv});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double a = w.at(i, j);
      for (std::size_t p = 0; p < dv; ++p) out.at(i, p) += a * v.at(j, p);
    }
  }
  if (weights) *weights = std::move(w);
  return out;
}

AttentionLayer AttentionLayer::random(std::size_t d_model, std::size_t heads, std::size_t d_ff,
                                      std::uint64_t seed) {
  if (heads == 0 || d_model % heads != 0) {
    throw ShapeError("attention: d_model " + std::to_string(d_model) + " is not a multiple of " +
                     std::to_string(heads) + " heads");
  }
  std::mt19937_64 rng(seed);
  auto glorot = [&](std::size_t rows, std::size_t cols) {
    Tensor t({rows, cols});
    std::uniform_real_distribution<double> dist(-std::sqrt(6.0 / static_cast<double>(rows + cols)),
                                                std::sqrt(6.0 / static_cast<double>(rows + cols)));
    for (double& x : t.values()) x = dist(rng);
    return t;
  };
  AttentionLayer l;
  l.d_model = d_model;
  l.heads = heads;
  l.d_k = d_model / heads;
  l.d_ff = d_ff;
  for (std::size_t h = 0; h < heads; ++h) {
    l.w_q.push_back(glorot(d_model, l.d_k));
    l.w_k.push_back(glorot(d_model, l.d_k));
    l.w_v.push_back(glorot(d_model, l.d_k));
  }
  l.w_o = glorot(heads * l.d_k, d_model);
  l.w_1 = glorot(d_model, d_ff);
  l.b_1 = Tensor({d_ff});
  l.w_2 = glorot(d_ff, d_model);
  l.b_2 = Tensor({d_model});
  return l;
}

void AttentionLayer::validate() const {
  require(heads > 0 && d_model == heads * d_k, "attention: d_model must equal heads * d_k");
  require(w_q.size() == heads && w_k.size() == heads && w_v.size() == heads,
          "attention: one Q/K/V projection per head required");
  const Shape proj{d_model, d_k};
  for (std::size_t h = 0; h < heads; ++h) {
    require(w_q[h].shape() == proj && w_k[h].shape() == proj && w_v[h].shape() == proj,
            "attention: head projections must be " + shape_to_string(proj));
  }
  require(w_o.shape() == Shape{heads * d_k, d_model}, "attention: bad output projection");
  require(w_1.shape() == Shape{d_model, d_ff} && b_1.shape() == Shape{d_ff} &&
              w_2.shape() == Shape{d_ff, d_model} && b_2.shape() == Shape{d_model},
          "attention: bad feed-forward shapes");
}

Tensor self_attention_encode(const Tensor& x, const AttentionLayer& layer) {
  layer.validate();
  if (x.rank() != 2 || x.dim(1) != layer.d_model) {
    throw ShapeError("self-attention expects (L, " + std::to_string(layer.d_model) + "), got " +
                     x.shape_string());
  }
  const std::size_t L = x.dim(0);
  Tensor heads({L, layer.heads * layer.d_k});
  for (std::size_t h = 0; h < layer.heads; ++h) {
    const Tensor out = scaled_dot_product_attention(matmul(x, layer.w_q[h]), matmul(x, layer.w_k[h]),
                                                    matmul(x, layer.w_v[h]));
    for (std::size_t t = 0; t < L; ++t) {
      std::copy(out.row(t).begin(), out.row(t).end(), heads.row(t).begin() + h * layer.d_k);
    }
  }
  Tensor hidden = matmul(heads, layer.w_o);
  for (std::size_t i = 0; i < hidden.size(); ++i) hidden[i] += x[i];

  Tensor inner = matmul(hidden, layer.w_1);
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t j = 0; j < layer.d_ff; ++j) {
      inner.at(t, j) = std::max(0.0, inner.at(t, j) + layer.b_1[j]);
    }
  }
  Tensor out = matmul(inner, layer.w_2);
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t j = 0; j < layer.d_model; ++j) out.at(t, j) += layer.b_2[j] + hidden.at(t, j);
  }
  return out;
}

}  // namespace intentrec
