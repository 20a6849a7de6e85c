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

#include "intentrec/nn/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "intentrec/error.hpp"

namespace intentrec::nn {

namespace {

struct View {
  std::size_t batch;
  std::size_t classes;
};

View check(const Tensor& probs, std::span<const int> targets,
           std::span<const double> weights) {
  View v{};
  if (probs.rank() == 1) {
    v = {1, probs.dim(0)};
  } else if (probs.rank() == 2) {
    v = {probs.dim(0), probs.dim(1)};
  } else {
    throw ShapeError("cross-entropy expects (B, cl) posteriors, got " +
                     probs.shape_string());
  }
  if (targets.size() != v.batch) {
    throw ShapeError("cross-entropy: " + std::to_string(targets.size()) +
                     " targets for a batch of " + std::to_string(v.batch));
  }
  if (!weights.empty() && weights.size() != v.classes) {
    throw ShapeError("cross-entropy: " + std::to_string(weights.size()) +
                     " class weights for " + std::to_string(v.classes) + " classes");
  }
  for (std::size_t b = 0; b < v.batch; ++b) {
    if (targets[b] < 0 || static_cast<std::size_t>(targets[b]) >= v.classes) {
      throw std::out_of_range("cross-entropy: target id " + std::to_string(targets[b]) +
                              " outside [0, " + std::to_string(v.classes) + ")");
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < v.classes; ++c) sum += probs[b * v.classes + c];
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("cross-entropy: posterior row " + std::to_string(b) +
                                  " sums to " + std::to_string(sum));
    }
  }
  return v;
}

}  // namespace

double weighted_cross_entropy(const Tensor& probs, std::span<const int> targets,
                              std::span<const double> weights) {
  const View v = check(probs, targets, weights);
  double total = 0.0;
  for (std::size_t b = 0; b < v.batch; ++b) {
    const std::size_t y = static_cast<std::size_t>(targets[b]);
    const double w = weights.empty() ? 1.0 : weights[y];
    const double p = std::max(probs[b * v.classes + y], kLogClamp);
    total += w * -std::log(p);
  }
  return total / static_cast<double>(v.batch);
}

Tensor weighted_cross_entropy_grad(const Tensor& probs,
                                   std::span<const int> targets,
                                   std::span<const double> weights) {
  const View v = check(probs, targets, weights);
  Tensor grad(probs.shape());
  for (std::size_t b = 0; b < v.batch; ++b) {
    const std::size_t y = static_cast<std::size_t>(targets[b]);
    const double w = weights.empty() ? 1.0 : weights[y];
    const double p = probs[b * v.classes + y];
    if (p > kLogClamp) {
      grad[b * v.classes + y] = -w / (p * static_cast<double>(v.batch));
    }
  }
  return grad;
}

}  // namespace intentrec::nn
