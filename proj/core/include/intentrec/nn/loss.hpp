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

#include <span>

#include "intentrec/tensor.hpp"

namespace intentrec::nn {

inline constexpr double kLogClamp = 1e-12;

/// Class-weighted sparse categorical cross-entropy over a batch of
/// posteriors: (1/B) * sum_b w[y_b] * -log(max(p[b, y_b], 1e-12)).
/// `probs` is (B, cl) or a single (cl) row. Empty `weights` means unit weights.
double weighted_cross_entropy(const Tensor& probs, std::span<const int> targets,
                              std::span<const double> weights = {});

/// d(loss)/d(probs) for the loss above, same shape as `probs`.
Tensor weighted_cross_entropy_grad(const Tensor& probs,
                                   std::span<const int> targets,
                                   std::span<const double> weights = {});

}  // namespace intentrec::nn
