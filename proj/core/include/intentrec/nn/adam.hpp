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
#include <vector>

#include "intentrec/nn/layers.hpp"

namespace intentrec::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

/// First/second moments per parameter (allocated on the first step) and the
/// step counter shared by the bias correction.
struct AdamState {
  AdamConfig config;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::int64_t t = 0;

  AdamState() = default;
  explicit AdamState(AdamConfig c) : config(c) {}
};

/// One bias-corrected Adam update of every parameter from its `grad`.
/// Throws NumericError naming the first parameter with a non-finite gradient;
/// nothing is updated in that case.
void adam_step(std::span<Parameter* const> params, AdamState& state);

/// Adam restricted to rows of a rank-2 table (lazy/sparse variant). Rows not
/// listed keep both their value and their moments.
void adam_step_rows(Parameter& table, std::span<const std::size_t> rows,
                    AdamState& state);

}  // namespace intentrec::nn
