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
#include <string>
#include <vector>

#include "intentrec/nn/layers.hpp"

namespace intentrec::nn {

struct GradCheckEntry {
  std::string name;  // parameter name, or "input[b]" for input gradients
  std::size_t count = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_rel_error < tolerance; }
};

struct GradCheckOptions {
  double tolerance = 1e-4;
  double epsilon = 1e-5;
  // Denominator floor for the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  bool check_inputs = true;
};

/// Compares the analytic gradients of the class-weighted cross-entropy of
/// `net` (which must end in a Softmax) against central differences, for every
/// parameter tensor and optionally for every input element.
///
/// Refuses (std::invalid_argument) any network containing a Dropout with
/// p > 0, because the loss would not be a deterministic function of the
/// parameters.
GradCheckReport grad_check(Sequential& net, std::span<const Tensor> inputs,
                           std::span<const int> targets,
                           std::span<const double> class_weights = {},
                           const GradCheckOptions& options = {});

}  // namespace intentrec::nn
