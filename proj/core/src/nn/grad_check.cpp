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

#include "intentrec/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "intentrec/error.hpp"
#include "intentrec/nn/loss.hpp"

namespace intentrec::nn {

namespace {

double batch_loss(const Sequential& net, std::span<const Tensor> inputs,
                  std::span<const int> targets, std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    const Tensor probs = net.infer(inputs[b]);
    total += weighted_cross_entropy(probs, targets.subspan(b, 1), weights);
  }
  return total / static_cast<double>(inputs.size());
}

void update(GradCheckEntry& e, double analytic, double numeric, double floor) {
  const double abs_err = std::abs(analytic - numeric);
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  e.max_abs_error = std::max(e.max_abs_error, abs_err);
  e.max_rel_error = std::max(e.max_rel_error, abs_err / denom);
  ++e.count;
}

}  // namespace

GradCheckReport grad_check(Sequential& net, std::span<const Tensor> inputs,
                           std::span<const int> targets,
                           std::span<const double> class_weights,
                           const GradCheckOptions& options) {
  if (inputs.empty() || inputs.size() != targets.size()) {
    throw std::invalid_argument("grad_check: need one target per input and a non-empty batch");
  }
  net.for_each_layer([](const Layer& l) {
    if (l.kind() == LayerKind::kDropout && static_cast<const Dropout&>(l).rate() > 0.0) {
      throw std::invalid_argument(
          "grad_check: dropout layer '" + l.name() +
          "' is active (p > 0); the loss is stochastic, rebuild with p = 0");
    }
  });

  // Analytic pass.
  net.zero_grad();
  const double scale = 1.0 / static_cast<double>(inputs.size());
  std::vector<Tensor> input_grads;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    const Tensor probs = net.forward(inputs[b], Mode::kTrain);
    Tensor g = weighted_cross_entropy_grad(probs, targets.subspan(b, 1), class_weights);
    for (double& v : g.values()) v *= scale;
    input_grads.push_back(net.backward(g));
  }

  GradCheckReport report;
  report.tolerance = options.tolerance;
  const double eps = options.epsilon;

  for (Parameter* p : net.parameters()) {
    GradCheckEntry entry{p->name};
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + eps;
      const double up = batch_loss(net, inputs, targets, class_weights);
      p->value[i] = saved - eps;
      const double down = batch_loss(net, inputs, targets, class_weights);
      p->value[i] = saved;
      update(entry, p->grad[i], (up - down) / (2.0 * eps), options.floor);
    }
    report.entries.push_back(entry);
  }

  if (options.check_inputs) {
    std::vector<Tensor> perturbed(inputs.begin(), inputs.end());
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      GradCheckEntry entry{"input[" + std::to_string(b) + "]"};
      for (std::size_t i = 0; i < perturbed[b].size(); ++i) {
        const double saved = perturbed[b][i];
        perturbed[b][i] = saved + eps;
        const double up = batch_loss(net, perturbed, targets, class_weights);
        perturbed[b][i] = saved - eps;
        const double down = batch_loss(net, perturbed, targets, class_weights);
        perturbed[b][i] = saved;
        update(entry, input_grads[b][i], (up - down) / (2.0 * eps), options.floor);
      }
      report.entries.push_back(entry);
    }
  }

  for (const auto& e : report.entries) {
    report.max_rel_error = std::max(report.max_rel_error, e.max_rel_error);
  }
  net.zero_grad();
  return report;
}

}  // namespace intentrec::nn
