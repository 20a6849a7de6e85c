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

#include "intentrec/nn/adam.hpp"

#include <cmath>

#include "intentrec/error.hpp"

namespace intentrec::nn {

namespace {

void ensure_moments(std::span<Parameter* const> params, AdamState& state) {
  if (state.m.size() == params.size()) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (state.m[i].shape() != params[i]->value.shape()) {
        throw ShapeError("adam: moment shape " + state.m[i].shape_string() +
                         " does not match parameter '" + params[i]->name + "' " +
                         params[i]->value.shape_string());
      }
    }
    return;
  }
  if (!state.m.empty()) {
    throw ShapeError("adam: state holds " + std::to_string(state.m.size()) +
                     " moments for " + std::to_string(params.size()) + " parameters");
  }
  for (const Parameter* p : params) {
    state.m.emplace_back(p->value.shape());
    state.v.emplace_back(p->value.shape());
  }
}

}  // namespace

void adam_step(std::span<Parameter* const> params, AdamState& state) {
  for (const Parameter* p : params) {
    if (!p->grad.all_finite()) {
      throw NumericError("adam: non-finite gradient in parameter '" + p->name + "'");
    }
  }
  ensure_moments(params, state);
  ++state.t;
  const auto& c = state.config;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad[j];
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g;
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      p.value[j] -= c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

void adam_step_rows(Parameter& table, std::span<const std::size_t> rows,
                    AdamState& state) {
  if (table.value.rank() != 2) {
    throw ShapeError("adam_step_rows: '" + table.name + "' is not a matrix");
  }
  const std::size_t width = table.value.dim(1);
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < width; ++j) {
      if (!std::isfinite(table.grad.at(r, j))) {
        throw NumericError("adam: non-finite gradient in parameter '" + table.name +
                           "' row " + std::to_string(r));
      }
    }
  }
  Parameter* one[] = {&table};
  ensure_moments(one, state);
  ++state.t;
  const auto& c = state.config;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  Tensor& m = state.m[0];
  Tensor& v = state.v[0];
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t k = r * width + j;
      const double g = table.grad[k];
      m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g;
      v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g * g;
      table.value[k] -= c.lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + c.epsilon);
    }
  }
}

}  // namespace intentrec::nn
