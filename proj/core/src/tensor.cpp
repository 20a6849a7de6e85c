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

#include "intentrec/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "intentrec/error.hpp"

namespace intentrec {

std::string shape_to_string(const Shape& shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + ")";
}

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_size(shape_)) {
    throw ShapeError("tensor of shape " + shape_to_string(shape_) + " needs " +
                     std::to_string(shape_size(shape_)) + " values, got " +
                     std::to_string(values_.size()));
  }
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<double> values) {
  return Tensor({rows, cols}, std::vector<double>(values));
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

Tensor Tensor::reshaped(Shape shape) const {
  return Tensor(std::move(shape), values_);
}

bool Tensor::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace intentrec
