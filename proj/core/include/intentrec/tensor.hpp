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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace intentrec {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);
std::size_t shape_size(const Shape& shape);

/// Dense row-major array of doubles.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor vector(std::initializer_list<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::initializer_list<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& storage() { return values_; }
  const std::vector<double>& storage() const { return values_; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Rank-2 access.
  double& at(std::size_t r, std::size_t c) { return values_[r * shape_[1] + c]; }
  double at(std::size_t r, std::size_t c) const {
    return values_[r * shape_[1] + c];
  }
  std::span<double> row(std::size_t r) {
    return {values_.data() + r * shape_[1], shape_[1]};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * shape_[1], shape_[1]};
  }

  void fill(double v);
  // Shape change preserving element count.
  Tensor reshaped(Shape shape) const;
  bool all_finite() const;
  std::string shape_string() const { return shape_to_string(shape_); }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

}  // namespace intentrec
