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
#include <vector>

namespace intentrec {

struct Correlation {
  double coefficient = 0.0;
  double p_value = 1.0;  // two-sided, t approximation with n - 2 df
  std::size_t n = 0;
};

/// Sample Pearson r. Requires n >= 3 and non-zero variance in both inputs
/// (DataError "zero variance" otherwise).
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Pearson on fractional ranks (ties share their average rank).
Correlation spearman(std::span<const double> x, std::span<const double> y);

std::vector<double> fractional_ranks(std::span<const double> x);

/// Exact two-sided permutation p-value: the fraction of the n! orderings of
/// y whose |coefficient| reaches the observed one. Only for n <= 10.
double permutation_p_value(std::span<const double> x, std::span<const double> y, bool rank_based);

/// Two-sided p for a correlation r on n samples via t = r sqrt((n-2)/(1-r^2)).
double correlation_p_value(double r, std::size_t n);

}  // namespace intentrec
