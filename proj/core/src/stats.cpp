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

#include "intentrec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "intentrec/error.hpp"

namespace intentrec {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation inputs differ in length (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw DataError("correlation needs at least 3 samples");
}

double raw_pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) return 1.0;
  const double df = static_cast<double>(n - 2);
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const double r = raw_pearson(x, y);
  return {r, correlation_p_value(r, x.size()), x.size()};
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const auto rx = fractional_ranks(x), ry = fractional_ranks(y);
  const double rho = raw_pearson(rx, ry);
  return {rho, correlation_p_value(rho, x.size()), x.size()};
}

double permutation_p_value(std::span<const double> x, std::span<const double> y, bool rank_based) {
  check_inputs(x, y);
  if (x.size() > 10) throw std::invalid_argument("exact permutation test is limited to n <= 10");
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  if (rank_based) {
    xs = fractional_ranks(x);
    ys = fractional_ranks(y);
  }
  const double observed = std::abs(raw_pearson(xs, ys));
  std::vector<std::size_t> perm(ys.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> permuted(ys.size());
  std::size_t hits = 0, total = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) permuted[i] = ys[perm[i]];
    if (std::abs(raw_pearson(xs, permuted)) >= observed - 1e-12) ++hits;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace intentrec
