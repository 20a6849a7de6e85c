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

#include <gtest/gtest.h>

#include <vector>

#include "fixtures.hpp"
#include "intentrec/error.hpp"
#include "intentrec/stats.hpp"

namespace intentrec {
namespace {

std::vector<double> totals() {
  return {testing::kTotals.begin(), testing::kTotals.end()};
}
std::vector<double> recalls() {
  return {testing::kRecalls.begin(), testing::kRecalls.end()};
}

// Reference values from an independent statistics package.
TEST(Correlation, PublishedRecallVersusRequests) {
  const auto s = spearman(totals(), recalls());
  EXPECT_NEAR(s.coefficient, 0.7692307692307694, 1e-12);
  EXPECT_NEAR(s.p_value, 0.0034464502618274493, 1e-9);
  EXPECT_EQ(s.n, 12u);
  const auto p = pearson(totals(), recalls());
  EXPECT_NEAR(p.coefficient, 0.27517297912017086, 1e-12);
  EXPECT_NEAR(p.p_value, 0.3866914257480178, 1e-9);
}

TEST(Correlation, PublishedRecallVersusTokens) {
  const std::vector<double> m(testing::kTokensMean.begin(), testing::kTokensMean.end());
  EXPECT_NEAR(spearman(m, recalls()).coefficient, -0.04195804195804196, 1e-12);
  EXPECT_NEAR(spearman(m, recalls()).p_value, 0.8969858708195542, 1e-9);
  EXPECT_NEAR(pearson(m, recalls()).coefficient, 0.026431020832853022, 1e-12);
  EXPECT_NEAR(pearson(m, recalls()).p_value, 0.9350154588230669, 1e-9);
}

TEST(Correlation, SpearmanFromSquaredRankDifferences) {
  // no ties: rho = 1 - 6 sum d^2 / (n (n^2 - 1))
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 1, 4, 3, 5};
  EXPECT_NEAR(spearman(x, y).coefficient, 1 - 6.0 * 4 / (5 * 24), 1e-15);
}

TEST(Correlation, Invariances) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6}, y{3, 1, 4, 1, 5, 9};
  std::vector<double> ex;
  for (double v : x) ex.push_back(std::exp(v));
  EXPECT_NEAR(spearman(ex, y).coefficient, spearman(x, y).coefficient, 1e-15);
  std::vector<double> ax;
  for (double v : x) ax.push_back(3 * v - 7);
  EXPECT_NEAR(pearson(ax, y).coefficient, pearson(x, y).coefficient, 1e-12);
  EXPECT_NEAR(pearson(x, x).coefficient, 1.0, 1e-15);
}

TEST(Correlation, TiesUseAverageRanks) {
  const std::vector<double> x{10, 20, 20, 30};
  EXPECT_EQ(fractional_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(Correlation, Errors) {
  const std::vector<double> a{1, 2, 3}, b{1, 2}, flat{2, 2, 2};
  EXPECT_THROW(pearson(a, b), std::invalid_argument);
  EXPECT_THROW(pearson(b, b), DataError);
  try {
    pearson(a, flat);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
  }
  EXPECT_THROW(spearman(flat, a), DataError);
}

TEST(Correlation, PValueBounds) {
  EXPECT_NEAR(correlation_p_value(0.0, 10), 1.0, 1e-12);
  EXPECT_LT(correlation_p_value(0.99, 10), 1e-6);
  EXPECT_EQ(correlation_p_value(1.0, 10), 0.0);
}

TEST(Correlation, ExactPermutationAgreesRoughlyWithT) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8}, y{2, 1, 4, 3, 6, 5, 8, 7};
  const double exact = permutation_p_value(x, y, true);
  EXPECT_GT(exact, 0.0);
  EXPECT_LT(exact, 0.01);
  EXPECT_THROW(permutation_p_value(std::vector<double>(11, 1.0), std::vector<double>(11, 1.0), true),
               std::invalid_argument);
}

}  // namespace
}  // namespace intentrec
