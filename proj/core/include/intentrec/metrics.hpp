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

namespace intentrec {

/// counts[i][j] = number of samples with true class i predicted as j.
struct ConfusionMatrix {
  std::vector<std::vector<std::size_t>> counts;

  std::size_t classes() const { return counts.size(); }
  std::size_t total() const;
  std::size_t support(std::size_t cls) const;
  /// Rows divided by their support; rows without support stay zero.
  std::vector<std::vector<double>> row_normalized() const;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 std::size_t classes);

/// Classification metrics for one model on one split.
///
/// Per-class precision, recall and F1 use 0/0 -> 0. UAR is the mean recall
/// over classes with support; macro-F is the mean F1 over classes that occur
/// in the truth or the predictions.
struct EvalReport {
  std::vector<std::string> labels;
  double accuracy = 0.0;
  double uar = 0.0;
  double macro_f = 0.0;
  std::vector<double> precision, recall, f1;
  std::vector<std::size_t> support;
  ConfusionMatrix confusion;

  friend bool operator==(const EvalReport& a, const EvalReport& b) {
    return a.labels == b.labels && a.accuracy == b.accuracy && a.uar == b.uar &&
           a.macro_f == b.macro_f && a.precision == b.precision && a.recall == b.recall &&
           a.f1 == b.f1 && a.support == b.support && a.confusion.counts == b.confusion.counts;
  }
};

EvalReport report_from_confusion(ConfusionMatrix cm, std::vector<std::string> labels = {});
EvalReport compute_report(std::span<const int> truth, std::span<const int> predicted,
                          std::size_t classes, std::vector<std::string> labels = {});

}  // namespace intentrec
