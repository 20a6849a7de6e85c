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

#include "intentrec/metrics.hpp"

#include <numeric>
#include <stdexcept>

#include "intentrec/error.hpp"

namespace intentrec {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return n;
}

std::size_t ConfusionMatrix::support(std::size_t cls) const {
  return std::accumulate(counts[cls].begin(), counts[cls].end(), std::size_t{0});
}

std::vector<std::vector<double>> ConfusionMatrix::row_normalized() const {
  std::vector<std::vector<double>> out(classes(), std::vector<double>(classes(), 0.0));
  for (std::size_t i = 0; i < classes(); ++i) {
    const std::size_t s = support(i);
    if (s == 0) continue;
    for (std::size_t j = 0; j < classes(); ++j) {
      out[i][j] = static_cast<double>(counts[i][j]) / static_cast<double>(s);
    }
  }
  return out;
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 std::size_t classes) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("confusion matrix: " + std::to_string(truth.size()) + " labels vs " +
                                std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm{std::vector<std::vector<std::size_t>>(classes, std::vector<std::size_t>(classes, 0))};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i], p = predicted[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= classes ||
        static_cast<std::size_t>(p) >= classes) {
      throw std::out_of_range("confusion matrix: class id outside [0, " + std::to_string(classes) +
                              ") at sample " + std::to_string(i));
    }
    ++cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  return cm;
}

EvalReport report_from_confusion(ConfusionMatrix cm, std::vector<std::string> labels) {
  const std::size_t C = cm.classes();
  const std::size_t total = cm.total();
  if (total == 0) throw DataError("cannot evaluate an empty split");
  EvalReport r;
  r.labels = std::move(labels);
  r.precision.assign(C, 0.0);
  r.recall.assign(C, 0.0);
  r.f1.assign(C, 0.0);
  r.support.assign(C, 0);
  std::vector<std::size_t> predicted(C, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < C; ++i) {
    correct += cm.counts[i][i];
    for (std::size_t j = 0; j < C; ++j) {
      r.support[i] += cm.counts[i][j];
      predicted[j] += cm.counts[i][j];
    }
  }
  double recall_sum = 0.0, f_sum = 0.0;
  std::size_t with_support = 0, active = 0;
  for (std::size_t i = 0; i < C; ++i) {
    const double tp = static_cast<double>(cm.counts[i][i]);
    if (predicted[i] > 0) r.precision[i] = tp / static_cast<double>(predicted[i]);
    if (r.support[i] > 0) r.recall[i] = tp / static_cast<double>(r.support[i]);
    const double pr = r.precision[i] + r.recall[i];
    if (pr > 0.0) r.f1[i] = 2.0 * r.precision[i] * r.recall[i] / pr;
    if (r.support[i] > 0) {
      recall_sum += r.recall[i];
      ++with_support;
    }
    if (r.support[i] > 0 || predicted[i] > 0) {
      f_sum += r.f1[i];
      ++active;
    }
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  r.uar = recall_sum / static_cast<double>(with_support);
  r.macro_f = f_sum / static_cast<double>(active);
  r.confusion = std::move(cm);
  return r;
}

EvalReport compute_report(std::span<const int> truth, std::span<const int> predicted,
                          std::size_t classes, std::vector<std::string> labels) {
  return report_from_confusion(confusion_matrix(truth, predicted, classes), std::move(labels));
}

}  // namespace intentrec
