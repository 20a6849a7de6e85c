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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "intentrec/corpus.hpp"
#include "intentrec/metrics.hpp"
#include "intentrec/pipeline.hpp"

namespace intentrec {

/// Library version, with the git description of the source tree when known.
std::string version_string();

// Fixed column orders:
//   metrics.csv    metric,value               (accuracy, uar, macro_f)
//   per_class.csv  intent,precision,recall,f1,support
//   confusion.csv  true\pred,<label...>       (rows = true class)
//   confusion_normalized.csv                   same layout, row-normalised
//   history.csv    epoch,train_loss,train_accuracy,val_accuracy,val_uar
//   scatter.csv    intent,requests,mean_tokens,recall
// Reals are written with 17 significant digits so they re-parse exactly.
std::string metrics_csv(const EvalReport& r);
std::string per_class_csv(const EvalReport& r);
std::string confusion_csv(const EvalReport& r);
std::string confusion_normalized_csv(const EvalReport& r);
std::string scatter_csv(const RecallCorrelations& c);
std::string correlations_json(const RecallCorrelations& c);

std::string confusion_svg(const EvalReport& r);
std::string histogram_svg(const TokenLengthStats& stats, const std::string& title);
std::string scatter_svg(const std::vector<ScatterPoint>& points, bool x_is_requests,
                        const std::string& title);

/// Rebuilds an EvalReport from metrics.csv, per_class.csv and confusion.csv.
EvalReport read_report(const std::filesystem::path& dir);

struct ReportInputs {
  const EvalReport* report = nullptr;
  const TrainHistory* history = nullptr;
  const TokenLengthStats* token_stats = nullptr;
  const RecallCorrelations* correlations = nullptr;
  std::string config_json;  // embedded verbatim in the manifest
  std::uint64_t seed = kDefaultSeed;
};

/// Writes every artifact available in `in` under `dir` (created if needed)
/// and returns the file names written, manifest.json last. Throws
/// std::runtime_error when the directory cannot be written.
std::vector<std::string> emit_report(const std::filesystem::path& dir, const ReportInputs& in);

}  // namespace intentrec
