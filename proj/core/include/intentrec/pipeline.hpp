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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentrec/contextual.hpp"
#include "intentrec/corpus.hpp"
#include "intentrec/embeddings.hpp"
#include "intentrec/metrics.hpp"
#include "intentrec/models.hpp"
#include "intentrec/stats.hpp"

namespace intentrec {

struct TrainConfig {
  std::size_t epochs = 50;
  double lr = 1e-4;
  std::size_t batch_size = 64;
  std::uint64_t seed = kDefaultSeed;
  bool class_weighting = true;
  bool shuffle = true;
  bool trainable_embeddings = false;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Model inputs for a set of requests: either encoded sequences looked up in
/// an embedding table, or precomputed (L, d) tensors.
struct LabeledInputs {
  std::vector<EncodedSequence> sequences;
  std::vector<Tensor> dense;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool is_dense() const { return !dense.empty(); }
  Tensor input(std::size_t i, const EmbeddingMatrix* emb) const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> val_accuracy;
  std::optional<double> val_uar;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::string to_csv() const;
};

/// Mini-batch training with class-weighted cross-entropy and Adam. The final
/// model is the last epoch's. Deterministic for a fixed config. When
/// cfg.trainable_embeddings is set, `embeddings` rows seen in a batch are
/// updated (PAD stays zero). Throws NumericError naming epoch and batch when
/// the loss stops being finite.
TrainHistory train(ModelGraph& model, const LabeledInputs& train_set,
                   const LabeledInputs* validation, EmbeddingMatrix* embeddings,
                   const TrainConfig& cfg);

std::vector<int> predict_classes(const ModelGraph& model, const LabeledInputs& inputs,
                                 const EmbeddingMatrix* embeddings);

EvalReport evaluate(const ModelGraph& model, const LabeledInputs& test,
                    const EmbeddingMatrix* embeddings, std::vector<std::string> labels = {});

// ---------------------------------------------------------------- correlations

struct CorrelationResult {
  double pearson_r = 0.0, pearson_p = 1.0;
  double spearman_rho = 0.0, spearman_p = 1.0;
  std::size_t n = 0;
};

/// Either a result or the reason none exists ("zero variance", ...).
struct CorrelationOutcome {
  std::optional<CorrelationResult> result;
  std::string status = "ok";
};

CorrelationOutcome correlate(std::span<const double> x, std::span<const double> y);

struct ScatterPoint {
  std::string intent;
  double requests = 0.0;
  double mean_tokens = 0.0;
  double recall = 0.0;
};

struct RecallCorrelations {
  CorrelationOutcome vs_requests;
  CorrelationOutcome vs_tokens;
  std::vector<ScatterPoint> points;  // one per class
};

/// Per-class recall against per-class request counts and mean token counts.
RecallCorrelations analyze_recall_correlations(const EvalReport& report,
                                               std::span<const double> requests,
                                               std::span<const double> mean_tokens);

// ---------------------------------------------------------------- orchestration

enum class EmbeddingSource { kCbow, kPretrained, kContextual };

struct EmbeddingSettings {
  EmbeddingSource source = EmbeddingSource::kCbow;
  CBOWConfig cbow;
  std::string path;  // pretrained vectors or contextual sidecar
  VectorFormat format = VectorFormat::kText;
};

/// Everything needed to reproduce one train + evaluate run.
struct RunConfig {
  LoadOptions data;
  double train_frac = 0.8;
  double val_frac = 0.1;
  std::uint64_t seed = kDefaultSeed;  // split seed
  std::size_t min_count = 1;
  double pad_percentile = 95.0;
  std::size_t seq_len = 0;  // 0: derive from pad_percentile
  EmbeddingSettings embedding;
  ModelConfig model;
  TrainConfig train;

  std::string to_json() const;
  static RunConfig from_json(std::string_view text);
};

struct PreparedData {
  SplitAssignment split;
  std::shared_ptr<const Vocabulary> vocab;
  TokenLengthStats token_stats;
  std::size_t seq_len = 0;
  LabeledInputs train, validation, test;
};

/// Split, vocabulary (train ids only), padded length and encoded inputs.
PreparedData prepare_data(const Dataset& d, const RunConfig& cfg);

/// Embedding table for `prepared` (CBOW trained on the train split, or
/// pretrained vectors aligned to the vocabulary). Empty for contextual runs,
/// whose inputs are filled into `prepared` from the sidecar instead.
std::optional<EmbeddingMatrix> prepare_embeddings(const Dataset& d, PreparedData& prepared,
                                                  const RunConfig& cfg);

struct Experiment {
  PreparedData data;
  std::optional<EmbeddingMatrix> embeddings;
  ModelGraph model;
  TrainHistory history;
  EvalReport report;
};

Experiment run_experiment(const Dataset& d, RunConfig cfg);

}  // namespace intentrec
