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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intentrec/embeddings.hpp"
#include "intentrec/models.hpp"
#include "intentrec/pipeline.hpp"
#include "intentrec/text.hpp"

namespace intentrec {

inline constexpr std::string_view kBundleFormatVersion = "1";

/// Everything needed to predict from raw text without the training data.
struct ModelBundle {
  ModelGraph model;
  std::shared_ptr<const Vocabulary> vocab;
  std::optional<EmbeddingMatrix> embeddings;  // empty: contextual inputs
  std::vector<std::string> labels;            // class id -> intent
  RunConfig run;                              // split, seed and training settings
  std::string version;                        // library that wrote the bundle

  bool contextual() const { return !embeddings.has_value(); }
  std::size_t seq_len() const { return model.config.seq_len; }

  /// Throws ShapeError when the parts disagree on dimensions.
  void validate() const;
};

/// Single-file container:
///   "INTENTRB" | u64 manifest length | JSON manifest | f64 sections | u32 crc32
/// All integers and reals little-endian. The checksum covers every byte
/// before it.
std::string serialize_bundle(const ModelBundle& b);
ModelBundle deserialize_bundle(std::string_view bytes);

void save_bundle(const ModelBundle& b, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

struct Prediction {
  int class_id = 0;
  std::string intent;
  double posterior = 0.0;
  std::vector<std::pair<std::string, double>> top_k;  // descending
};

/// Top-k from a posterior vector; ties go to the lower class id.
Prediction rank_posterior(const Tensor& probs, const std::vector<std::string>& labels,
                          std::size_t top_k);

/// Tokenise, encode and embed `text` with the bundle's vocabulary. Throws
/// std::logic_error for contextual bundles, which cannot embed plain text.
Tensor text_input(const ModelBundle& b, std::string_view text);

Prediction predict_text(const ModelBundle& b, std::string_view text, std::size_t top_k = 1);

/// Model inputs for dataset rows `ids`, encoded the way the bundle was
/// trained. Contextual bundles read their rows from `store`.
LabeledInputs bundle_inputs(const ModelBundle& b, const Dataset& d,
                            std::span<const std::size_t> ids,
                            const ContextualStore* store = nullptr);

/// Prediction from a precomputed (L, d) input, e.g. a contextual sidecar row.
Prediction predict_input(const ModelBundle& b, const Tensor& input, std::size_t top_k = 1);

}  // namespace intentrec
