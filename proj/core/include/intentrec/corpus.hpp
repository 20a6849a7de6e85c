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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "intentrec/text.hpp"

namespace intentrec {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct LabeledExample {
  std::string id;  // request id; row index when the source has none
  std::string text;
  std::string intent;
  std::optional<std::string> source_bot;
};

/// Labeled requests plus the label <-> class id bijection. Class ids follow
/// first appearance order; labels are case-sensitive.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledExample> examples);
  // Fixed label order; every example's intent must be listed.
  Dataset(std::vector<LabeledExample> examples, std::vector<std::string> labels);

  const std::vector<LabeledExample>& examples() const { return examples_; }
  const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }
  std::size_t size() const { return examples_.size(); }

  std::size_t num_classes() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int class_id) const { return labels_.at(static_cast<std::size_t>(class_id)); }
  int class_id(const std::string& label) const;
  std::optional<int> find_class(const std::string& label) const;
  // Class id of example i.
  int target(std::size_t i) const { return targets_[i]; }
  const std::vector<int>& targets() const { return targets_; }

  std::vector<std::size_t> class_counts() const;

 private:
  std::vector<LabeledExample> examples_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> targets_;
};

enum class DataFormat { kCsv, kJsonl };

struct LoadOptions {
  DataFormat format = DataFormat::kCsv;
  std::string text_field = "text";
  std::string label_field = "intent";
  std::string id_field;      // optional; empty = use row index
  std::string source_field;  // optional
  char delimiter = ',';      // CSV only
};

struct LoadReport {
  std::size_t rows = 0;
  std::size_t rejected_empty_text = 0;     // blank after trimming
  std::size_t dropped_empty_tokens = 0;    // tokenizes to nothing
};

/// Reads a CSV (header row required, RFC-4180) or JSONL file. A record
/// missing a field raises DataError naming the line; records with empty text
/// are rejected and counted; an empty result raises "empty dataset".
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options,
                     LoadReport* report = nullptr);

struct SplitAssignment {
  std::vector<std::size_t> train_ids;
  std::vector<std::size_t> validation_ids;
  std::vector<std::size_t> test_ids;
  std::uint64_t seed = kDefaultSeed;
  double train_frac = 0.8;
  double val_frac_of_train = 0.1;

  // train + validation, ascending.
  std::vector<std::size_t> training_portion() const;
  friend bool operator==(const SplitAssignment&, const SplitAssignment&) = default;

  std::string to_json() const;
  static SplitAssignment from_json(const std::string& text);
};

/// Stratified split. Each class sends floor(n_i * train_frac) examples to
/// train, and the remaining floor(N * train_frac) - sum(floor) slots go to
/// the classes with the largest fractional remainders (smaller class first,
/// then lower id). Validation is carved out of each class's train share with
/// the same rule. Membership within a class is a seeded shuffle; all id
/// lists are sorted.
SplitAssignment stratified_split(const Dataset& d, double train_frac = 0.8,
                                 double val_frac_of_train = 0.1,
                                 std::uint64_t seed = kDefaultSeed);

/// Largest-remainder allocation used by stratified_split: returns per-class
/// counts of floor(total * frac) items drawn from classes of size `counts`.
std::vector<std::size_t> allocate_stratified(std::span<const std::size_t> counts,
                                             double frac);

struct ClassWeights {
  std::vector<double> weights;
};

/// w_i = N / (C * n_i) from per-class training counts.
ClassWeights class_weights_from_counts(std::span<const std::size_t> counts);

/// Class weights over the split's train ids. Throws DataError naming any
/// class with no training example.
ClassWeights compute_class_weights(const Dataset& d, const SplitAssignment& split);

struct TokenLengthStats {
  std::vector<std::size_t> histogram;  // histogram[len] = number of requests
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
  std::vector<std::size_t> sorted_lengths;

  /// Nearest-rank percentile: the ceil(p/100 * n)-th smallest length.
  std::size_t percentile(double p) const;
};

TokenLengthStats length_stats(std::vector<std::size_t> lengths);

/// Token counts over the split's train ids.
TokenLengthStats token_length_stats(const Dataset& d, const SplitAssignment& split,
                                    const Tokenizer& tokenizer = tokenize);

struct SummaryRow {
  std::string intent;
  std::size_t n_train = 0;  // train + validation
  std::size_t n_test = 0;
  double words_mean = 0.0, words_std = 0.0;
  double tokens_mean = 0.0, tokens_std = 0.0;

  std::size_t total() const { return n_train + n_test; }
};

struct DatasetSummary {
  std::vector<SummaryRow> rows;  // one per class, class id order
  SummaryRow totals;             // intent = "total"

  std::string to_csv() const;
  std::string to_text() const;
};

/// Per-class counts and mean/std of whitespace words and tokenizer tokens.
DatasetSummary dataset_summary(const Dataset& d, const SplitAssignment& split,
                               const Tokenizer& tokenizer = tokenize);

}  // namespace intentrec
