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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "intentrec/tensor.hpp"
#include "intentrec/text.hpp"

namespace intentrec {

/// (V, d) table of word vectors aligned with a Vocabulary. Row 0 (PAD) is
/// always zero.
struct EmbeddingMatrix {
  std::shared_ptr<const Vocabulary> vocab;
  Tensor table;

  std::size_t rows() const { return table.rank() == 2 ? table.dim(0) : 0; }
  std::size_t dim() const { return table.rank() == 2 ? table.dim(1) : 0; }
  std::span<const double> row(int id) const { return table.row(static_cast<std::size_t>(id)); }

  // Throws on a non-zero PAD row, a shape/vocabulary mismatch or non-finite values.
  void validate() const;
};

struct CBOWConfig {
  std::size_t window = 4;          // context tokens per side
  bool window_is_total = false;    // treat `window` as a whole-window count
  std::size_t dim = 100;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.025;
  std::size_t min_count = 1;
  std::uint64_t seed = 42;

  /// Tokens considered on each side of the centre word.
  std::size_t per_side() const;
};

struct CBOWResult {
  EmbeddingMatrix embeddings;
  std::vector<double> epoch_loss;  // mean negative-sampling loss per epoch
};

/// CBOW with negative sampling. For every position the mean of the input
/// vectors of up to per_side() tokens on each side (clipped at the sentence
/// boundaries) predicts the centre word against `negatives` draws from the
/// unigram^0.75 distribution. Tokens outside the vocabulary are dropped
/// before windowing. Returns the input-side table; PAD and UNK rows are zero.
///
/// When `vocab` is null it is built from `corpus` with config.min_count.
CBOWResult train_cbow(std::span<const std::vector<std::string>> corpus,
                      const CBOWConfig& config,
                      std::shared_ptr<const Vocabulary> vocab = nullptr);

enum class VectorFormat { kText, kBinary };

struct CoverageReport {
  std::size_t found = 0;
  std::size_t missing = 0;  // vocabulary tokens absent from the file (zero rows)
  std::size_t unused = 0;   // file tokens not in the vocabulary
};

/// Loads a word2vec file ("V d" header, then token + d values per entry) and
/// builds the vocabulary from the file's tokens in file order.
EmbeddingMatrix load_pretrained(const std::filesystem::path& path, VectorFormat format);

/// Loads a word2vec file and aligns it to `vocab`; vocabulary tokens missing
/// from the file get zero rows.
EmbeddingMatrix load_pretrained(const std::filesystem::path& path, VectorFormat format,
                                std::shared_ptr<const Vocabulary> vocab,
                                CoverageReport* coverage = nullptr);

/// Writes the corpus rows (reserved rows are skipped) in word2vec layout.
/// The binary layout stores float32 little-endian values.
void save_word2vec(const EmbeddingMatrix& emb, const std::filesystem::path& path,
                   VectorFormat format);

/// (L, d) lookup; PAD positions give zero rows. Throws std::out_of_range for
/// ids outside the table.
Tensor embed_sequence(const EncodedSequence& seq, const EmbeddingMatrix& emb);

struct Neighbor {
  std::string token;
  int id = 0;
  double similarity = 0.0;
};

/// Top-k tokens by cosine similarity, excluding the query, PAD and UNK; ties
/// go to the lower id. Zero vectors have similarity 0 with everything.
std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& emb, std::string_view token,
                                        std::size_t k);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace intentrec
