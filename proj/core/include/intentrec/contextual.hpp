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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "intentrec/tensor.hpp"

namespace intentrec {

/// Precomputed per-request contextual embeddings, word aligned (sub-word
/// pieces are mean-pooled into their word before export).
///
/// File layout (all integers little-endian):
///   "ICTX"                      magic
///   u32 version = 1
///   u64 n                       byte length of the JSON index
///   n bytes                     JSON index: {"format", "version", "dim",
///                               "dtype": "float32", "count",
///                               "records": [{"id", "offset", "length"}]}
///   records, each:              u32 id_len, id bytes, u32 L, u32 d,
///                               L*d float32 row-major
/// Record offsets are relative to the first byte after the index.
struct ContextualStore {
  std::size_t dim = 0;
  std::map<std::string, Tensor> records;  // id -> (L_i, dim)
};

void write_contextual(const std::filesystem::path& path, const ContextualStore& store);
ContextualStore load_contextual(const std::filesystem::path& path);

/// Tensors for `ids`, each padded with zero rows or truncated to (L, dim).
/// Throws DataError listing every missing id.
std::vector<Tensor> contextual_inputs(const ContextualStore& store,
                                      std::span<const std::string> ids, std::size_t padded_length);

/// Pads with zero rows or truncates the leading axis to `length`.
Tensor pad_rows(const Tensor& t, std::size_t length);

}  // namespace intentrec
