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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace intentrec {

/// NFC, lowercase, Unicode punctuation replaced by spaces, whitespace runs
/// collapsed, ends trimmed. Accents are kept. Invalid UTF-8 bytes are
/// replaced with U+FFFD.
std::string normalize(std::string_view text);

/// Whitespace split of normalize(text).
std::vector<std::string> tokenize(std::string_view text);

using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

/// Token <-> id bijection with PAD = 0 and UNK = 1 reserved.
///
/// Corpus tokens are ordered by descending frequency, ties broken
/// lexicographically (byte order). Reserved spellings contain brackets, which
/// normalization always strips, so they cannot collide with corpus tokens.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr std::size_t kReserved = 2;
  static constexpr std::string_view kPadToken = "[PAD]";
  static constexpr std::string_view kUnkToken = "[UNK]";

  Vocabulary();

  /// Counts tokens over `sequences` (the training split only) and keeps those
  /// seen at least `min_count` times. Throws DataError when no tokens exist.
  static Vocabulary build(std::span<const std::vector<std::string>> sequences,
                          std::size_t min_count = 1);

  /// Vocabulary from an explicit corpus-token list (ids assigned in order).
  static Vocabulary from_tokens(std::vector<std::string> tokens,
                                std::size_t min_count = 1);

  std::size_t size() const { return tokens_.size(); }
  std::size_t min_count() const { return min_count_; }

  // UNK id for out-of-vocabulary tokens.
  int id(std::string_view token) const;
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Text persistence: a header line, then one corpus token per line; the
  /// token on line i (0-based, after the header) has id i + 2.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);
  std::string serialize() const;
  static Vocabulary deserialize(std::string_view text);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.min_count_ == b.min_count_;
  }

 private:
  void push(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  std::size_t min_count_ = 1;
};

struct EncodedSequence {
  std::vector<int> ids;  // fixed length L
  std::size_t true_length = 0;

  std::size_t padded_length() const { return ids.size(); }
  friend bool operator==(const EncodedSequence&, const EncodedSequence&) = default;
};

/// Maps tokens to ids (UNK for unknown), keeps the first `padded_length`
/// and right-pads with PAD. Total: never fails for L >= 1.
EncodedSequence encode(std::span<const std::string> tokens, const Vocabulary& vocab,
                       std::size_t padded_length);

/// Tokens for the first true_length ids.
std::vector<std::string> decode(const EncodedSequence& seq, const Vocabulary& vocab);

}  // namespace intentrec
