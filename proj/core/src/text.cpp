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

#include "intentrec/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "intentrec/error.hpp"

namespace intentrec {

std::string normalize(std::string_view text) {
  if (text.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s = nfc->normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  s.toLower(icu::Locale::getRoot());
  // Lowercasing can produce decomposed sequences (e.g. U+0130).
  s = nfc->normalize(s, status);

  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (u_ispunct(c) || u_isUWhiteSpace(c) || u_iscntrl(c)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) {
      out.append(static_cast<UChar>(u' '));
      pending_space = false;
    }
    out.append(c);
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::vector<std::string> tokenize(std::string_view text) {
  const std::string norm = normalize(text);
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    if (end > start) tokens.emplace_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

// ---------------------------------------------------------------- Vocabulary

Vocabulary::Vocabulary() {
  push(std::string(kPadToken));
  push(std::string(kUnkToken));
}

void Vocabulary::push(std::string token) {
  const int id = static_cast<int>(tokens_.size());
  ids_.emplace(token, id);
  tokens_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> sequences,
                             std::size_t min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : sequences) {
    for (const auto& tok : seq) {
      if (tok == kPadToken || tok == kUnkToken) continue;
      ++counts[tok];
    }
  }
  if (counts.empty()) throw DataError("cannot build a vocabulary from empty training text");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary v;
  v.min_count_ = min_count;
  for (auto& [tok, n] : ranked) {
    if (n >= min_count) v.push(tok);
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens, std::size_t min_count) {
  Vocabulary v;
  v.min_count_ = min_count;
  for (auto& t : tokens) {
    if (t == kPadToken || t == kUnkToken || v.ids_.contains(t)) {
      throw DataError("vocabulary token '" + t + "' is reserved or duplicated");
    }
    v.push(std::move(t));
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  return find(token).value_or(kUnk);
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary of size " +
                            std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::string Vocabulary::serialize() const {
  std::ostringstream os;
  os << "#intentrec-vocab v1 reserved=" << kPadToken << ',' << kUnkToken
     << " min_count=" << min_count_ << " size=" << tokens_.size() << '\n';
  for (std::size_t i = kReserved; i < tokens_.size(); ++i) os << tokens_[i] << '\n';
  return os.str();
}

Vocabulary Vocabulary::deserialize(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string header;
  if (!std::getline(is, header) || header.rfind("#intentrec-vocab v1 ", 0) != 0) {
    throw FormatError("vocabulary: missing '#intentrec-vocab v1' header");
  }
  const std::string expected_reserved =
      "reserved=" + std::string(kPadToken) + "," + std::string(kUnkToken);
  if (header.find(expected_reserved) == std::string::npos) {
    throw FormatError("vocabulary: reserved tokens differ from " + expected_reserved);
  }
  std::size_t min_count = 1, size = 0;
  if (auto p = header.find("min_count="); p != std::string::npos) {
    min_count = std::stoul(header.substr(p + 10));
  }
  if (auto p = header.find("size="); p != std::string::npos) size = std::stoul(header.substr(p + 5));
  std::vector<std::string> tokens;
  for (std::string line; std::getline(is, line);) tokens.push_back(line);
  if (size != 0 && tokens.size() + kReserved != size) {
    throw FormatError("vocabulary: header declares " + std::to_string(size) + " entries, file has " +
                      std::to_string(tokens.size() + kReserved));
  }
  return from_tokens(std::move(tokens), min_count);
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write vocabulary to " + path.string());
  os << serialize();
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot read vocabulary from " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return deserialize(ss.str());
}

// ---------------------------------------------------------------- encoding

EncodedSequence encode(std::span<const std::string> tokens, const Vocabulary& vocab,
                       std::size_t padded_length) {
  if (padded_length < 1) throw std::invalid_argument("padded length must be >= 1");
  EncodedSequence seq;
  seq.ids.assign(padded_length, Vocabulary::kPad);
  seq.true_length = std::min(tokens.size(), padded_length);
  for (std::size_t i = 0; i < seq.true_length; ++i) seq.ids[i] = vocab.id(tokens[i]);
  return seq;
}

std::vector<std::string> decode(const EncodedSequence& seq, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(seq.true_length);
  for (std::size_t i = 0; i < seq.true_length; ++i) out.push_back(vocab.token(seq.ids[i]));
  return out;
}

}  // namespace intentrec
