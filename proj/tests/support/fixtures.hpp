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

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "intentrec/corpus.hpp"

namespace intentrec::testing {

// Published per-intent figures for the Spanish customer-service corpus, in
// the order Others, Salutation, YesNo, Switch, ChangePw, FAQs, Farewell,
// Attention, Positive, Help, PCC, NegativeComments.
inline constexpr std::array<const char*, 12> kIntents = {
    "Others", "Salutation", "YesNo", "Switch", "ChangePw", "FAQs",
    "Farewell", "Attention", "Positive", "Help", "PCC", "NegativeComments"};
inline constexpr std::array<std::size_t, 12> kTotals = {
    314377, 90130, 37222, 32033, 13743, 8172, 7254, 1685, 984, 541, 426, 256};
inline constexpr std::array<std::size_t, 12> kTrainCounts = {
    251501, 72104, 29778, 25626, 10994, 6538, 5803, 1348, 787, 433, 341, 205};
inline constexpr std::array<std::size_t, 12> kTestCounts = {
    62876, 18026, 7444, 6407, 2749, 1634, 1451, 337, 197, 108, 85, 51};
inline constexpr std::array<double, 12> kRecalls = {
    87.9, 91.3, 98.5, 94.2, 93.8, 86.1, 59.5, 84.0, 80.2, 42.5, 82.3, 64.7};
inline constexpr std::array<double, 12> kTokensMean = {
    5.6, 3.6, 1.1, 6.5, 7.2, 3.3, 2.4, 10.9, 3.1, 4.2, 6.7, 8.5};

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("intentrec-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Toy intent corpus: each class has its own keyword pool plus shared filler
/// words, so a small model can separate the classes but not trivially.
inline Dataset toy_dataset(std::size_t classes, std::size_t per_class, std::uint64_t seed,
                           std::size_t keywords = 4) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> filler = {"please", "now", "the", "my", "i", "want", "to", "a"};
  std::vector<LabeledExample> ex;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::string text;
      const std::size_t len = 2 + rng() % 4;
      for (std::size_t t = 0; t < len; ++t) {
        if (!text.empty()) text += ' ';
        if (t == 0 || rng() % 2 == 0) {
          text += "k" + std::to_string(c) + "w" + std::to_string(rng() % keywords);
        } else {
          text += filler[rng() % filler.size()];
        }
      }
      ex.push_back({std::to_string(ex.size()), text, "intent" + std::to_string(c), std::nullopt});
    }
  }
  std::shuffle(ex.begin(), ex.end(), rng);
  for (std::size_t i = 0; i < ex.size(); ++i) ex[i].id = std::to_string(i);
  return Dataset(std::move(ex));
}

inline std::string to_csv(const Dataset& d) {
  std::string s = "id,text,intent\n";
  for (const auto& e : d.examples()) s += e.id + "," + e.text + "," + e.intent + "\n";
  return s;
}

}  // namespace intentrec::testing
