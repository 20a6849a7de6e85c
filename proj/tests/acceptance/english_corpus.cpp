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

// Trains the simple CNN with self-trained CBOW vectors on the public English
// personal-assistant corpus and checks test accuracy and UAR.
//
//   INTENTREC_ENGLISH_CORPUS       path to the semicolon-separated CSV (required)
//   INTENTREC_ENGLISH_TEXT_FIELD   default "answer"
//   INTENTREC_ENGLISH_LABEL_FIELD  default "intent"
//   INTENTREC_ENGLISH_DELIMITER    default ";"
//
// Exits 77 (skipped) when the corpus is not configured.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "intentrec/pipeline.hpp"

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

}  // namespace

int main() {
  using namespace intentrec;
  const std::string path = env_or("INTENTREC_ENGLISH_CORPUS", "");
  if (path.empty()) {
    std::printf("SKIP criterion 5: English corpus reproduction | INTENTREC_ENGLISH_CORPUS is not set\n");
    return 77;
  }

  RunConfig cfg;
  cfg.data.text_field = env_or("INTENTREC_ENGLISH_TEXT_FIELD", "answer");
  cfg.data.label_field = env_or("INTENTREC_ENGLISH_LABEL_FIELD", "intent");
  cfg.data.delimiter = env_or("INTENTREC_ENGLISH_DELIMITER", ";").front();
  cfg.embedding.source = EmbeddingSource::kCbow;
  cfg.embedding.cbow.window = 5;
  cfg.model.architecture = Architecture::kCnn;
  cfg.train.lr = 1e-4;
  cfg.train.epochs = 50;
  cfg.train.class_weighting = true;

  const auto start = std::chrono::steady_clock::now();
  try {
    LoadReport lr;
    const Dataset d = load_dataset(path, cfg.data, &lr);
    const Experiment ex = run_experiment(d, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = ex.report.accuracy >= 0.78 && ex.report.uar >= 0.68;
    std::printf("%s criterion 5: English corpus reproduction | %zu requests, %zu intents, "
                "vocabulary %zu, L=%zu, ACC %.4f, UAR %.4f (need 0.78 / 0.68) (%.0fs)\n",
                pass ? "PASS" : "FAIL", d.size(), d.num_classes(), ex.data.vocab->size(),
                ex.data.seq_len, ex.report.accuracy, ex.report.uar, secs);
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::printf("FAIL criterion 5: English corpus reproduction | %s\n", e.what());
    return 1;
  }
}
