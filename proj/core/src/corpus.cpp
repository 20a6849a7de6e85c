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

#include "intentrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "intentrec/csv.hpp"
#include "intentrec/error.hpp"

namespace intentrec {

using nlohmann::json;

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(std::vector<LabeledExample> examples) : examples_(std::move(examples)) {
  targets_.reserve(examples_.size());
  for (const auto& ex : examples_) {
    auto [it, inserted] = index_.emplace(ex.intent, static_cast<int>(labels_.size()));
    if (inserted) labels_.push_back(ex.intent);
    targets_.push_back(it->second);
  }
}

Dataset::Dataset(std::vector<LabeledExample> examples, std::vector<std::string> labels)
    : examples_(std::move(examples)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate label '" + labels_[i] + "'");
    }
  }
  targets_.reserve(examples_.size());
  for (const auto& ex : examples_) targets_.push_back(class_id(ex.intent));
}

int Dataset::class_id(const std::string& label) const {
  if (auto id = find_class(label)) return *id;
  throw DataError("unknown intent label '" + label + "'");
}

std::optional<int> Dataset::find_class(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(labels_.size(), 0);
  for (int t : targets_) ++counts[static_cast<std::size_t>(t)];
  return counts;
}

// ---------------------------------------------------------------- loading

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

struct RawRow {
  std::size_t line;
  std::string id, text, label;
  std::optional<std::string> source;
};

std::vector<RawRow> read_csv_rows(std::istream& in, const LoadOptions& opt) {
  csv::Reader reader(in, opt.delimiter);
  csv::Record header;
  if (!reader.next(header)) return {};
  auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      std::string f = header.fields[i];
      if (i == 0 && f.rfind("\xEF\xBB\xBF", 0) == 0) f = f.substr(3);
      if (f == name) return i;
    }
    if (required) {
      throw DataError("line " + std::to_string(header.line) + ": header has no column '" + name + "'");
    }
    return std::nullopt;
  };
  const auto text_col = *column(opt.text_field, true);
  const auto label_col = *column(opt.label_field, true);
  const auto id_col = column(opt.id_field, true);
  const auto src_col = column(opt.source_field, true);

  std::vector<RawRow> rows;
  csv::Record rec;
  while (reader.next(rec)) {
    auto get = [&](std::size_t col, const std::string& name) -> std::string {
      if (col >= rec.fields.size()) {
        throw DataError("line " + std::to_string(rec.line) + ": record is missing field '" +
                        name + "'");
      }
      return rec.fields[col];
    };
    RawRow row{rec.line, {}, get(text_col, opt.text_field), get(label_col, opt.label_field), {}};
    if (id_col) row.id = get(*id_col, opt.id_field);
    if (src_col) row.source = get(*src_col, opt.source_field);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string field_string(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::vector<RawRow> read_jsonl_rows(std::istream& in, const LoadOptions& opt) {
  std::vector<RawRow> rows;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("line " + std::to_string(n) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError("line " + std::to_string(n) + ": expected a JSON object");
    auto get = [&](const std::string& name) -> std::string {
      auto it = obj.find(name);
      if (it == obj.end() || it->is_null()) {
        throw DataError("line " + std::to_string(n) + ": record is missing field '" + name + "'");
      }
      return field_string(*it);
    };
    RawRow row{n, {}, get(opt.text_field), get(opt.label_field), {}};
    if (!opt.id_field.empty()) row.id = get(opt.id_field);
    if (!opt.source_field.empty()) row.source = get(opt.source_field);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options,
                     LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path.string());
  std::vector<RawRow> rows = options.format == DataFormat::kCsv ? read_csv_rows(in, options)
                                                                 : read_jsonl_rows(in, options);
  LoadReport rep;
  rep.rows = rows.size();
  std::vector<LabeledExample> examples;
  examples.reserve(rows.size());
  for (auto& row : rows) {
    if (is_blank(row.label)) {
      throw DataError("line " + std::to_string(row.line) + ": empty intent label");
    }
    if (is_blank(row.text)) {
      ++rep.rejected_empty_text;
      continue;
    }
    if (tokenize(row.text).empty()) {
      ++rep.dropped_empty_tokens;
      continue;
    }
    LabeledExample ex;
    ex.id = row.id.empty() ? std::to_string(examples.size()) : row.id;
    ex.text = std::move(row.text);
    ex.intent = std::move(row.label);
    ex.source_bot = std::move(row.source);
    examples.push_back(std::move(ex));
  }
  if (report) *report = rep;
  if (examples.empty()) throw DataError("empty dataset: " + path.string());
  return Dataset(std::move(examples));
}

// ---------------------------------------------------------------- splitting

std::vector<std::size_t> SplitAssignment::training_portion() const {
  std::vector<std::size_t> out = train_ids;
  out.insert(out.end(), validation_ids.begin(), validation_ids.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string SplitAssignment::to_json() const {
  json j;
  j["seed"] = seed;
  j["train_frac"] = train_frac;
  j["val_frac_of_train"] = val_frac_of_train;
  j["train_ids"] = train_ids;
  j["validation_ids"] = validation_ids;
  j["test_ids"] = test_ids;
  return j.dump();
}

SplitAssignment SplitAssignment::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    SplitAssignment s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.train_frac = j.at("train_frac").get<double>();
    s.val_frac_of_train = j.at("val_frac_of_train").get<double>();
    s.train_ids = j.at("train_ids").get<std::vector<std::size_t>>();
    s.validation_ids = j.at("validation_ids").get<std::vector<std::size_t>>();
    s.test_ids = j.at("test_ids").get<std::vector<std::size_t>>();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("split file: ") + e.what());
  }
}

std::vector<std::size_t> allocate_stratified(std::span<const std::size_t> counts, double frac) {
  // The epsilon keeps exact products such as 50 * 0.8 from flooring to 39.
  auto floor_of = [](double x) { return static_cast<std::size_t>(std::floor(x + 1e-9)); };
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  const std::size_t target = floor_of(static_cast<double>(total) * frac);
  std::vector<std::size_t> alloc(counts.size());
  std::vector<double> remainder(counts.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double exact = static_cast<double>(counts[i]) * frac;
    alloc[i] = std::min(floor_of(exact), counts[i]);
    remainder[i] = std::max(0.0, exact - static_cast<double>(alloc[i]));
    assigned += alloc[i];
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(remainder[a] - remainder[b]) > 1e-9) return remainder[a] > remainder[b];
    if (counts[a] != counts[b]) return counts[a] < counts[b];
    return a < b;
  });
  for (std::size_t k = 0; assigned < target && k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (alloc[i] < counts[i] && remainder[i] > 1e-9) {
      ++alloc[i];
      ++assigned;
    }
  }
  return alloc;
}

SplitAssignment stratified_split(const Dataset& d, double train_frac, double val_frac_of_train,
                                 std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw std::invalid_argument("train_frac must be in (0, 1)");
  }
  if (!(val_frac_of_train >= 0.0 && val_frac_of_train < 1.0)) {
    throw std::invalid_argument("val_frac_of_train must be in [0, 1)");
  }
  const std::size_t C = d.num_classes();
  std::vector<std::vector<std::size_t>> members(C);
  for (std::size_t i = 0; i < d.size(); ++i) {
    members[static_cast<std::size_t>(d.target(i))].push_back(i);
  }
  for (std::size_t c = 0; c < C; ++c) {
    if (members[c].size() < 2) {
      throw DataError("class too small: '" + d.label(static_cast<int>(c)) + "' has " +
                      std::to_string(members[c].size()) +
                      " example(s); a stratified split needs at least 2");
    }
  }
  std::vector<std::size_t> counts(C);
  for (std::size_t c = 0; c < C; ++c) counts[c] = members[c].size();
  const auto n_train = allocate_stratified(counts, train_frac);
  const auto n_val = allocate_stratified(n_train, val_frac_of_train);

  std::mt19937_64 rng(seed);
  SplitAssignment s;
  s.seed = seed;
  s.train_frac = train_frac;
  s.val_frac_of_train = val_frac_of_train;
  for (std::size_t c = 0; c < C; ++c) {
    auto& m = members[c];
    std::shuffle(m.begin(), m.end(), rng);
    // After the shuffle: [0, n_val) validation, [n_val, n_train) train, rest test.
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k < n_val[c]) {
        s.validation_ids.push_back(m[k]);
      } else if (k < n_train[c]) {
        s.train_ids.push_back(m[k]);
      } else {
        s.test_ids.push_back(m[k]);
      }
    }
  }
  std::sort(s.train_ids.begin(), s.train_ids.end());
  std::sort(s.validation_ids.begin(), s.validation_ids.end());
  std::sort(s.test_ids.begin(), s.test_ids.end());
  return s;
}

// ---------------------------------------------------------------- weights

ClassWeights class_weights_from_counts(std::span<const std::size_t> counts) {
  const double N = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  const double C = static_cast<double>(counts.size());
  ClassWeights w;
  w.weights.reserve(counts.size());
  for (std::size_t n : counts) {
    if (n == 0) throw DataError("class weight undefined for a class with no training samples");
    w.weights.push_back(N / (C * static_cast<double>(n)));
  }
  return w;
}

ClassWeights compute_class_weights(const Dataset& d, const SplitAssignment& split) {
  std::vector<std::size_t> counts(d.num_classes(), 0);
  for (std::size_t i : split.train_ids) ++counts[static_cast<std::size_t>(d.target(i))];
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("class '" + d.label(static_cast<int>(c)) + "' is absent from the train split");
    }
  }
  return class_weights_from_counts(counts);
}

// ---------------------------------------------------------------- statistics

namespace {

std::pair<double, double> mean_std(std::span<const std::size_t> xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (auto x : xs) sum += static_cast<double>(x);
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (auto x : xs) sq += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace

std::size_t TokenLengthStats::percentile(double p) const {
  if (sorted_lengths.empty()) throw std::logic_error("percentile of an empty sample");
  if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentile must be in (0, 100]");
  const double n = static_cast<double>(sorted_lengths.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted_lengths.size());
  return sorted_lengths[rank - 1];
}

TokenLengthStats length_stats(std::vector<std::size_t> lengths) {
  if (lengths.empty()) throw DataError("token statistics over an empty split");
  TokenLengthStats s;
  s.count = lengths.size();
  std::tie(s.mean, s.std) = mean_std(lengths);
  std::sort(lengths.begin(), lengths.end());
  s.histogram.assign(lengths.back() + 1, 0);
  for (auto len : lengths) ++s.histogram[len];
  s.sorted_lengths = std::move(lengths);
  return s;
}

TokenLengthStats token_length_stats(const Dataset& d, const SplitAssignment& split,
                                    const Tokenizer& tokenizer) {
  std::vector<std::size_t> lengths;
  lengths.reserve(split.train_ids.size());
  for (std::size_t i : split.train_ids) lengths.push_back(tokenizer(d[i].text).size());
  return length_stats(std::move(lengths));
}

DatasetSummary dataset_summary(const Dataset& d, const SplitAssignment& split,
                               const Tokenizer& tokenizer) {
  const std::size_t C = d.num_classes();
  std::vector<std::vector<std::size_t>> words(C), tokens(C);
  std::vector<std::size_t> all_words, all_tokens;
  DatasetSummary out;
  out.rows.resize(C);
  for (std::size_t c = 0; c < C; ++c) out.rows[c].intent = d.label(static_cast<int>(c));
  auto visit = [&](std::size_t i, bool train) {
    const auto c = static_cast<std::size_t>(d.target(i));
    (train ? out.rows[c].n_train : out.rows[c].n_test) += 1;
    const std::size_t w = word_count(d[i].text), t = tokenizer(d[i].text).size();
    words[c].push_back(w);
    tokens[c].push_back(t);
    all_words.push_back(w);
    all_tokens.push_back(t);
  };
  for (std::size_t i : split.training_portion()) visit(i, true);
  for (std::size_t i : split.test_ids) visit(i, false);
  for (std::size_t c = 0; c < C; ++c) {
    std::tie(out.rows[c].words_mean, out.rows[c].words_std) = mean_std(words[c]);
    std::tie(out.rows[c].tokens_mean, out.rows[c].tokens_std) = mean_std(tokens[c]);
    out.totals.n_train += out.rows[c].n_train;
    out.totals.n_test += out.rows[c].n_test;
  }
  out.totals.intent = "total";
  std::tie(out.totals.words_mean, out.totals.words_std) = mean_std(all_words);
  std::tie(out.totals.tokens_mean, out.totals.tokens_std) = mean_std(all_tokens);
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::vector<std::string> summary_fields(const SummaryRow& r) {
  return {r.intent,          std::to_string(r.n_train),  std::to_string(r.n_test),
          std::to_string(r.total()), fixed(r.words_mean, 4), fixed(r.words_std, 4),
          fixed(r.tokens_mean, 4), fixed(r.tokens_std, 4)};
}

}  // namespace

std::string DatasetSummary::to_csv() const {
  std::ostringstream os;
  csv::write_row(os, {"intent", "n_train", "n_test", "n_total", "words_mean", "words_std",
                      "tokens_mean", "tokens_std"});
  for (const auto& r : rows) csv::write_row(os, summary_fields(r));
  csv::write_row(os, summary_fields(totals));
  return os.str();
}

std::string DatasetSummary::to_text() const {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.intent.size());
  std::ostringstream os;
  auto line = [&](const SummaryRow& r) {
    os << std::left << std::setw(static_cast<int>(width)) << r.intent << std::right
       << std::setw(12) << fixed(r.words_mean, 1) + "+-" + fixed(r.words_std, 1)
       << std::setw(14) << fixed(r.tokens_mean, 1) + "+-" + fixed(r.tokens_std, 1)
       << std::setw(10) << r.n_train << std::setw(10) << r.n_test << std::setw(10)
       << r.total() << '\n';
  };
  os << std::left << std::setw(static_cast<int>(width)) << "intent" << std::right
     << std::setw(12) << "# words" << std::setw(14) << "# tokens" << std::setw(10) << "train"
     << std::setw(10) << "test" << std::setw(10) << "total" << '\n';
  for (const auto& r : rows) line(r);
  line(totals);
  return os.str();
}

}  // namespace intentrec
