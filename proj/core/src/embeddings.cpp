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

#include "intentrec/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "intentrec/error.hpp"

namespace intentrec {

void EmbeddingMatrix::validate() const {
  if (!vocab) throw ShapeError("embedding matrix has no vocabulary");
  if (table.rank() != 2 || table.dim(0) != vocab->size() || table.dim(1) == 0) {
    throw ShapeError("embedding table " + table.shape_string() + " does not match vocabulary of size " +
                     std::to_string(vocab->size()));
  }
  for (double v : table.row(Vocabulary::kPad)) {
    if (v != 0.0) throw ShapeError("embedding PAD row must be zero");
  }
  if (!table.all_finite()) throw NumericError("embedding table contains non-finite values");
}

std::size_t CBOWConfig::per_side() const {
  if (!window_is_total) return window;
  return std::max<std::size_t>(1, window / 2);
}

// ---------------------------------------------------------------- CBOW

namespace {

// Linear congruential generator of the original word2vec tool.
struct W2vRandom {
  std::uint64_t state;
  std::uint64_t next() {
    state = state * 25214903917ULL + 11ULL;
    return state;
  }
  double uniform() { return static_cast<double>((next() >> 16) & 0xFFFFFFFFULL) / 4294967296.0; }
};

double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

CBOWResult train_cbow(std::span<const std::vector<std::string>> corpus, const CBOWConfig& cfg,
                      std::shared_ptr<const Vocabulary> vocab) {
  if (cfg.window < 1 || cfg.negatives < 1 || cfg.dim < 1 || cfg.epochs < 1) {
    throw std::invalid_argument("CBOW: window, negatives, dim and epochs must all be >= 1");
  }
  if (!vocab) vocab = std::make_shared<Vocabulary>(Vocabulary::build(corpus, cfg.min_count));
  const std::size_t V = vocab->size();
  const std::size_t d = cfg.dim;

  std::vector<std::vector<int>> sentences;
  std::vector<double> freq(V, 0.0);
  std::size_t total_words = 0;
  for (const auto& s : corpus) {
    std::vector<int> ids;
    for (const auto& tok : s) {
      const auto id = vocab->find(tok);
      if (!id || *id < static_cast<int>(Vocabulary::kReserved)) continue;
      ids.push_back(*id);
      freq[static_cast<std::size_t>(*id)] += 1.0;
    }
    total_words += ids.size();
    if (ids.size() >= 2) sentences.push_back(std::move(ids));
  }
  if (sentences.empty()) throw DataError("CBOW: corpus has no sequence with two in-vocabulary tokens");

  // Cumulative unigram^0.75 distribution for negative draws.
  std::vector<double> cdf(V, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < V; ++i) {
    acc += std::pow(freq[i], 0.75);
    cdf[i] = acc;
  }
  W2vRandom rng{cfg.seed};
  auto draw_negative = [&]() {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), V - 1));
  };

  Tensor syn0({V, d}), syn1({V, d});
  for (std::size_t r = Vocabulary::kReserved; r < V; ++r) {
    for (double& v : syn0.row(r)) v = (rng.uniform() - 0.5) / static_cast<double>(d);
  }

  const std::size_t side = cfg.per_side();
  const double total_steps = static_cast<double>(cfg.epochs * total_words) + 1.0;
  double processed = 0.0;
  std::vector<double> neu1(d), neu1e(d);
  CBOWResult result;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t samples = 0;
    for (const auto& sent : sentences) {
      const std::size_t n = sent.size();
      for (std::size_t pos = 0; pos < n; ++pos, processed += 1.0) {
        const double alpha = std::max(cfg.lr * (1.0 - processed / total_steps), cfg.lr * 1e-4);
        const std::size_t lo = pos >= side ? pos - side : 0;
        const std::size_t hi = std::min(n - 1, pos + side);
        std::fill(neu1.begin(), neu1.end(), 0.0);
        std::fill(neu1e.begin(), neu1e.end(), 0.0);
        std::size_t cw = 0;
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const auto row = syn0.row(static_cast<std::size_t>(sent[c]));
          for (std::size_t j = 0; j < d; ++j) neu1[j] += row[j];
          ++cw;
        }
        if (cw == 0) continue;
        for (double& v : neu1) v /= static_cast<double>(cw);

        const int word = sent[pos];
        for (std::size_t k = 0; k <= cfg.negatives; ++k) {
          int target = word;
          double label = 1.0;
          if (k > 0) {
            target = draw_negative();
            if (target == word) continue;
            label = 0.0;
          }
          auto out = syn1.row(static_cast<std::size_t>(target));
          double f = 0.0;
          for (std::size_t j = 0; j < d; ++j) f += neu1[j] * out[j];
          loss -= label > 0.0 ? log_sigmoid(f) : log_sigmoid(-f);
          const double g = (label - 1.0 / (1.0 + std::exp(-f))) * alpha;
          for (std::size_t j = 0; j < d; ++j) neu1e[j] += g * out[j];
          for (std::size_t j = 0; j < d; ++j) out[j] += g * neu1[j];
        }
        ++samples;
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          auto row = syn0.row(static_cast<std::size_t>(sent[c]));
          for (std::size_t j = 0; j < d; ++j) row[j] += neu1e[j];
        }
      }
    }
    result.epoch_loss.push_back(samples ? loss / static_cast<double>(samples) : 0.0);
  }
  result.embeddings = EmbeddingMatrix{std::move(vocab), std::move(syn0)};
  return result;
}

// ---------------------------------------------------------------- word2vec files

namespace {

struct RawVectors {
  std::vector<std::string> tokens;
  std::size_t dim = 0;
  std::vector<double> values;
};

std::pair<std::size_t, std::size_t> parse_header(const std::string& line) {
  std::istringstream hs(line);
  long long count = -1, dim = -1;
  if (!(hs >> count >> dim) || count < 0 || dim < 1) {
    throw FormatError("word2vec header must be 'V d', got '" + line + "'");
  }
  return {static_cast<std::size_t>(count), static_cast<std::size_t>(dim)};
}

void check_finite(const RawVectors& raw, std::size_t entry) {
  for (std::size_t j = 0; j < raw.dim; ++j) {
    if (!std::isfinite(raw.values[entry * raw.dim + j])) {
      throw FormatError("word2vec: non-finite value in vector for token '" + raw.tokens[entry] + "'");
    }
  }
}

RawVectors read_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("word2vec: empty file");
  RawVectors raw;
  auto [count, dim] = parse_header(line);
  raw.dim = dim;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> vals;
    std::string cell;
    while (ls >> cell) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw FormatError("word2vec line " + std::to_string(n) + ": bad number '" + cell + "'");
      }
      vals.push_back(v);
    }
    if (vals.size() != dim) {
      throw FormatError("word2vec line " + std::to_string(n) + ": token '" + token + "' has " +
                        std::to_string(vals.size()) + " values, header declares " + std::to_string(dim));
    }
    raw.tokens.push_back(token);
    raw.values.insert(raw.values.end(), vals.begin(), vals.end());
    check_finite(raw, raw.tokens.size() - 1);
  }
  if (raw.tokens.size() != count) {
    throw FormatError("word2vec: header declares " + std::to_string(count) + " vectors, file has " +
                      std::to_string(raw.tokens.size()));
  }
  return raw;
}

RawVectors read_binary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("word2vec: empty file");
  RawVectors raw;
  auto [count, dim] = parse_header(line);
  raw.dim = dim;
  std::vector<float> buf(dim);
  for (std::size_t e = 0; e < count; ++e) {
    std::string token;
    int c;
    while ((c = in.get()) == '\n' || c == '\r') {}
    while (c != EOF && c != ' ') {
      token.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (c == EOF) {
      throw FormatError("word2vec binary: truncated at entry " + std::to_string(e) + " of " +
                        std::to_string(count));
    }
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(dim * sizeof(float))) {
      throw FormatError("word2vec binary: truncated vector for token '" + token + "'");
    }
    static_assert(std::endian::native == std::endian::little, "binary word2vec assumes little-endian");
    raw.tokens.push_back(token);
    for (float f : buf) raw.values.push_back(static_cast<double>(f));
    check_finite(raw, e);
  }
  return raw;
}

RawVectors read_vectors(const std::filesystem::path& path, VectorFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file " + path.string());
  return format == VectorFormat::kText ? read_text(in) : read_binary(in);
}

EmbeddingMatrix align(const RawVectors& raw, std::shared_ptr<const Vocabulary> vocab,
                      CoverageReport* coverage) {
  EmbeddingMatrix emb{vocab, Tensor({vocab->size(), raw.dim})};
  std::vector<bool> filled(vocab->size(), false);
  CoverageReport cov;
  for (std::size_t e = 0; e < raw.tokens.size(); ++e) {
    const auto id = vocab->find(raw.tokens[e]);
    if (!id || *id < static_cast<int>(Vocabulary::kReserved)) {
      ++cov.unused;
      continue;
    }
    const auto r = static_cast<std::size_t>(*id);
    if (filled[r]) continue;
    filled[r] = true;
    std::copy_n(raw.values.begin() + static_cast<std::ptrdiff_t>(e * raw.dim), raw.dim,
                emb.table.row(r).begin());
  }
  for (std::size_t r = Vocabulary::kReserved; r < vocab->size(); ++r) {
    (filled[r] ? cov.found : cov.missing) += 1;
  }
  if (coverage) *coverage = cov;
  return emb;
}

}  // namespace

EmbeddingMatrix load_pretrained(const std::filesystem::path& path, VectorFormat format) {
  RawVectors raw = read_vectors(path, format);
  std::vector<std::string> unique;
  std::unordered_set<std::string> seen;
  for (const auto& t : raw.tokens) {
    if (t == Vocabulary::kPadToken || t == Vocabulary::kUnkToken) continue;
    if (seen.insert(t).second) unique.push_back(t);
  }
  auto vocab = std::make_shared<Vocabulary>(Vocabulary::from_tokens(std::move(unique)));
  return align(raw, std::move(vocab), nullptr);
}

EmbeddingMatrix load_pretrained(const std::filesystem::path& path, VectorFormat format,
                                std::shared_ptr<const Vocabulary> vocab, CoverageReport* coverage) {
  return align(read_vectors(path, format), std::move(vocab), coverage);
}

void save_word2vec(const EmbeddingMatrix& emb, const std::filesystem::path& path,
                   VectorFormat format) {
  emb.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embeddings to " + path.string());
  const std::size_t V = emb.rows(), d = emb.dim();
  out << (V - Vocabulary::kReserved) << ' ' << d << '\n';
  for (std::size_t r = Vocabulary::kReserved; r < V; ++r) {
    out << emb.vocab->token(static_cast<int>(r)) << ' ';
    const auto row = emb.table.row(r);
    if (format == VectorFormat::kText) {
      std::ostringstream line;
      line.precision(9);
      for (std::size_t j = 0; j < d; ++j) line << (j ? " " : "") << row[j];
      out << line.str();
    } else {
      for (double v : row) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), sizeof f);
      }
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------- lookup

Tensor embed_sequence(const EncodedSequence& seq, const EmbeddingMatrix& emb) {
  const std::size_t L = seq.ids.size(), d = emb.dim();
  Tensor out({L, d});
  for (std::size_t t = 0; t < L; ++t) {
    const int id = seq.ids[t];
    if (id < 0 || static_cast<std::size_t>(id) >= emb.rows()) {
      throw std::out_of_range("token id " + std::to_string(id) + " outside embedding table of " +
                              std::to_string(emb.rows()) + " rows");
    }
    if (id == Vocabulary::kPad) continue;
    const auto row = emb.row(id);
    std::copy(row.begin(), row.end(), out.row(t).begin());
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& emb, std::string_view token,
                                        std::size_t k) {
  const auto query = emb.vocab->find(token);
  if (!query || *query < static_cast<int>(Vocabulary::kReserved)) {
    throw DataError("token '" + std::string(token) + "' is not in the vocabulary");
  }
  std::vector<Neighbor> all;
  const auto q = emb.row(*query);
  for (std::size_t r = Vocabulary::kReserved; r < emb.rows(); ++r) {
    if (static_cast<int>(r) == *query) continue;
    all.push_back({emb.vocab->token(static_cast<int>(r)), static_cast<int>(r),
                   cosine_similarity(q, emb.table.row(r))});
  }
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
                    [](const Neighbor& a, const Neighbor& b) {
                      if (a.similarity != b.similarity) return a.similarity > b.similarity;
                      return a.id < b.id;
                    });
  all.resize(n);
  return all;
}

}  // namespace intentrec
