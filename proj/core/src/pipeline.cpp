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

#include "intentrec/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "intentrec/error.hpp"
#include "intentrec/nn/adam.hpp"
#include "intentrec/nn/loss.hpp"

namespace intentrec {

using nlohmann::json;

namespace {

Tensor lookup(const EncodedSequence& seq, const Tensor& table) {
  const std::size_t d = table.dim(1);
  Tensor out({seq.ids.size(), d});
  for (std::size_t t = 0; t < seq.ids.size(); ++t) {
    const auto id = static_cast<std::size_t>(seq.ids[t]);
    if (seq.ids[t] < 0 || id >= table.dim(0)) {
      throw std::out_of_range("token id " + std::to_string(seq.ids[t]) +
                              " outside the embedding table");
    }
    std::copy_n(table.data() + id * d, d, out.data() + t * d);
  }
  return out;
}

int argmax(const Tensor& p) {
  const auto v = p.values();
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be > 0");
}

Tensor LabeledInputs::input(std::size_t i, const EmbeddingMatrix* emb) const {
  if (is_dense()) return dense.at(i);
  if (emb == nullptr) throw std::invalid_argument("token inputs need an embedding table");
  return lookup(sequences.at(i), emb->table);
}

std::string TrainHistory::to_csv() const {
  std::ostringstream os;
  os << "epoch,train_loss,train_accuracy,val_accuracy,val_uar\n";
  for (const auto& e : epochs) {
    os << e.epoch << ',' << fmt(e.train_loss) << ',' << fmt(e.train_accuracy) << ','
       << (e.val_accuracy ? fmt(*e.val_accuracy) : "") << ','
       << (e.val_uar ? fmt(*e.val_uar) : "") << '\n';
  }
  return os.str();
}

TrainHistory train(ModelGraph& model, const LabeledInputs& train_set,
                   const LabeledInputs* validation, EmbeddingMatrix* embeddings,
                   const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = train_set.size();
  if (n == 0) throw DataError("empty training set");
  if (!train_set.is_dense() && train_set.sequences.size() != n) {
    throw ShapeError("training set has " + std::to_string(train_set.sequences.size()) +
                     " sequences for " + std::to_string(n) + " labels");
  }
  const bool sparse_update = cfg.trainable_embeddings && !train_set.is_dense();
  if (cfg.trainable_embeddings && train_set.is_dense()) {
    throw std::invalid_argument("trainable embeddings need token inputs");
  }
  if (!train_set.is_dense() && embeddings == nullptr) {
    throw std::invalid_argument("token inputs need an embedding table");
  }

  const std::size_t classes = model.config.classes;
  std::vector<double> weights;
  if (cfg.class_weighting) {
    std::vector<std::size_t> counts(classes, 0);
    for (int y : train_set.labels) {
      if (y < 0 || static_cast<std::size_t>(y) >= classes) {
        throw std::out_of_range("label " + std::to_string(y) + " outside [0, " +
                                std::to_string(classes) + ")");
      }
      ++counts[static_cast<std::size_t>(y)];
    }
    weights = class_weights_from_counts(counts).weights;
  }

  nn::AdamConfig adam{.lr = cfg.lr};
  nn::AdamState state(adam);
  nn::AdamState emb_state(adam);
  std::vector<nn::Parameter*> params = model.network.parameters();

  // While training, the table lives in a Parameter so Adam can see its grad.
  nn::Parameter table;
  if (sparse_update) table = nn::Parameter("embeddings", std::move(embeddings->table));
  struct Restore {
    nn::Parameter& table;
    EmbeddingMatrix* emb;
    bool active;
    ~Restore() {
      if (active) emb->table = std::move(table.value);
    }
  } restore{table, embeddings, sparse_update};

  std::mt19937_64 rng(cfg.seed);
  model.network.reseed(cfg.seed + 1);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainHistory history;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size, ++batch_no) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      model.network.zero_grad();
      std::set<std::size_t> touched;
      if (sparse_update) table.zero_grad();
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t i = order[b];
        const int y = train_set.labels[i];
        const Tensor x = sparse_update ? lookup(train_set.sequences[i], table.value)
                                       : train_set.input(i, embeddings);
        const Tensor probs = model.network.forward(x, nn::Mode::kTrain);
        const int target[] = {y};
        const double loss = nn::weighted_cross_entropy(probs, target, weights);
        if (!std::isfinite(loss)) {
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(batch_no));
        }
        loss_sum += loss;
        if (argmax(probs) == y) ++correct;
        Tensor grad = nn::weighted_cross_entropy_grad(probs, target, weights);
        for (double& g : grad.values()) g *= scale;
        const Tensor dx = model.network.backward(grad);
        if (sparse_update) {
          const auto& ids = train_set.sequences[i].ids;
          for (std::size_t t = 0; t < ids.size(); ++t) {
            if (ids[t] == Vocabulary::kPad) continue;
            const auto row = static_cast<std::size_t>(ids[t]);
            auto dst = table.grad.row(row);
            const auto src = dx.row(t);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
            touched.insert(row);
          }
        }
      }
      try {
        nn::adam_step(params, state);
        if (sparse_update && !touched.empty()) {
          const std::vector<std::size_t> rows(touched.begin(), touched.end());
          nn::adam_step_rows(table, rows, emb_state);
        }
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_no));
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(n);
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
    if (validation != nullptr && validation->size() > 0) {
      EmbeddingMatrix view;
      const EmbeddingMatrix* emb = embeddings;
      if (sparse_update) {
        view.table = table.value;
        emb = &view;
      }
      const EvalReport r = evaluate(model, *validation, emb);
      rec.val_accuracy = r.accuracy;
      rec.val_uar = r.uar;
    }
    history.epochs.push_back(rec);
  }
  return history;
}

std::vector<int> predict_classes(const ModelGraph& model, const LabeledInputs& inputs,
                                 const EmbeddingMatrix* embeddings) {
  std::vector<int> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.push_back(argmax(predict_one(model, inputs.input(i, embeddings))));
  }
  return out;
}

EvalReport evaluate(const ModelGraph& model, const LabeledInputs& test,
                    const EmbeddingMatrix* embeddings, std::vector<std::string> labels) {
  if (test.size() == 0) throw DataError("cannot evaluate an empty split");
  const std::vector<int> pred = predict_classes(model, test, embeddings);
  return compute_report(test.labels, pred, model.config.classes, std::move(labels));
}

// ---------------------------------------------------------------- correlations

CorrelationOutcome correlate(std::span<const double> x, std::span<const double> y) {
  CorrelationOutcome out;
  try {
    const Correlation p = pearson(x, y);
    const Correlation s = spearman(x, y);
    out.result = CorrelationResult{p.coefficient, p.p_value, s.coefficient, s.p_value, p.n};
  } catch (const DataError& e) {
    out.status = e.what();
  }
  return out;
}

RecallCorrelations analyze_recall_correlations(const EvalReport& report,
                                               std::span<const double> requests,
                                               std::span<const double> mean_tokens) {
  const std::size_t cl = report.recall.size();
  if (requests.size() != cl || mean_tokens.size() != cl) {
    throw ShapeError("correlation inputs need one value per class (" + std::to_string(cl) +
                     ")");
  }
  RecallCorrelations out;
  std::vector<double> req, tok, rec;
  for (std::size_t c = 0; c < cl; ++c) {
    ScatterPoint p;
    p.intent = c < report.labels.size() ? report.labels[c] : std::to_string(c);
    p.requests = requests[c];
    p.mean_tokens = mean_tokens[c];
    p.recall = report.recall[c];
    out.points.push_back(p);
    // Recall is undefined without test support; leave those classes out.
    if (c < report.support.size() && report.support[c] == 0) continue;
    req.push_back(p.requests);
    tok.push_back(p.mean_tokens);
    rec.push_back(p.recall);
  }
  out.vs_requests = correlate(req, rec);
  out.vs_tokens = correlate(tok, rec);
  return out;
}

// ---------------------------------------------------------------- run config

namespace {

std::string_view source_name(EmbeddingSource s) {
  switch (s) {
    case EmbeddingSource::kCbow: return "cbow";
    case EmbeddingSource::kPretrained: return "pretrained";
    case EmbeddingSource::kContextual: return "contextual";
  }
  return "cbow";
}

EmbeddingSource parse_source(const std::string& s) {
  if (s == "cbow") return EmbeddingSource::kCbow;
  if (s == "pretrained") return EmbeddingSource::kPretrained;
  if (s == "contextual") return EmbeddingSource::kContextual;
  throw std::invalid_argument("unknown embedding source '" + s + "'");
}

}  // namespace

std::string RunConfig::to_json() const {
  json j;
  j["data"] = {{"format", data.format == DataFormat::kCsv ? "csv" : "jsonl"},
               {"text_field", data.text_field},
               {"label_field", data.label_field},
               {"id_field", data.id_field},
               {"source_field", data.source_field},
               {"delimiter", std::string(1, data.delimiter)}};
  j["train_frac"] = train_frac;
  j["val_frac"] = val_frac;
  j["seed"] = seed;
  j["min_count"] = min_count;
  j["pad_percentile"] = pad_percentile;
  j["seq_len"] = seq_len;
  const auto& c = embedding.cbow;
  j["embedding"] = {{"source", source_name(embedding.source)},
                    {"path", embedding.path},
                    {"format", embedding.format == VectorFormat::kText ? "text" : "binary"},
                    {"cbow",
                     {{"window", c.window},
                      {"window_is_total", c.window_is_total},
                      {"dim", c.dim},
                      {"negatives", c.negatives},
                      {"epochs", c.epochs},
                      {"lr", c.lr},
                      {"min_count", c.min_count},
                      {"seed", c.seed}}}};
  j["model"] = json::parse(model.to_json());
  j["train"] = {{"epochs", train.epochs},
                {"lr", train.lr},
                {"batch_size", train.batch_size},
                {"seed", train.seed},
                {"class_weighting", train.class_weighting},
                {"shuffle", train.shuffle},
                {"trainable_embeddings", train.trainable_embeddings}};
  return j.dump(2);
}

RunConfig RunConfig::from_json(std::string_view text) {
  RunConfig r;
  try {
    const json j = json::parse(text);
    if (j.contains("data")) {
      const auto& d = j["data"];
      const std::string f = d.value("format", std::string("csv"));
      if (f != "csv" && f != "jsonl") throw std::invalid_argument("unknown data format '" + f + "'");
      r.data.format = f == "csv" ? DataFormat::kCsv : DataFormat::kJsonl;
      r.data.text_field = d.value("text_field", r.data.text_field);
      r.data.label_field = d.value("label_field", r.data.label_field);
      r.data.id_field = d.value("id_field", r.data.id_field);
      r.data.source_field = d.value("source_field", r.data.source_field);
      const std::string delim = d.value("delimiter", std::string(","));
      if (delim.size() != 1) throw std::invalid_argument("delimiter must be one character");
      r.data.delimiter = delim[0];
    }
    r.train_frac = j.value("train_frac", r.train_frac);
    r.val_frac = j.value("val_frac", r.val_frac);
    r.seed = j.value("seed", r.seed);
    r.min_count = j.value("min_count", r.min_count);
    r.pad_percentile = j.value("pad_percentile", r.pad_percentile);
    r.seq_len = j.value("seq_len", r.seq_len);
    if (j.contains("embedding")) {
      const auto& e = j["embedding"];
      r.embedding.source = parse_source(e.value("source", std::string("cbow")));
      r.embedding.path = e.value("path", std::string());
      const std::string vf = e.value("format", std::string("text"));
      if (vf != "text" && vf != "binary") throw std::invalid_argument("unknown vector format '" + vf + "'");
      r.embedding.format = vf == "text" ? VectorFormat::kText : VectorFormat::kBinary;
      if (e.contains("cbow")) {
        const auto& c = e["cbow"];
        auto& o = r.embedding.cbow;
        o.window = c.value("window", o.window);
        o.window_is_total = c.value("window_is_total", o.window_is_total);
        o.dim = c.value("dim", o.dim);
        o.negatives = c.value("negatives", o.negatives);
        o.epochs = c.value("epochs", o.epochs);
        o.lr = c.value("lr", o.lr);
        o.min_count = c.value("min_count", o.min_count);
        o.seed = c.value("seed", o.seed);
      }
    }
    if (j.contains("model")) r.model = ModelConfig::from_json(j["model"].dump());
    if (j.contains("train")) {
      const auto& t = j["train"];
      r.train.epochs = t.value("epochs", r.train.epochs);
      r.train.lr = t.value("lr", r.train.lr);
      r.train.batch_size = t.value("batch_size", r.train.batch_size);
      r.train.seed = t.value("seed", r.train.seed);
      r.train.class_weighting = t.value("class_weighting", r.train.class_weighting);
      r.train.shuffle = t.value("shuffle", r.train.shuffle);
      r.train.trainable_embeddings =
          t.value("trainable_embeddings", r.train.trainable_embeddings);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("run config: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------- orchestration

PreparedData prepare_data(const Dataset& d, const RunConfig& cfg) {
  PreparedData p;
  p.split = stratified_split(d, cfg.train_frac, cfg.val_frac, cfg.seed);

  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(d.size());
  for (const auto& ex : d.examples()) tokens.push_back(tokenize(ex.text));

  std::vector<std::vector<std::string>> train_tokens;
  for (std::size_t i : p.split.train_ids) train_tokens.push_back(tokens[i]);
  p.vocab = std::make_shared<const Vocabulary>(Vocabulary::build(train_tokens, cfg.min_count));

  p.token_stats = token_length_stats(d, p.split);
  p.seq_len = cfg.seq_len > 0 ? cfg.seq_len
                              : std::max<std::size_t>(1, p.token_stats.percentile(cfg.pad_percentile));

  auto fill = [&](const std::vector<std::size_t>& ids, LabeledInputs& out) {
    for (std::size_t i : ids) {
      out.sequences.push_back(encode(tokens[i], *p.vocab, p.seq_len));
      out.labels.push_back(d.target(i));
    }
  };
  fill(p.split.train_ids, p.train);
  fill(p.split.validation_ids, p.validation);
  fill(p.split.test_ids, p.test);
  return p;
}

std::optional<EmbeddingMatrix> prepare_embeddings(const Dataset& d, PreparedData& prepared,
                                                  const RunConfig& cfg) {
  switch (cfg.embedding.source) {
    case EmbeddingSource::kCbow: {
      std::vector<std::vector<std::string>> corpus;
      for (std::size_t i : prepared.split.train_ids) corpus.push_back(tokenize(d[i].text));
      return train_cbow(corpus, cfg.embedding.cbow, prepared.vocab).embeddings;
    }
    case EmbeddingSource::kPretrained:
      return load_pretrained(cfg.embedding.path, cfg.embedding.format, prepared.vocab);
    case EmbeddingSource::kContextual: {
      const ContextualStore store = load_contextual(cfg.embedding.path);
      auto densify = [&](const std::vector<std::size_t>& ids, LabeledInputs& out) {
        std::vector<std::string> keys;
        for (std::size_t i : ids) keys.push_back(d[i].id);
        out.dense = contextual_inputs(store, keys, prepared.seq_len);
        out.sequences.clear();
      };
      densify(prepared.split.train_ids, prepared.train);
      densify(prepared.split.validation_ids, prepared.validation);
      densify(prepared.split.test_ids, prepared.test);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Experiment run_experiment(const Dataset& d, RunConfig cfg) {
  Experiment ex;
  ex.data = prepare_data(d, cfg);
  ex.embeddings = prepare_embeddings(d, ex.data, cfg);
  cfg.model.seq_len = ex.data.seq_len;
  cfg.model.classes = d.num_classes();
  if (ex.embeddings) {
    cfg.model.d_in = ex.embeddings->dim();
  } else if (!ex.data.train.dense.empty()) {
    cfg.model.d_in = ex.data.train.dense.front().dim(1);
  }
  ex.model = build_model(cfg.model);
  EmbeddingMatrix* emb = ex.embeddings ? &*ex.embeddings : nullptr;
  ex.history = train(ex.model, ex.data.train, &ex.data.validation, emb, cfg.train);
  ex.report = evaluate(ex.model, ex.data.test, emb, d.labels());
  return ex;
}

}  // namespace intentrec
