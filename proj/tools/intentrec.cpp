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

// Command line front end. Exit status: 0 success, 1 usage error, 2 data
// error (unreadable or malformed input), 3 training failure.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "intentrec/bundle.hpp"
#include "intentrec/corpus.hpp"
#include "intentrec/csv.hpp"
#include "intentrec/embeddings.hpp"
#include "intentrec/error.hpp"
#include "intentrec/pipeline.hpp"
#include "intentrec/report.hpp"
#include "intentrec/service.hpp"

namespace fs = std::filesystem;
using namespace intentrec;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::string data;
  std::string out;
  std::string format;
  std::string text_field, label_field, id_field;
  std::string delimiter;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, Common& c, bool need_data, bool need_out) {
  cmd->add_option("--config", c.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  auto* data = cmd->add_option("--data", c.data, "Labelled requests (CSV or JSONL)");
  if (need_data) data->required();
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (need_out) out->required();
  cmd->add_option("--format", c.format, "Data format")->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--text-field", c.text_field, "Column holding the request text");
  cmd->add_option("--label-field", c.label_field, "Column holding the intent label");
  cmd->add_option("--id-field", c.id_field, "Column holding the request id");
  cmd->add_option("--delimiter", c.delimiter, "CSV field delimiter");
  cmd->add_option("--seed", c.seed, "Seed for split, initialisation and training");
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : RunConfig::from_json(read_text(c.config));
  if (!c.format.empty()) cfg.data.format = c.format == "jsonl" ? DataFormat::kJsonl : DataFormat::kCsv;
  if (!c.text_field.empty()) cfg.data.text_field = c.text_field;
  if (!c.label_field.empty()) cfg.data.label_field = c.label_field;
  if (!c.id_field.empty()) cfg.data.id_field = c.id_field;
  if (!c.delimiter.empty()) {
    if (c.delimiter.size() != 1) throw UsageError("--delimiter takes one character");
    cfg.data.delimiter = c.delimiter[0];
  }
  if (c.seed >= 0) {
    const auto s = static_cast<std::uint64_t>(c.seed);
    cfg.seed = s;
    cfg.model.seed = s;
    cfg.train.seed = s;
    cfg.embedding.cbow.seed = s;
  }
  return cfg;
}

Dataset load(const std::string& path, const RunConfig& cfg, LoadReport* report = nullptr) {
  return load_dataset(path, cfg.data, report);
}

// Per-class request totals and mean token counts, for the correlation plots.
std::pair<std::vector<double>, std::vector<double>> class_stats(const Dataset& d,
                                                                const SplitAssignment& split) {
  const DatasetSummary s = dataset_summary(d, split);
  std::vector<double> requests, tokens;
  for (const auto& r : s.rows) {
    requests.push_back(static_cast<double>(r.total()));
    tokens.push_back(r.tokens_mean);
  }
  return {requests, tokens};
}

int cmd_prepare(const Common& c) {
  const RunConfig cfg = resolve(c);
  LoadReport lr;
  const Dataset d = load(c.data, cfg, &lr);
  const PreparedData p = prepare_data(d, cfg);
  const fs::path out = c.out;
  fs::create_directories(out);
  write_text(out / "split.json", p.split.to_json());
  const DatasetSummary summary = dataset_summary(d, p.split);
  write_text(out / "summary.csv", summary.to_csv());
  write_text(out / "summary.txt", summary.to_text());
  p.vocab->save(out / "vocab.txt");
  write_text(out / "token_histogram.svg", histogram_svg(p.token_stats, "Tokens per request (train)"));
  nlohmann::json info{{"rows", lr.rows},
                      {"kept", d.size()},
                      {"rejected_empty_text", lr.rejected_empty_text},
                      {"dropped_empty_tokens", lr.dropped_empty_tokens},
                      {"classes", d.num_classes()},
                      {"vocabulary_size", p.vocab->size()},
                      {"padded_length", p.seq_len},
                      {"pad_percentile", cfg.pad_percentile},
                      {"token_mean", p.token_stats.mean},
                      {"token_std", p.token_stats.std}};
  write_text(out / "prepare.json", info.dump(2) + "\n");
  std::cout << summary.to_text();
  std::cout << "vocabulary " << p.vocab->size() << ", padded length " << p.seq_len << ", dropped "
            << lr.rejected_empty_text + lr.dropped_empty_tokens << " empty requests\n";
  return 0;
}

int cmd_embed_train(const Common& c, const std::string& vector_format) {
  RunConfig cfg = resolve(c);
  const Dataset d = load(c.data, cfg);
  PreparedData p = prepare_data(d, cfg);
  cfg.embedding.source = EmbeddingSource::kCbow;
  const auto emb = prepare_embeddings(d, p, cfg);
  save_word2vec(*emb, c.out, vector_format == "binary" ? VectorFormat::kBinary : VectorFormat::kText);
  std::cout << "wrote " << emb->rows() << " x " << emb->dim() << " vectors to " << c.out << "\n";
  return 0;
}

int cmd_train(const Common& c) {
  const RunConfig cfg = resolve(c);
  const Dataset d = load(c.data, cfg);
  Experiment ex = run_experiment(d, cfg);

  ModelBundle b;
  b.model = ex.model;
  b.vocab = ex.data.vocab;
  b.embeddings = ex.embeddings;
  b.labels = d.labels();
  b.run = cfg;
  b.version = version_string();
  save_bundle(b, c.out);
  const fs::path history = fs::path(c.out).string() + ".history.csv";
  write_text(history, ex.history.to_csv());
  const auto& last = ex.history.epochs.back();
  std::cout << "trained " << to_string(cfg.model.architecture) << " for " << ex.history.epochs.size()
            << " epochs; final train loss " << last.train_loss << "\n"
            << "test accuracy " << ex.report.accuracy << ", UAR " << ex.report.uar
            << ", macro F " << ex.report.macro_f << "\n"
            << "bundle: " << c.out << "\nhistory: " << history.string() << "\n";
  return 0;
}

struct Evaluation {
  Dataset data;
  SplitAssignment split;
  EvalReport report;
};

Evaluation evaluate_bundle(const ModelBundle& b, const Common& c, const std::string& sidecar) {
  RunConfig cfg = b.run;
  Common overrides = c;
  overrides.config.clear();
  overrides.seed = -1;  // the split must match training
  {
    const RunConfig o = resolve(overrides);
    if (!c.format.empty()) cfg.data.format = o.data.format;
    if (!c.text_field.empty()) cfg.data.text_field = o.data.text_field;
    if (!c.label_field.empty()) cfg.data.label_field = o.data.label_field;
    if (!c.id_field.empty()) cfg.data.id_field = o.data.id_field;
    if (!c.delimiter.empty()) cfg.data.delimiter = o.data.delimiter;
  }
  const Dataset raw = load(c.data, cfg);
  Evaluation ev{Dataset(raw.examples(), b.labels), {}, {}};
  ev.split = stratified_split(ev.data, cfg.train_frac, cfg.val_frac, cfg.seed);
  std::optional<ContextualStore> store;
  if (b.contextual()) {
    const std::string path = sidecar.empty() ? cfg.embedding.path : sidecar;
    if (path.empty()) throw UsageError("contextual bundle: pass --contextual <sidecar>");
    store = load_contextual(path);
  }
  const LabeledInputs test = bundle_inputs(b, ev.data, ev.split.test_ids, store ? &*store : nullptr);
  const EmbeddingMatrix* emb = b.embeddings ? &*b.embeddings : nullptr;
  ev.report = evaluate(b.model, test, emb, b.labels);
  return ev;
}

int cmd_evaluate(const Common& c, const std::string& model, const std::string& sidecar) {
  const ModelBundle b = load_bundle(model);
  const Evaluation ev = evaluate_bundle(b, c, sidecar);
  const auto [requests, tokens] = class_stats(ev.data, ev.split);
  const RecallCorrelations corr = analyze_recall_correlations(ev.report, requests, tokens);
  const TokenLengthStats stats = token_length_stats(ev.data, ev.split);
  ReportInputs in;
  in.report = &ev.report;
  in.token_stats = &stats;
  in.correlations = &corr;
  in.config_json = b.run.to_json();
  in.seed = b.run.seed;
  const fs::path hist = model + ".history.csv";
  emit_report(c.out, in);
  if (fs::exists(hist)) fs::copy_file(hist, fs::path(c.out) / "history.csv", fs::copy_options::overwrite_existing);
  std::cout << "accuracy " << ev.report.accuracy << "\nuar " << ev.report.uar << "\nmacro_f "
            << ev.report.macro_f << "\nreport: " << c.out << "\n";
  return 0;
}

int cmd_predict(const std::string& model, const std::vector<std::string>& texts,
                const std::string& input, std::size_t top_k, const std::string& sidecar,
                const std::vector<std::string>& ids) {
  const ModelBundle b = load_bundle(model);
  auto show = [&](const Prediction& p) {
    if (top_k <= 1) {
      std::cout << p.intent << "\n";
      return;
    }
    std::cout << p.intent;
    for (const auto& [label, prob] : p.top_k) std::cout << '\t' << label << ':' << prob;
    std::cout << "\n";
  };
  const std::size_t k = std::max<std::size_t>(top_k, 1);
  if (b.contextual()) {
    if (!texts.empty() || !input.empty()) {
      throw UsageError("this bundle expects contextual embeddings and cannot score plain text; "
                       "use --contextual <sidecar> --id <request id>");
    }
    if (sidecar.empty() || ids.empty()) throw UsageError("contextual bundle: pass --contextual and --id");
    const ContextualStore store = load_contextual(sidecar);
    const auto inputs = contextual_inputs(store, ids, b.seq_len());
    for (const auto& x : inputs) show(predict_input(b, x, k));
    return 0;
  }
  std::vector<std::string> all = texts;
  if (!input.empty()) {
    std::istringstream lines(read_text(input));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      all.push_back(line);
    }
  }
  if (all.empty()) throw UsageError("predict: pass --text or --input");
  for (const auto& t : all) show(predict_text(b, t, k));
  return 0;
}

int cmd_analyze(const Common& c, const std::string& model, const std::string& report_dir,
                const std::string& table, const std::string& sidecar) {
  RecallCorrelations corr;
  EvalReport report;
  std::optional<TokenLengthStats> stats;
  std::string config_json;
  if (!table.empty()) {
    // intent,requests,mean_tokens,recall
    const auto rows = csv::parse(read_text(table));
    std::vector<double> requests, tokens;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& f = rows[i].fields;
      if (f.size() < 4) throw DataError(table + ": line " + std::to_string(rows[i].line) + " needs 4 fields");
      try {
        report.labels.push_back(f[0]);
        requests.push_back(std::stod(f[1]));
        tokens.push_back(std::stod(f[2]));
        report.recall.push_back(std::stod(f[3]));
      } catch (const std::logic_error&) {
        throw DataError(table + ": non-numeric value on line " + std::to_string(rows[i].line));
      }
    }
    corr = analyze_recall_correlations(report, requests, tokens);
  } else {
    if (c.data.empty()) throw UsageError("analyze: pass --table, or --data with --model or --report");
    Dataset d;
    SplitAssignment split;
    if (!model.empty()) {
      const ModelBundle b = load_bundle(model);
      Evaluation ev = evaluate_bundle(b, c, sidecar);
      report = ev.report;
      d = std::move(ev.data);
      split = ev.split;
      config_json = b.run.to_json();
    } else if (!report_dir.empty()) {
      report = read_report(report_dir);
      const RunConfig cfg = resolve(c);
      d = Dataset(load(c.data, cfg).examples(), report.labels);
      split = stratified_split(d, cfg.train_frac, cfg.val_frac, cfg.seed);
      config_json = cfg.to_json();
    } else {
      throw UsageError("analyze: pass --model or --report together with --data");
    }
    const auto [requests, tokens] = class_stats(d, split);
    corr = analyze_recall_correlations(report, requests, tokens);
    stats = token_length_stats(d, split);
  }
  ReportInputs in;
  in.correlations = &corr;
  in.token_stats = stats ? &*stats : nullptr;
  in.config_json = config_json;
  emit_report(c.out, in);
  auto line = [](const char* what, const CorrelationOutcome& o) {
    std::cout << what << ": ";
    if (!o.result) {
      std::cout << o.status << "\n";
      return;
    }
    std::cout << "pearson r=" << o.result->pearson_r << " p=" << o.result->pearson_p
              << ", spearman rho=" << o.result->spearman_rho << " p=" << o.result->spearman_p
              << ", n=" << o.result->n << "\n";
  };
  line("recall vs requests", corr.vs_requests);
  line("recall vs mean tokens", corr.vs_tokens);
  return 0;
}

IntentService* g_service = nullptr;

int cmd_serve(const std::string& model, const std::string& host, int port) {
  auto b = std::make_shared<const ModelBundle>(load_bundle(model));
  IntentService service(b);
  const int bound = service.bind(host, port);
  g_service = &service;
  std::signal(SIGINT, [](int) {
    if (g_service != nullptr) g_service->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_service != nullptr) g_service->stop();
  });
  std::cout << "serving " << to_string(b->model.config.architecture) << " on http://" << host << ":"
            << bound << std::endl;
  service.listen();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intent recognition for short customer requests: data preparation, training, "
               "evaluation and serving.",
               "intentrec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  Common prepare_opts, embed_opts, train_opts, eval_opts, analyze_opts;
  std::string vector_format = "text";
  std::string model, sidecar, input, report_dir, table, host = "127.0.0.1";
  std::vector<std::string> texts, ids;
  std::size_t top_k = 1;
  int port = 8080;

  auto* prepare = app.add_subcommand("prepare", "Split the data and write vocabulary and statistics");
  add_common(prepare, prepare_opts, true, true);

  auto* embed = app.add_subcommand("embed-train", "Train CBOW word vectors on the train split");
  add_common(embed, embed_opts, true, true);
  embed->add_option("--vector-format", vector_format, "Output vector format")
      ->check(CLI::IsMember({"text", "binary"}));

  auto* train = app.add_subcommand("train", "Train a model and write a bundle plus history");
  add_common(train, train_opts, true, true);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a bundle on its test split");
  add_common(evaluate, eval_opts, true, true);
  evaluate->add_option("--model", model, "Model bundle")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--contextual", sidecar, "Contextual embedding sidecar");

  auto* predict = app.add_subcommand("predict", "Print the predicted intent for each request");
  predict->add_option("--model", model, "Model bundle")->required()->check(CLI::ExistingFile);
  predict->add_option("--text", texts, "Request text (repeatable)");
  predict->add_option("--input", input, "File with one request per line")->check(CLI::ExistingFile);
  predict->add_option("--top-k", top_k, "Also print the k most likely intents")->check(CLI::PositiveNumber);
  predict->add_option("--contextual", sidecar, "Contextual embedding sidecar");
  predict->add_option("--id", ids, "Request id in the sidecar (repeatable)");

  auto* analyze = app.add_subcommand("analyze", "Correlate per-intent recall with data statistics");
  add_common(analyze, analyze_opts, false, true);
  analyze->add_option("--model", model, "Model bundle to evaluate")->check(CLI::ExistingFile);
  analyze->add_option("--report", report_dir, "Directory written by evaluate")->check(CLI::ExistingDirectory);
  analyze->add_option("--table", table, "CSV with intent,requests,mean_tokens,recall")->check(CLI::ExistingFile);
  analyze->add_option("--contextual", sidecar, "Contextual embedding sidecar");

  auto* serve = app.add_subcommand("serve", "Serve predictions over HTTP");
  serve->add_option("--model", model, "Model bundle")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*prepare) return cmd_prepare(prepare_opts);
    if (*embed) return cmd_embed_train(embed_opts, vector_format);
    if (*train) return cmd_train(train_opts);
    if (*evaluate) return cmd_evaluate(eval_opts, model, sidecar);
    if (*predict) return cmd_predict(model, texts, input, top_k, sidecar, ids);
    if (*analyze) return cmd_analyze(analyze_opts, model, report_dir, table, sidecar);
    if (*serve) return cmd_serve(model, host, port);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "training failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
