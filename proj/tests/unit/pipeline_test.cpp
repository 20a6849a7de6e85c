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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "toy_bundle.hpp"
#include "intentrec/error.hpp"
#include "intentrec/pipeline.hpp"

namespace intentrec {
namespace {

ModelConfig small_cnn(std::size_t classes, std::size_t seq_len, std::size_t d) {
  ModelConfig c;
  c.architecture = Architecture::kCnn;
  c.d_in = d;
  c.seq_len = seq_len;
  c.classes = classes;
  c.filters = 4;
  c.kernel = 2;
  c.hidden = 8;
  c.dropout = 0.0;
  return c;
}

// Two overlapping Gaussian blobs in the first feature, 9:1 imbalance.
LabeledInputs imbalanced(std::size_t major, std::size_t minor, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  LabeledInputs in;
  for (std::size_t i = 0; i < major + minor; ++i) {
    const int y = i < major ? 0 : 1;
    Tensor x({3, 2});
    for (std::size_t r = 0; r < 3; ++r) {
      x.at(r, 0) = (y == 0 ? -0.5 : 0.5) + noise(rng);
      x.at(r, 1) = noise(rng) * 0.1;
    }
    in.dense.push_back(x);
    in.labels.push_back(y);
  }
  return in;
}

TEST(Train, HistoryHasOneRowPerEpoch) {
  ModelGraph g = build_model(small_cnn(2, 3, 2));
  const LabeledInputs data = imbalanced(20, 20, 1);
  TrainConfig cfg;
  cfg.epochs = 7;
  cfg.batch_size = 8;
  cfg.lr = 1e-2;
  const TrainHistory h = train(g, data, &data, nullptr, cfg);
  ASSERT_EQ(h.epochs.size(), 7u);
  for (std::size_t e = 0; e < 7; ++e) {
    EXPECT_EQ(h.epochs[e].epoch, e + 1);
    EXPECT_TRUE(h.epochs[e].val_accuracy.has_value());
  }
  EXPECT_LT(h.epochs.back().train_loss, h.epochs.front().train_loss);
  std::istringstream csv(h.to_csv());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "epoch,train_loss,train_accuracy,val_accuracy,val_uar");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 7u);
}

TEST(Train, NoValidationLeavesColumnsEmpty) {
  ModelGraph g = build_model(small_cnn(2, 3, 2));
  TrainConfig cfg;
  cfg.epochs = 1;
  const TrainHistory h = train(g, imbalanced(4, 4, 2), nullptr, nullptr, cfg);
  EXPECT_FALSE(h.epochs[0].val_accuracy.has_value());
  EXPECT_NE(h.to_csv().find("\n1,"), std::string::npos);
  EXPECT_EQ(h.to_csv().substr(h.to_csv().size() - 3), ",,\n");
}

TEST(Train, DeterministicForFixedSeed) {
  ModelConfig mc = small_cnn(2, 3, 2);
  mc.dropout = 0.3;
  const LabeledInputs data = imbalanced(30, 10, 3);
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 5;
  cfg.lr = 1e-3;
  ModelGraph a = build_model(mc), b = build_model(mc);
  const TrainHistory ha = train(a, data, &data, nullptr, cfg);
  const TrainHistory hb = train(b, data, &data, nullptr, cfg);
  EXPECT_EQ(ha.epochs, hb.epochs);
  const auto pa = a.network.parameters(), pb = b.network.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i]->value, pb[i]->value);
  cfg.seed = 7;
  ModelGraph c = build_model(mc);
  EXPECT_NE(train(c, data, &data, nullptr, cfg).epochs, ha.epochs);
}

TEST(Train, ClassWeightingRaisesMinorityRecall) {
  const LabeledInputs data = imbalanced(270, 30, 4);
  const LabeledInputs test = imbalanced(450, 50, 5);
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.batch_size = 32;
  cfg.lr = 3e-3;
  auto minority_recall = [&](bool weighted) {
    TrainConfig c = cfg;
    c.class_weighting = weighted;
    ModelGraph g = build_model(small_cnn(2, 3, 2));
    train(g, data, nullptr, nullptr, c);
    return evaluate(g, test, nullptr).recall[1];
  };
  const double plain = minority_recall(false);
  const double weighted = minority_recall(true);
  EXPECT_GT(weighted, plain + 0.2) << "plain " << plain << " weighted " << weighted;
}

TEST(Train, NonFiniteLossAborts) {
  ModelGraph g = build_model(small_cnn(2, 3, 2));
  for (auto* p : g.network.parameters()) {
    if (p->name == "fc_out.weights") p->value[0] = std::numeric_limits<double>::quiet_NaN();
  }
  TrainConfig cfg;
  cfg.epochs = 2;
  try {
    train(g, imbalanced(4, 4, 6), nullptr, nullptr, cfg);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1, batch 0"), std::string::npos) << e.what();
  }
}

TEST(Train, ConfigValidation) {
  ModelGraph g = build_model(small_cnn(2, 3, 2));
  TrainConfig cfg;
  cfg.lr = 0;
  EXPECT_THROW(train(g, imbalanced(2, 2, 1), nullptr, nullptr, cfg), std::invalid_argument);
  cfg = TrainConfig{};
  EXPECT_THROW(train(g, LabeledInputs{}, nullptr, nullptr, cfg), DataError);
  // a class missing from the train split has no weight
  EXPECT_THROW(train(g, imbalanced(4, 0, 1), nullptr, nullptr, cfg), DataError);
}

TEST(Evaluate, EmptySplitRejected) {
  const ModelGraph g = build_model(small_cnn(2, 3, 2));
  EXPECT_THROW(evaluate(g, LabeledInputs{}, nullptr), DataError);
}

TEST(Correlate, ZeroVarianceIsReportedNotThrown) {
  const std::vector<double> x{1, 2, 3, 4}, flat{0.5, 0.5, 0.5, 0.5};
  const auto out = correlate(x, flat);
  EXPECT_FALSE(out.result.has_value());
  EXPECT_EQ(out.status, "zero variance");
  const auto ok = correlate(x, std::vector<double>{1, 3, 2, 4});
  ASSERT_TRUE(ok.result.has_value());
  EXPECT_EQ(ok.status, "ok");
  EXPECT_NEAR(ok.result->spearman_rho, 0.8, 1e-12);
}

TEST(Correlate, ScatterHasOneRowPerClass) {
  const std::vector<int> t{0, 0, 1, 1, 2, 2}, p{0, 1, 1, 1, 2, 0};
  const EvalReport r = compute_report(t, p, 3, {"a", "b", "c"});
  const std::vector<double> requests{100, 20, 5}, tokens{3.0, 4.5, 2.0};
  const auto rc = analyze_recall_correlations(r, requests, tokens);
  ASSERT_EQ(rc.points.size(), 3u);
  EXPECT_EQ(rc.points[1].intent, "b");
  EXPECT_EQ(rc.points[1].recall, 1.0);
  EXPECT_EQ(rc.points[2].mean_tokens, 2.0);
  EXPECT_TRUE(rc.vs_requests.result.has_value());
  EXPECT_THROW(analyze_recall_correlations(r, std::vector<double>{1, 2}, tokens), ShapeError);
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.seed = 9;
  c.train.epochs = 3;
  c.train.trainable_embeddings = true;
  c.model.architecture = Architecture::kBiLstm;
  c.embedding.source = EmbeddingSource::kPretrained;
  c.embedding.path = "/tmp/v.bin";
  c.embedding.format = VectorFormat::kBinary;
  c.data.text_field = "answer";
  const RunConfig back = RunConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.train, c.train);
  EXPECT_EQ(back.model, c.model);
  EXPECT_THROW(RunConfig::from_json("[1,"), FormatError);
}

RunConfig toy_run() { return testing::toy_run_config(30); }

TEST(Experiment, PrepareDataUsesTrainVocabulary) {
  const Dataset d = testing::toy_dataset(3, 40, 1);
  const PreparedData p = prepare_data(d, toy_run());
  EXPECT_EQ(p.train.size() + p.validation.size() + p.test.size(), d.size());
  EXPECT_EQ(p.seq_len, p.token_stats.percentile(95.0));
  for (const auto& s : p.train.sequences) EXPECT_EQ(s.ids.size(), p.seq_len);
  RunConfig fixed = toy_run();
  fixed.seq_len = 9;
  EXPECT_EQ(prepare_data(d, fixed).seq_len, 9u);
}

TEST(Experiment, ToyCorpusIsLearned) {
  const Dataset d = testing::toy_dataset(3, 60, 2);
  const Experiment e = run_experiment(d, toy_run());
  EXPECT_EQ(e.history.epochs.size(), 30u);
  EXPECT_EQ(e.report.labels, d.labels());
  EXPECT_GT(e.report.accuracy, 0.8);
  ASSERT_TRUE(e.embeddings.has_value());
  EXPECT_EQ(e.model.config.seq_len, e.data.seq_len);
  EXPECT_EQ(e.model.config.d_in, 8u);
  // same inputs, same outcome
  EXPECT_EQ(run_experiment(d, toy_run()).report, e.report);
}

TEST(Experiment, TrainableEmbeddingsKeepPadZero) {
  const Dataset d = testing::toy_dataset(2, 30, 3);
  RunConfig c = toy_run();
  c.train.epochs = 3;
  c.train.trainable_embeddings = true;
  const Experiment e = run_experiment(d, c);
  for (double v : e.embeddings->table.row(Vocabulary::kPad)) EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace intentrec
