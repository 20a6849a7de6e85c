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

#include <random>

#include "intentrec/error.hpp"
#include "intentrec/models.hpp"

namespace intentrec {
namespace {

ModelConfig config_for(Architecture a) {
  ModelConfig c;
  c.architecture = a;
  return c;
}

Shape shape_after(const nn::Sequential& net, std::size_t layers, Shape in) {
  for (std::size_t i = 0; i < layers; ++i) in = net.layer(i).output_shape(in);
  return in;
}

TEST(ModelConfig, JsonRoundTrip) {
  ModelConfig c = config_for(Architecture::kParCnnBiLstm);
  c.parallel_kernels = {2, 4};
  c.dropout = 0.25;
  c.seed = 7;
  EXPECT_EQ(ModelConfig::from_json(c.to_json()), c);
  EXPECT_THROW(ModelConfig::from_json("{"), FormatError);
  EXPECT_THROW(ModelConfig::from_json(R"({"d_in": 3})"), FormatError);
  EXPECT_THROW(ModelConfig::from_json(R"({"architecture": "rnn"})"), std::invalid_argument);
}

TEST(ModelConfig, ArchitectureNames) {
  for (auto a : {Architecture::kCnn, Architecture::kParCnn, Architecture::kBiLstm,
                 Architecture::kParCnnBiLstm}) {
    EXPECT_EQ(parse_architecture(to_string(a)), a);
  }
}

TEST(ModelConfig, Validation) {
  ModelConfig c;
  c.classes = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ModelConfig{};
  c.dropout = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ModelConfig{};
  c.kernel = 14;
  EXPECT_THROW(c.validate(), ShapeError);
  c = config_for(Architecture::kParCnn);
  c.parallel_kernels = {2, 20};
  EXPECT_THROW(build_model(c), ShapeError);
  c.parallel_kernels.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Models, CnnShapesAndParameters) {
  const ModelGraph g = build_model(config_for(Architecture::kCnn));
  // conv -> relu -> flatten
  EXPECT_EQ(shape_after(g.network, 1, g.input_shape()), (Shape{9, 64}));
  EXPECT_EQ(shape_after(g.network, 3, g.input_shape()), (Shape{576}));
  EXPECT_EQ(count_parameters(g.network.layer(0)), 5u * 100 * 64 + 64);
  EXPECT_EQ(count_parameters(g.network.layer(0)), 32064u);
  const std::size_t expected = 32064 + (576 * 128 + 128) + (128 * 12 + 12);
  EXPECT_EQ(count_parameters(g), expected);
  EXPECT_EQ(count_parameters(g, 50), expected + 50 * 100);
}

TEST(Models, ParallelCnnConcatWidth) {
  const ModelGraph g = build_model(config_for(Architecture::kParCnn));
  EXPECT_EQ(shape_after(g.network, 1, g.input_shape()), (Shape{(12 + 11 + 10 + 9) * 64}));
  EXPECT_EQ(shape_after(g.network, 1, g.input_shape()), (Shape{2688}));
}

TEST(Models, BiLstmWidths) {
  const ModelGraph g = build_model(config_for(Architecture::kBiLstm));
  EXPECT_EQ(shape_after(g.network, 1, g.input_shape()), (Shape{256}));
  EXPECT_EQ(count_parameters(g.network.layer(0)), 2u * 4 * ((100 + 128) * 128 + 128));
}

TEST(Models, ParallelCnnBiLstmCropsToShortestBranch) {
  const ModelGraph g = build_model(config_for(Architecture::kParCnnBiLstm));
  EXPECT_EQ(shape_after(g.network, 1, g.input_shape()), (Shape{9, 256}));
  EXPECT_EQ(shape_after(g.network, 2, g.input_shape()), (Shape{256}));
}

class AllArchitectures : public ::testing::TestWithParam<Architecture> {};

TEST_P(AllArchitectures, PosteriorIsDistribution) {
  ModelConfig c = config_for(GetParam());
  c.d_in = 8;
  c.filters = 4;
  c.hidden = 6;
  c.classes = 5;
  c.parallel_kernels = {2, 3};
  c.kernel = 3;
  const ModelGraph g = build_model(c);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 10; ++t) {
    Tensor x(g.input_shape());
    for (double& v : x.values()) v = n(rng);
    const Tensor p = predict_one(g, x);
    ASSERT_EQ(p.shape(), (Shape{5}));
    double s = 0;
    for (double v : p.values()) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST_P(AllArchitectures, ZeroedOutputLayerIsUniform) {
  ModelConfig c = config_for(GetParam());
  c.d_in = 8;
  c.filters = 4;
  c.hidden = 6;
  c.classes = 4;
  c.parallel_kernels = {2, 3};
  c.kernel = 3;
  ModelGraph g = build_model(c);
  for (auto* p : g.network.parameters()) {
    if (p->name.rfind("fc_out", 0) == 0) p->value.fill(0.0);
  }
  const Tensor p = predict_one(g, Tensor(g.input_shape(), 0.3));
  for (double v : p.values()) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST_P(AllArchitectures, SameSeedSameWeights) {
  ModelConfig c = config_for(GetParam());
  c.d_in = 8;
  c.hidden = 6;
  c.filters = 4;
  const ModelGraph a = build_model(c), b = build_model(c);
  const auto pa = a.network.parameters(), pb = b.network.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
  c.seed += 1;
  const ModelGraph d = build_model(c);
  EXPECT_NE(d.network.parameters()[0]->value, pa[0]->value);
}

INSTANTIATE_TEST_SUITE_P(Models, AllArchitectures,
                         ::testing::Values(Architecture::kCnn, Architecture::kParCnn,
                                           Architecture::kBiLstm, Architecture::kParCnnBiLstm),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Models, PredictRejectsBadInput) {
  ModelConfig c;
  c.d_in = 4;
  const ModelGraph g = build_model(c);
  EXPECT_THROW(predict_one(g, Tensor({12, 4})), ShapeError);
  Tensor x(g.input_shape());
  x.at(3, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(predict_one(g, x), NumericError);
  const std::vector<Tensor> batch(3, Tensor(g.input_shape()));
  EXPECT_EQ(predict(g, batch).shape(), (Shape{3, 12}));
}

TEST(Models, BuilderRejectsWrongArchitecture) {
  EXPECT_THROW(build_bilstm(config_for(Architecture::kCnn)), std::invalid_argument);
}

}  // namespace
}  // namespace intentrec
