// Copyright 2026 The lcrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lcrec/nn/optimizer.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lcrec/errors.h"
#include "lcrec/nn/parameter_store.h"
#include "test_support.h"

namespace lcrec::nn {
namespace {

TEST(AdamTest, FirstStepWithUnitGradientMovesByLearningRate) {
  ParameterStore store;
  store.Add("p", "g", Tensor({1}, 0.0));
  AdamOptimizer adam(store, AdamConfig{0.1});
  store[0].grad[0] = 1.0;
  adam.Step(store);
  // m_hat = 1, v_hat = 1, so the step is lr / (1 + eps).
  EXPECT_NEAR(store[0].value[0], -0.1 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(adam.step_count(), 1);
}

TEST(AdamTest, ConstantGradientKeepsUnitNormalizedSteps) {
  ParameterStore store;
  store.Add("p", "g", Tensor({1}, 0.0));
  AdamOptimizer adam(store, AdamConfig{0.1});
  for (int t = 0; t < 5; ++t) {
    store[0].grad[0] = 3.0;
    adam.Step(store);
  }
  EXPECT_NEAR(store[0].value[0], -0.5, 1e-7);
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  ParameterStore store;
  std::mt19937_64 rng(1);
  store.Add("p", "g", lcrec::testing::RandomTensor({3, 3}, rng));
  const Tensor before = store[0].value;
  AdamOptimizer adam(store, AdamConfig{});
  adam.Step(store);
  EXPECT_EQ(store[0].value, before);
  EXPECT_EQ(adam.step_count(), 1);
}

TEST(AdamTest, FrozenAndBufferParametersAreSkipped) {
  ParameterStore store;
  store.Add("a", "frozen.group", Tensor({2}, 1.0));
  store.Add("b", "buffers", Tensor({2}, 1.0), /*trainable=*/false);
  store.Add("c", "live", Tensor({2}, 1.0));
  EXPECT_EQ(store.FreezeGroups("frozen"), 1u);
  for (Parameter& p : store) p.grad.Fill(1.0);
  AdamOptimizer adam(store, AdamConfig{0.5});
  adam.Step(store);
  EXPECT_EQ(store[0].value[0], 1.0);
  EXPECT_EQ(store[1].value[0], 1.0);
  EXPECT_LT(store[2].value[0], 1.0);
}

TEST(AdamTest, NonFiniteGradientNamesTheParameter) {
  ParameterStore store;
  store.Add("encoder.weight", "g", Tensor({2}, 0.0));
  AdamOptimizer adam(store, AdamConfig{});
  store[0].grad[1] = std::numeric_limits<double>::quiet_NaN();
  try {
    adam.Step(store);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("encoder.weight"), std::string::npos);
  }
}

TEST(AdamTest, IdenticalRunsProduceIdenticalTrajectories) {
  auto run = [] {
    ParameterStore store;
    std::mt19937_64 rng(4);
    store.Add("p", "g", lcrec::testing::RandomTensor({4}, rng));
    AdamOptimizer adam(store, AdamConfig{0.01});
    for (int t = 0; t < 20; ++t) {
      for (std::size_t j = 0; j < 4; ++j) {
        store[0].grad[j] = std::sin(store[0].value[j] * (t + 1));
      }
      adam.Step(store);
    }
    return store[0].value;
  };
  EXPECT_EQ(run(), run());
}

TEST(ParameterStoreTest, NamesAreUniqueAndIndexed) {
  ParameterStore store;
  EXPECT_EQ(store.Add("a", "g1", Tensor({2})), 0u);
  EXPECT_EQ(store.Add("b", "g2", Tensor({3, 1})), 1u);
  EXPECT_THROW(store.Add("a", "g1", Tensor({1})), std::invalid_argument);
  EXPECT_EQ(store.IndexOf("b"), 1u);
  EXPECT_THROW(store.IndexOf("zzz"), std::out_of_range);
  EXPECT_EQ(store.at("b").grad.shape(), store.at("b").value.shape());
  EXPECT_EQ(store.Groups(), (std::vector<std::string>{"g1", "g2"}));
  EXPECT_EQ(store.TrainableScalarCount(), 5u);
}

TEST(ParameterStoreTest, SnapshotRoundTrip) {
  ParameterStore store;
  store.Add("a", "g", Tensor({2}, 1.0));
  const auto snapshot = store.SnapshotValues();
  store[0].value.Fill(7.0);
  store.RestoreValues(snapshot);
  EXPECT_EQ(store[0].value[0], 1.0);
  EXPECT_THROW(store.RestoreValues({}), ShapeError);
}

TEST(ParameterStoreTest, InitUniformFanInRespectsBound) {
  std::mt19937_64 rng(9);
  Tensor t({16, 8});
  InitUniformFanIn(t, 16, rng);
  double max_abs = 0;
  for (double v : t.values()) max_abs = std::max(max_abs, std::abs(v));
  EXPECT_LE(max_abs, 0.25);
  EXPECT_GT(max_abs, 0.15);
}

}  // namespace
}  // namespace lcrec::nn
