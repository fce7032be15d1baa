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

#include "lcrec/nn/graph.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "lcrec/errors.h"
#include "lcrec/nn/gradcheck.h"
#include "lcrec/nn/parameter_store.h"
#include "test_support.h"

namespace lcrec::nn {
namespace {

using lcrec::testing::RandomTensor;

double Sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Naive triple loop: y[b][o] = act(sum_i x[b][i] * w[i][o] + bias[o]).
Tensor DenseOracle(const Tensor& x, const Tensor& w, const Tensor& bias,
                   Activation act) {
  const std::size_t batch = x.rows(), in = w.dim(0), out = w.dim(1);
  Tensor y({batch, out});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out; ++o) {
      double s = bias[o];
      for (std::size_t i = 0; i < in; ++i) s += x.at(b, i) * w.at(i, o);
      if (act == Activation::kRelu) s = s > 0 ? s : 0;
      if (act == Activation::kSigmoid) s = Sigmoid(s);
      y.at(b, o) = s;
    }
  }
  return y;
}

// Nested-loop valid cross-correlation.
Tensor ConvOracle(const Tensor& x, const Tensor& k, const Tensor& bias) {
  const std::size_t batch = x.dim(0), cin = x.dim(1), len = x.dim(2);
  const std::size_t cout = k.dim(0), width = k.dim(2), olen = len - width + 1;
  Tensor y({batch, cout, olen});
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t o = 0; o < cout; ++o)
      for (std::size_t t = 0; t < olen; ++t) {
        double s = bias[o];
        for (std::size_t c = 0; c < cin; ++c)
          for (std::size_t j = 0; j < width; ++j)
            s += k[(o * cin + c) * width + j] * x[(b * cin + c) * len + t + j];
        y[(b * cout + o) * olen + t] = s;
      }
  return y;
}

void ExpectNear(const Tensor& a, const Tensor& b, double tol) {
  ASSERT_EQ(a.shape(), b.shape());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << i;
}

TEST(GraphDenseTest, IdentityWeightsPassInputThrough) {
  ParameterStore store;
  Tensor w({3, 3});
  for (std::size_t i = 0; i < 3; ++i) w.at(i, i) = 1.0;
  store.Add("w", "g", w);
  store.Add("b", "g", Tensor({3}));
  Graph g(store);
  const Tensor x({2, 3}, std::vector<double>{1, -2, 3, 0.5, 7, -9});
  const Var y = g.Dense(g.Constant(x), g.Param("w"), g.Param("b"),
                        Activation::kIdentity);
  EXPECT_EQ(g.value(y), x);
}

TEST(GraphDenseTest, SigmoidOfZeroIsOneHalf) {
  ParameterStore store;
  store.Add("w", "g", Tensor({2, 4}));
  store.Add("b", "g", Tensor({4}));
  Graph g(store);
  const Var y = g.Dense(g.Constant(Tensor({1, 2}, 5.0)), g.Param("w"),
                        g.Param("b"), Activation::kSigmoid);
  for (double v : g.value(y).values()) EXPECT_EQ(v, 0.5);
}

TEST(GraphDenseTest, MatchesTripleLoopOracleOnRandomInstances) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t batch = dim(rng), in = dim(rng), out = dim(rng);
    const Activation act = static_cast<Activation>(trial % 3);
    ParameterStore store;
    store.Add("w", "g", RandomTensor({in, out}, rng));
    store.Add("b", "g", RandomTensor({out}, rng));
    const Tensor x = RandomTensor({batch, in}, rng, -2, 2);
    Graph g(store);
    const Var y = g.Dense(g.Constant(x), g.Param("w"), g.Param("b"), act);
    ExpectNear(g.value(y), DenseOracle(x, store.at("w").value, store.at("b").value, act),
               1e-12);
  }
}

TEST(GraphDenseTest, RejectsMismatchedInnerDimension) {
  ParameterStore store;
  store.Add("w", "g", Tensor({3, 2}));
  store.Add("b", "g", Tensor({2}));
  Graph g(store);
  EXPECT_THROW(g.Dense(g.Constant(Tensor({1, 4})), g.Param("w"), g.Param("b"),
                       Activation::kRelu),
               ShapeError);
}

TEST(GraphConvTest, UnitKernelSumsChannels) {
  ParameterStore store;
  store.Add("k", "g", Tensor({1, 3, 1}, 1.0));
  store.Add("b", "g", Tensor({1}));
  std::mt19937_64 rng(3);
  const Tensor x = RandomTensor({2, 3, 6}, rng);
  Graph g(store);
  const Tensor& y = g.value(g.Conv1d(g.Constant(x), g.Param("k"), g.Param("b")));
  ASSERT_EQ(y.shape(), (std::vector<std::size_t>{2, 1, 6}));
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t t = 0; t < 6; ++t) {
      double s = 0;
      for (std::size_t c = 0; c < 3; ++c) s += x[(b * 3 + c) * 6 + t];
      EXPECT_NEAR(y[b * 6 + t], s, 1e-15);
    }
}

TEST(GraphConvTest, ValidPaddingShapeArithmetic) {
  ParameterStore store;
  store.Add("k", "g", Tensor({8, 3, 5}));
  store.Add("b", "g", Tensor({8}));
  Graph g(store);
  const Var y = g.Conv1d(g.Constant(Tensor({1, 3, 20})), g.Param("k"), g.Param("b"));
  EXPECT_EQ(g.value(y).shape(), (std::vector<std::size_t>{1, 8, 16}));
}

TEST(GraphConvTest, MatchesNestedLoopOracleOnRandomInstances) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> small(1, 4);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t batch = small(rng), cin = small(rng), cout = small(rng) + 4;
    const std::size_t width = small(rng) + 1, len = width + small(rng) * 4;
    ParameterStore store;
    store.Add("k", "g", RandomTensor({cout, cin, width}, rng));
    store.Add("b", "g", RandomTensor({cout}, rng));
    const Tensor x = RandomTensor({batch, cin, len}, rng, -3, 3);
    Graph g(store);
    const Var y = g.Conv1d(g.Constant(x), g.Param("k"), g.Param("b"));
    ExpectNear(g.value(y), ConvOracle(x, store.at("k").value, store.at("b").value),
               1e-12);
  }
  // The documented instance: 3x20 input, 8 kernels of width 5.
  ParameterStore store;
  store.Add("k", "g", RandomTensor({8, 3, 5}, rng));
  store.Add("b", "g", RandomTensor({8}, rng));
  const Tensor x = RandomTensor({1, 3, 20}, rng);
  Graph g(store);
  ExpectNear(g.value(g.Conv1d(g.Constant(x), g.Param("k"), g.Param("b"))),
             ConvOracle(x, store.at("k").value, store.at("b").value), 1e-12);
}

TEST(GraphConvTest, RejectsInputShorterThanKernel) {
  ParameterStore store;
  store.Add("k", "g", Tensor({2, 1, 5}));
  store.Add("b", "g", Tensor({2}));
  Graph g(store);
  EXPECT_THROW(g.Conv1d(g.Constant(Tensor({1, 1, 4})), g.Param("k"), g.Param("b")),
               ShapeError);
}

TEST(GraphStopGradientTest, ForwardIsBitwiseIdentity) {
  ParameterStore store;
  std::mt19937_64 rng(5);
  store.Add("x", "g", RandomTensor({3, 4}, rng));
  Graph g(store);
  const Var x = g.Param("x");
  const Var s = g.StopGradient(x);
  EXPECT_EQ(g.value(s), g.value(x));
  EXPECT_FALSE(g.requires_grad(s));
}

TEST(GraphStopGradientTest, BlocksGradientExactly) {
  ParameterStore store;
  std::mt19937_64 rng(6);
  store.Add("x", "g", RandomTensor({2, 3}, rng));
  store.Add("y", "g", RandomTensor({2, 3}, rng));
  Graph g(store);
  // loss = sum(sg(x) * y) + 0 * x keeps x on the tape.
  const Var x = g.Param("x");
  const Var prod = g.Mul(g.StopGradient(x), g.Param("y"));
  const Var loss = g.SquaredError(prod, g.Constant(Tensor({2, 3})), 1.0);
  GradientBuffer grads = store.MakeGradientBuffer();
  g.Backward(loss, grads);
  for (double v : grads[store.IndexOf("x")].values()) EXPECT_EQ(v, 0.0);
  double norm = 0;
  for (double v : grads[store.IndexOf("y")].values()) norm += std::abs(v);
  EXPECT_GT(norm, 0.0);
}

TEST(GraphStopGradientTest, ReplayRestoresRecordedOperands) {
  ParameterStore store;
  store.Add("x", "g", Tensor({1, 2}, std::vector<double>{1, 2}));
  std::vector<Tensor> held;
  {
    Graph g(store);
    g.RecordStopGradients(&held);
    g.StopGradient(g.Param("x"));
  }
  ASSERT_EQ(held.size(), 1u);
  store.at("x").value[0] = 100.0;
  Graph g(store);
  g.ReplayStopGradients(&held);
  const Var s = g.StopGradient(g.Param("x"));
  EXPECT_EQ(g.value(s)[0], 1.0);
  EXPECT_THROW(g.StopGradient(g.Param("x")), ShapeError);
}

TEST(GraphSoftmaxTest, RowsAreProbabilityVectors) {
  ParameterStore store;
  std::mt19937_64 rng(7);
  Graph g(store);
  const Var p = g.Softmax(g.Constant(RandomTensor({5, 4}, rng, -30, 30)));
  const Tensor& v = g.value(p);
  for (std::size_t r = 0; r < 5; ++r) {
    double s = 0;
    for (double e : v.row(r)) {
      EXPECT_GE(e, 0.0);
      s += e;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  const Var single = g.Softmax(g.Constant(Tensor({3, 1}, 4.0)));
  for (double e : g.value(single).values()) EXPECT_EQ(e, 1.0);
}

TEST(GraphLossTest, SigmoidCrossEntropyMatchesDirectFormula) {
  ParameterStore store;
  Graph g(store);
  const std::vector<double> z = {-3.0, 0.2, 5.0, 1.0};
  const std::vector<double> y = {0, 1, 1, 0};
  const std::vector<double> mask = {1, 1, 0, 1};
  const Var loss = g.SigmoidCrossEntropy(g.Constant(Tensor({4, 1}, z)), y, mask, 3.0);
  double expected = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (mask[i] == 0) continue;
    const double p = Sigmoid(z[i]);
    expected -= y[i] * std::log(p) + (1 - y[i]) * std::log(1 - p);
  }
  EXPECT_NEAR(g.value(loss)[0], expected / 3.0, 1e-12);
  const Var none = g.SigmoidCrossEntropy(g.Constant(Tensor({4, 1}, z)), y,
                                         std::vector<double>(4, 0.0), 0.0);
  EXPECT_EQ(g.value(none)[0], 0.0);
}

TEST(GraphLossTest, CrossEntropyStaysFiniteForExtremeLogits) {
  ParameterStore store;
  Graph g(store);
  const std::vector<double> z = {-800.0, 800.0};
  const std::vector<double> y = {1, 0};
  const std::vector<double> mask = {1, 1};
  const Var loss = g.SigmoidCrossEntropy(g.Constant(Tensor({2, 1}, z)), y, mask, 1.0);
  EXPECT_TRUE(std::isfinite(g.value(loss)[0]));
  EXPECT_NEAR(g.value(loss)[0], 1600.0, 1e-9);
}

TEST(GraphBackwardTest, SharedInputAccumulatesBothPaths) {
  // loss = (a*x + b*x - t)^2 summed; each node's closure runs once, so the
  // gradient with respect to x is exactly the sum over both uses.
  ParameterStore store;
  store.Add("x", "g", Tensor({1, 1}, 1.5));
  Graph g(store);
  const Var x = g.Param("x");
  const Var y = g.Add(g.Scale(x, 2.0), g.Scale(x, 3.0));
  const Var loss = g.SquaredError(y, g.Constant(Tensor({1, 1}, 1.0)), 1.0);
  GradientBuffer grads = store.MakeGradientBuffer();
  g.Backward(loss, grads);
  EXPECT_DOUBLE_EQ(grads[0][0], 2.0 * (5.0 * 1.5 - 1.0) * 5.0);
}

TEST(GraphBackwardTest, RejectsNonScalarLoss) {
  ParameterStore store;
  store.Add("x", "g", Tensor({2, 2}, 1.0));
  Graph g(store);
  GradientBuffer grads = store.MakeGradientBuffer();
  EXPECT_THROW(g.Backward(g.Param("x"), grads), ShapeError);
}

TEST(GraphReluSignatureTest, ChangesOnlyWhenAPatternFlips) {
  ParameterStore store;
  auto signature = [&](double v) {
    Graph g(store);
    g.Relu(g.Constant(Tensor({1, 2}, std::vector<double>{v, 1.0})));
    return g.relu_signature();
  };
  EXPECT_EQ(signature(0.5), signature(2.0));
  EXPECT_NE(signature(0.5), signature(-0.5));
}

// Builds a scalar objective on the store from a graph and checks every
// parameter's backward against central differences.
GradCheckReport CheckObjective(ParameterStore& store,
                               const std::function<Var(Graph&)>& objective) {
  auto loss = [&] {
    Graph g(store);
    const Var l = objective(g);
    return LossProbe{g.value(l)[0], g.relu_signature()};
  };
  auto analytic = [&] {
    Graph g(store);
    const Var l = objective(g);
    GradientBuffer grads = store.MakeGradientBuffer();
    g.Backward(l, grads);
    store.ZeroGrad();
    store.AccumulateGradients(grads);
  };
  return FiniteDiffCheck(store, loss, analytic);
}

class PrimitiveGradientTest : public ::testing::Test {
 protected:
  void Check(const std::function<Var(Graph&)>& objective, double tol = 1e-6) {
    const GradCheckReport report = CheckObjective(store_, objective);
    for (const GroupGradCheck& group : report.groups) {
      EXPECT_GT(group.entries, 0u) << group.group;
      EXPECT_LT(group.max_relative_error, tol) << group.group;
    }
  }
  Var Reduce(Graph& g, Var y) {
    const Tensor& v = g.value(y);
    Tensor target(v.shape());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = 0.1 * (i % 7) - 0.3;
    return g.SquaredError(y, g.Constant(target), 1.0);
  }
  ParameterStore store_;
  std::mt19937_64 rng_{21};
};

TEST_F(PrimitiveGradientTest, DenseAllActivations) {
  store_.Add("x", "x", RandomTensor({3, 4}, rng_));
  store_.Add("w", "w", RandomTensor({4, 5}, rng_));
  store_.Add("b", "b", RandomTensor({5}, rng_));
  for (Activation act : {Activation::kIdentity, Activation::kRelu, Activation::kSigmoid}) {
    Check([&](Graph& g) {
      return Reduce(g, g.Dense(g.Param("x"), g.Param("w"), g.Param("b"), act));
    });
  }
}

TEST_F(PrimitiveGradientTest, Conv1d) {
  store_.Add("x", "x", RandomTensor({2, 3, 9}, rng_));
  store_.Add("k", "k", RandomTensor({4, 3, 3}, rng_));
  store_.Add("b", "b", RandomTensor({4}, rng_));
  Check([&](Graph& g) {
    return Reduce(g, g.Conv1d(g.Param("x"), g.Param("k"), g.Param("b")));
  });
}

TEST_F(PrimitiveGradientTest, ElementwiseAndStructuralOps) {
  store_.Add("a", "a", RandomTensor({3, 4}, rng_));
  store_.Add("b", "b", RandomTensor({3, 4}, rng_));
  store_.Add("c", "c", RandomTensor({3, 2}, rng_));
  Check([&](Graph& g) {
    const Var a = g.Param("a"), b = g.Param("b"), c = g.Param("c");
    const Var m = g.Mul(g.Sub(a, g.Scale(b, 0.7)), g.Sigmoid(g.Add(a, b)));
    const Var parts[] = {m, g.Relu(c), g.Flatten(c)};
    return Reduce(g, g.Concat(parts));
  });
}

TEST_F(PrimitiveGradientTest, SoftmaxAndMixture) {
  store_.Add("w", "w", RandomTensor({4, 3}, rng_, -2, 2));
  store_.Add("e0", "e", RandomTensor({4, 5}, rng_));
  store_.Add("e1", "e", RandomTensor({4, 5}, rng_));
  store_.Add("e2", "e", RandomTensor({4, 5}, rng_));
  Check([&](Graph& g) {
    const Var experts[] = {g.Param("e0"), g.Param("e1"), g.Param("e2")};
    return Reduce(g, g.Mixture(g.Softmax(g.Param("w")), experts));
  });
}

TEST_F(PrimitiveGradientTest, LossesAndWeightedSum) {
  store_.Add("z", "z", RandomTensor({6, 1}, rng_, -3, 3));
  store_.Add("a", "a", RandomTensor({2, 3}, rng_));
  store_.Add("b", "b", RandomTensor({2, 3}, rng_));
  const std::vector<double> y = {1, 0, 1, 1, 0, 0};
  const std::vector<double> mask = {1, 1, 0, 1, 1, 0};
  Check([&](Graph& g) {
    const Var terms[] = {g.SigmoidCrossEntropy(g.Param("z"), y, mask, 4.0),
                         g.SquaredError(g.Param("a"), g.Param("b"), 6.0)};
    const double weights[] = {1.0, 0.5};
    return g.WeightedSum(terms, weights);
  });
}

TEST_F(PrimitiveGradientTest, QuadraticOnDenseLayerIsNearExact) {
  store_.Add("w", "dense", RandomTensor({3, 2}, rng_));
  store_.Add("b", "dense", RandomTensor({2}, rng_));
  const Tensor x = RandomTensor({4, 3}, rng_);
  Check(
      [&](Graph& g) {
        return Reduce(g, g.Dense(g.Constant(x), g.Param("w"), g.Param("b"),
                                 Activation::kIdentity));
      },
      1e-7);
}

TEST_F(PrimitiveGradientTest, LayerBehindStopGradientHasZeroGradient) {
  store_.Add("w", "hidden", RandomTensor({3, 3}, rng_));
  store_.Add("b", "hidden", RandomTensor({3}, rng_));
  store_.Add("v", "head", RandomTensor({3, 1}, rng_));
  store_.Add("c", "head", RandomTensor({1}, rng_));
  const Tensor x = RandomTensor({5, 3}, rng_);
  std::vector<Tensor> held;
  auto objective = [&](Graph& g) {
    const Var h = g.Dense(g.Constant(x), g.Param("w"), g.Param("b"),
                          Activation::kSigmoid);
    return Reduce(g, g.Dense(g.StopGradient(h), g.Param("v"), g.Param("c"),
                             Activation::kIdentity));
  };
  // Without replay the finite difference sees the layer move; the analytic
  // gradient must still be exactly zero.
  Graph g(store_);
  GradientBuffer grads = store_.MakeGradientBuffer();
  g.Backward(objective(g), grads);
  for (std::size_t i : {store_.IndexOf("w"), store_.IndexOf("b")}) {
    for (double v : grads[i].values()) EXPECT_EQ(v, 0.0);
  }
  // With the operand replayed, the finite difference agrees: zero within 1e-9.
  {
    Graph rec(store_);
    rec.RecordStopGradients(&held);
    objective(rec);
  }
  auto loss = [&] {
    Graph r(store_);
    r.ReplayStopGradients(&held);
    return LossProbe{r.value(objective(r))[0], 0};
  };
  auto analytic = [&] {
    Graph r(store_);
    GradientBuffer gb = store_.MakeGradientBuffer();
    r.Backward(objective(r), gb);
    store_.ZeroGrad();
    store_.AccumulateGradients(gb);
  };
  const GradCheckReport report = FiniteDiffCheck(store_, loss, analytic);
  for (const GroupGradCheck& group : report.groups) {
    if (group.group == "hidden") {
      EXPECT_EQ(group.max_abs_analytic, 0.0);
      EXPECT_LT(group.max_abs_error, 1e-9);
    } else {
      EXPECT_LT(group.max_relative_error, 1e-7);
    }
  }
}

TEST(GraphDeterminismTest, RepeatedForwardIsBitwiseEqual) {
  ParameterStore store;
  std::mt19937_64 rng(8);
  store.Add("k", "g", RandomTensor({4, 3, 3}, rng));
  store.Add("b", "g", RandomTensor({4}, rng));
  const Tensor x = RandomTensor({2, 3, 10}, rng);
  auto run = [&] {
    Graph g(store);
    return g.value(g.Relu(g.Conv1d(g.Constant(x), g.Param("k"), g.Param("b"))));
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace lcrec::nn
