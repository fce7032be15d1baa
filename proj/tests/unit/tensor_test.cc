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

#include "lcrec/nn/tensor.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lcrec/errors.h"

namespace lcrec::nn {
namespace {

TEST(TensorTest, ShapeAndFill) {
  Tensor t({2, 3, 4}, 1.5);
  EXPECT_EQ(t.rank(), 3u);
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 12u);
  for (double v : t.values()) EXPECT_EQ(v, 1.5);
  t.Fill(-2.0);
  EXPECT_EQ(t[23], -2.0);
  EXPECT_EQ(t.ShapeString(), "[2x3x4]");
}

TEST(TensorTest, RowViewsAreContiguousSlices) {
  Tensor t({3, 2}, std::vector<double>{1, 2, 3, 4, 5, 6});
  auto r1 = t.row(1);
  ASSERT_EQ(r1.size(), 2u);
  EXPECT_EQ(r1[0], 3.0);
  EXPECT_EQ(r1[1], 4.0);
  t.row(2)[0] = 50.0;
  EXPECT_EQ(t.at(2, 0), 50.0);
}

TEST(TensorTest, DataSizeMustMatchShape) {
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  Tensor t({2, 3});
  EXPECT_THROW((void)t.Reshaped({4, 2}), ShapeError);
  EXPECT_EQ(t.Reshaped({3, 2}).cols(), 2u);
}

TEST(TensorTest, FiniteCheck) {
  Tensor t({2}, 0.0);
  EXPECT_TRUE(t.AllFinite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(t.AllFinite());
  t[1] = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(t.AllFinite());
}

TEST(TensorTest, EqualityComparesShapeAndValues) {
  Tensor a({2, 2}, 1.0);
  Tensor b({4}, 1.0);
  EXPECT_FALSE(a == b);
  EXPECT_TRUE(a == a.Reshaped({2, 2}));
}

}  // namespace
}  // namespace lcrec::nn
