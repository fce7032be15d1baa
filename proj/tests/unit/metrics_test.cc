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

#include "lcrec/eval/metrics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lcrec/errors.h"

namespace lcrec::eval {
namespace {

// Fraction of (positive, negative) pairs ordered correctly, ties count half.
std::optional<double> PairwiseAuc(const std::vector<double>& s, const std::vector<int>& y) {
  double good = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        good += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
    }
  }
  if (pairs == 0) return std::nullopt;
  return good / pairs;
}

TEST(AucTest, MatchesPairwiseCounting) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> size(2, 40), bucket(0, 6), coin(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = size(rng);
    std::vector<double> s(static_cast<std::size_t>(n));
    std::vector<int> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      s[static_cast<std::size_t>(i)] = bucket(rng) / 6.0;  // plenty of ties
      y[static_cast<std::size_t>(i)] = coin(rng);
    }
    const auto expected = PairwiseAuc(s, y);
    const auto actual = Auc(s, y);
    ASSERT_EQ(expected.has_value(), actual.has_value());
    if (expected) EXPECT_NEAR(*actual, *expected, 1e-12);
  }
}

TEST(AucTest, SmallExamples) {
  EXPECT_DOUBLE_EQ(*Auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(*Auc(std::vector<double>{0.5, 0.5}, std::vector<int>{0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(*Auc(std::vector<double>{0.9, 0.1}, std::vector<int>{0, 1}), 0.0);
  EXPECT_FALSE(Auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}).has_value());
  EXPECT_THROW(Auc(std::vector<double>{0.1}, std::vector<int>{}), std::invalid_argument);
}

TEST(GaucTest, ImpressionWeightedMeanOverEligibleUsers) {
  // User 1: 4 impressions, AUC 0.75. User 2: 2 impressions, AUC 1.
  // User 3 only has negatives and is skipped.
  const std::vector<UserId> users = {1, 1, 1, 1, 2, 2, 3, 3, 3};
  const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8, 0.2, 0.9, 0.5, 0.1, 0.3};
  const std::vector<int> labels = {0, 0, 1, 1, 0, 1, 0, 0, 0};
  const GaucReport r = Gauc(users, scores, labels);
  EXPECT_NEAR(r.gauc, (4 * 0.75 + 2 * 1.0) / 6.0, 1e-15);
  EXPECT_EQ(r.skipped_users, 1u);
  EXPECT_EQ(r.weighted_impressions, 6u);
  ASSERT_EQ(r.users.size(), 2u);
  EXPECT_EQ(r.users[0].user, 1u);
  EXPECT_EQ(r.users[1].impressions, 2u);
}

TEST(GaucTest, SingleUserEqualsPlainAuc) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(50);
  std::vector<int> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    s[i] = u(rng);
    y[i] = u(rng) < 0.3;
  }
  const std::vector<UserId> users(50, 7);
  EXPECT_DOUBLE_EQ(Gauc(users, s, y).gauc, *Auc(s, y));
}

class GaucPropertyTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<UserId> user(1, 12);
    for (int i = 0; i < 300; ++i) {
      users_.push_back(user(rng_));
      scores_.push_back(u(rng_));
      labels_.push_back(u(rng_) < 0.3 ? 1 : 0);
    }
  }
  std::mt19937_64 rng_{3};
  std::vector<UserId> users_;
  std::vector<double> scores_;
  std::vector<int> labels_;
};

TEST_F(GaucPropertyTest, InvariantToMonotoneScoreTransforms) {
  std::vector<double> transformed;
  for (double s : scores_) transformed.push_back(std::exp(3.0 * s) - 10.0);
  EXPECT_NEAR(Gauc(users_, scores_, labels_).gauc, Gauc(users_, transformed, labels_).gauc, 1e-12);
}

TEST_F(GaucPropertyTest, InvariantToDuplicatingTheWholeLog) {
  auto users = users_;
  auto scores = scores_;
  auto labels = labels_;
  users.insert(users.end(), users_.begin(), users_.end());
  scores.insert(scores.end(), scores_.begin(), scores_.end());
  labels.insert(labels.end(), labels_.begin(), labels_.end());
  EXPECT_NEAR(Gauc(users_, scores_, labels_).gauc, Gauc(users, scores, labels).gauc, 1e-12);
}

TEST_F(GaucPropertyTest, InvariantToRowOrder) {
  std::vector<std::size_t> perm(users_.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng_);
  std::vector<UserId> u;
  std::vector<double> s;
  std::vector<int> y;
  for (std::size_t i : perm) {
    u.push_back(users_[i]);
    s.push_back(scores_[i]);
    y.push_back(labels_[i]);
  }
  EXPECT_NEAR(Gauc(users_, scores_, labels_).gauc, Gauc(u, s, y).gauc, 1e-12);
}

TEST_F(GaucPropertyTest, PerfectAndReversedRankings) {
  std::vector<double> perfect, reversed;
  for (int y : labels_) {
    perfect.push_back(y);
    reversed.push_back(-y);
  }
  EXPECT_DOUBLE_EQ(Gauc(users_, perfect, labels_).gauc, 1.0);
  EXPECT_DOUBLE_EQ(Gauc(users_, reversed, labels_).gauc, 0.0);
}

TEST(GaucTest, NoEligibleUserIsADataError) {
  const std::vector<UserId> users = {1, 2};
  EXPECT_THROW(Gauc(users, std::vector<double>{0.1, 0.2}, std::vector<int>{1, 0}), DataError);
  EXPECT_THROW(Gauc(users, std::vector<double>{0.1}, std::vector<int>{1, 0}), std::invalid_argument);
}

}  // namespace
}  // namespace lcrec::eval
