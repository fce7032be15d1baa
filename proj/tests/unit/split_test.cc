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

#include "lcrec/data/split.h"

#include <gtest/gtest.h>

#include <set>

#include "lcrec/errors.h"

namespace lcrec {
namespace {

constexpr std::int64_t kDay0 = 1649980800;

RankingSample SampleOn(int day, std::uint64_t id) {
  RankingSample s;
  s.sample_id = id;
  s.user_id = id % 3;
  s.timestamp = kDay0 + (day - 1) * kSecondsPerDay + 100;
  return s;
}

std::vector<RankingSample> OnePerDay(int days) {
  std::vector<RankingSample> out;
  for (int d = 1; d <= days; ++d) out.push_back(SampleOn(d, d));
  return out;
}

std::set<int> Days(const std::vector<RankingSample>& samples) {
  std::set<int> out;
  for (const auto& s : samples) out.insert(s.day_index);
  return out;
}

TEST(SplitTest, TenDaysEightOneOne) {
  const DatasetSplit split = SplitByDay({}, OnePerDay(10), 0, {8, 9});
  EXPECT_EQ(Days(split.train), (std::set<int>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(Days(split.validation), (std::set<int>{9}));
  EXPECT_EQ(Days(split.test), (std::set<int>{10}));
}

TEST(SplitTest, ThirtyDayLayoutWithFeatureWindow) {
  std::vector<BehaviorEvent> events;
  for (int d = 1; d <= 30; ++d) {
    events.push_back({1, 5, 2, ActionType::kExposure, kDay0 + (d - 1) * kSecondsPerDay});
  }
  const DatasetSplit split = SplitByDay(events, OnePerDay(30), 20, {28, 29});
  EXPECT_EQ(Days(split.train), (std::set<int>{21, 22, 23, 24, 25, 26, 27, 28}));
  EXPECT_EQ(Days(split.validation), (std::set<int>{29}));
  EXPECT_EQ(Days(split.test), (std::set<int>{30}));
  EXPECT_EQ(split.window_events.size(), 20u);
  EXPECT_EQ(split.last_day, 30);
  // Every retained window event precedes every training day.
  for (const BehaviorEvent& e : split.window_events) {
    for (const RankingSample& s : split.train) EXPECT_LT(e.timestamp, s.timestamp);
  }
}

TEST(SplitTest, SingleDayCannotBeSplit) {
  EXPECT_THROW(SplitByDay({}, {SampleOn(1, 1)}, 0, {0, 0}), DataError);
  EXPECT_THROW(SplitByDay({}, {SampleOn(1, 1)}, 0, {1, 2}), DataError);
  EXPECT_THROW(SplitByDay({}, {}, 0, {1, 2}), DataError);
}

TEST(SplitTest, BoundariesOutsideRangeAreRejected) {
  EXPECT_THROW(SplitByDay({}, OnePerDay(10), 0, {9, 10}), DataError);
  EXPECT_THROW(SplitByDay({}, OnePerDay(10), 5, {5, 8}), DataError);
  EXPECT_THROW(SplitByDay({}, OnePerDay(10), 0, {8, 8}), DataError);
}

TEST(SplitTest, SplitsAreDisjointByIdAndDay) {
  std::vector<RankingSample> samples;
  std::uint64_t id = 0;
  for (int d = 1; d <= 12; ++d)
    for (int k = 0; k < 5; ++k) samples.push_back(SampleOn(d, id++));
  const DatasetSplit split = SplitByDay({}, samples, 2, {9, 11});
  std::set<std::uint64_t> seen;
  std::size_t total = 0;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (const RankingSample& s : *part) {
      EXPECT_TRUE(seen.insert(s.sample_id).second) << s.sample_id;
      ++total;
    }
  }
  EXPECT_EQ(total, 50u);  // days 1-2 are the feature window
  for (const auto& s : split.train) EXPECT_LE(s.day_index, 9);
  for (const auto& s : split.validation) EXPECT_TRUE(s.day_index == 10 || s.day_index == 11);
  for (const auto& s : split.test) EXPECT_EQ(s.day_index, 12);
}

TEST(SamplesFromEventsTest, LabelsFollowSameDayClicksAndInteractions) {
  const std::int64_t t = kDay0 + 3 * kSecondsPerDay;
  std::vector<BehaviorEvent> events = {
      {1, 1, 1, ActionType::kExposure, kDay0},
      {1, 7, 1, ActionType::kExposure, t},
      {1, 7, 1, ActionType::kClick, t + 5},
      {1, 7, 1, ActionType::kInteraction, t + 9},
      {1, 8, 1, ActionType::kExposure, t},
      {1, 8, 1, ActionType::kInteraction, t + 2},
      {1, 9, 1, ActionType::kExposure, t},
      {1, 9, 1, ActionType::kClick, t + kSecondsPerDay},
  };
  const auto samples = SamplesFromEvents(events, 2);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_EQ(samples[0].label_click, 1);
  EXPECT_EQ(samples[0].label_conversion, 1);
  // An interaction without a click never becomes a conversion.
  EXPECT_EQ(samples[1].label_click, 0);
  EXPECT_EQ(samples[1].label_conversion, 0);
  EXPECT_EQ(samples[2].label_click, 0);
  for (const auto& s : samples) EXPECT_EQ(s.day_index, 4);
}

TEST(SplitTest, DaySpanCountsDistinctCalendarDays) {
  EXPECT_EQ(DaySpan({}, {}), 0);
  EXPECT_EQ(DaySpan({}, OnePerDay(7)), 7);
}

}  // namespace
}  // namespace lcrec
