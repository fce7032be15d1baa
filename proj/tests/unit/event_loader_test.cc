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

#include "lcrec/data/event_loader.h"

#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "lcrec/errors.h"
#include "test_support.h"

namespace lcrec {
namespace {

using lcrec::testing::TempDir;

constexpr char kKuaiHeader[] =
    "user_id,video_id,date,hourmin,time_ms,is_click,is_like,is_follow,"
    "is_comment,is_forward,tag\n";

TEST(EventLoaderTest, EmptyFileYieldsNothing) {
  TempDir dir("loader");
  std::ofstream(dir / "empty.tsv").close();
  const LoadResult r = LoadEvents(dir / "empty.tsv", EventFormat::kInternalTsv);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.rejected_rows, 0u);
  EXPECT_EQ(r.total_rows, 0u);
}

TEST(EventLoaderTest, OutOfOrderRowsAreSortedByTimestamp) {
  TempDir dir("loader");
  std::ofstream(dir / "e.tsv") << "user_id\titem_id\tcategory_id\taction\ttimestamp\n"
                               << "1\t10\t3\tclick\t300\n"
                               << "1\t11\t3\texposure\t100\n"
                               << "1\t12\t4\tinteraction\t200\n";
  const LoadResult r = LoadEvents(dir / "e.tsv", EventFormat::kInternalTsv);
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_EQ(r.events[0].timestamp, 100);
  EXPECT_EQ(r.events[1].timestamp, 200);
  EXPECT_EQ(r.events[2].timestamp, 300);
  EXPECT_EQ(r.events[1].action, ActionType::kInteraction);
}

TEST(EventLoaderTest, MoreThanOnePercentCorruptRowsIsFatalWithCount) {
  TempDir dir("loader");
  {
    std::ofstream out(dir / "e.tsv");
    for (int i = 0; i < 100; ++i) {
      out << 1 << '\t' << i << "\t2\texposure\t" << (i < 2 ? "garbage" : std::to_string(1000 + i))
          << '\n';
    }
  }
  try {
    LoadEvents(dir / "e.tsv", EventFormat::kInternalTsv);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("2 of 100", 0), 0u) << e.what();
  }
}

TEST(EventLoaderTest, OneCorruptRowInHundredIsTolerated) {
  TempDir dir("loader");
  {
    std::ofstream out(dir / "e.tsv");
    for (int i = 0; i < 100; ++i) {
      out << 1 << '\t' << i << "\t2\texposure\t" << (i == 0 ? "-5" : std::to_string(1000 + i))
          << '\n';
    }
  }
  const LoadResult r = LoadEvents(dir / "e.tsv", EventFormat::kInternalTsv);
  EXPECT_EQ(r.rejected_rows, 1u);
  EXPECT_EQ(r.events.size(), 99u);
}

TEST(EventLoaderTest, MissingFileNamesThePath) {
  try {
    LoadEvents("/nonexistent/dir/events.csv", EventFormat::kKuaiRandCsv);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/events.csv"),
              std::string::npos);
  }
}

TEST(EventLoaderTest, UnknownFormatTag) {
  EXPECT_FALSE(ParseEventFormat("parquet").has_value());
  EXPECT_EQ(ParseEventFormat("kuairand_csv"), EventFormat::kKuaiRandCsv);
  EXPECT_EQ(ParseEventFormat("internal_tsv"), EventFormat::kInternalTsv);
}

TEST(EventLoaderTest, KuaiRandRowsMapToThreeActionTypes) {
  TempDir dir("loader");
  std::ofstream(dir / "k.csv") << kKuaiHeader
                               << "7,100,20220408,1000,1649400000000,0,0,0,0,0,5\n"
                               << "7,101,20220408,1001,1649400060000,1,0,0,0,0,5\n"
                               << "7,102,20220408,1002,1649400120000,1,0,1,0,0,\"6,9\"\n";
  const LoadResult r = LoadEvents(dir / "k.csv", EventFormat::kKuaiRandCsv);
  ASSERT_EQ(r.events.size(), 6u);
  EXPECT_EQ(r.events[0].timestamp, 1649400000);
  int clicks = 0, interactions = 0;
  for (const BehaviorEvent& e : r.events) {
    clicks += e.action == ActionType::kClick;
    interactions += e.action == ActionType::kInteraction;
  }
  EXPECT_EQ(clicks, 2);
  EXPECT_EQ(interactions, 1);
  EXPECT_EQ(r.events.back().category_id, 6u);
}

TEST(EventLoaderTest, KuaiRandCategoryMapIsUsedWithoutTagColumn) {
  TempDir dir("loader");
  std::ofstream(dir / "k.csv")
      << "user_id,video_id,time_ms,is_click,is_like,is_follow,is_comment,is_forward\n"
      << "1,500,1649400000000,0,0,0,0,0\n"
      << "1,501,1649400000001,0,0,0,0,0\n";
  std::ofstream(dir / "map.csv") << "500,42\n";
  LoadOptions options;
  options.category_map = dir / "map.csv";
  const LoadResult r = LoadEvents(dir / "k.csv", EventFormat::kKuaiRandCsv, options);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[0].category_id, 42u);
  EXPECT_EQ(r.events[1].category_id, 501u);
}

TEST(EventLoaderTest, KuaiRandHeaderMustHaveRequiredColumns) {
  TempDir dir("loader");
  std::ofstream(dir / "k.csv") << "user_id,video_id\n1,2\n";
  EXPECT_THROW(LoadEvents(dir / "k.csv", EventFormat::kKuaiRandCsv), DataError);
}

TEST(EventLoaderTest, TsvWriterRoundTrips) {
  TempDir dir("loader");
  std::vector<BehaviorEvent> events = {
      {1, 2, 3, ActionType::kExposure, 86400},
      {1, 2, 3, ActionType::kClick, 86401},
      {2, 9, 4, ActionType::kInteraction, 90000},
  };
  WriteEventsTsv(dir / "out.tsv", events);
  EXPECT_EQ(LoadEvents(dir / "out.tsv", EventFormat::kInternalTsv).events, events);
}

TEST(DateKeyTest, IsAPureFunctionOfTimestamp) {
  EXPECT_EQ(DateKeyOf(0), 0);
  EXPECT_EQ(DateKeyOf(86399), 0);
  EXPECT_EQ(DateKeyOf(86400), 1);
  EXPECT_EQ(DateKeyOf(-1), -1);
  BehaviorEvent e{1, 1, 1, ActionType::kClick, 1649980800 + 3600};
  EXPECT_EQ(e.date_key(), 1649980800 / 86400);
}

}  // namespace
}  // namespace lcrec
