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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "test_support.h"

namespace {

using lcrec::testing::TempDir;
namespace fs = std::filesystem;

const char* const kTinyData =
    " --set synthetic.users=60 --set synthetic.total_days=12"
    " --set synthetic.window_days=8 --set data.window_days=8";
const char* const kTinyModel =
    " --set model.expert_widths=8 --set model.encoder_dim=8 --set model.vq_hidden=8"
    " --set model.code_dim=4 --set model.num_codes=4 --set model.tower_hidden=4";

int RunCli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(LCREC_BINARY) + " " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    data_ = dir_ / "data";
    ASSERT_EQ(RunCli("prepare-data --synthetic --out " + data_.string() + kTinyData, log_), 0) << Slurp(log_);
  }
  int Train(const std::string& out, const std::string& extra = "") {
    return RunCli("train --data " + data_.string() + " --out " + (dir_ / out).string() +
                   " --epochs 2 --seed 4" + kTinyModel + extra,
               log_);
  }

  TempDir dir_{"cli"};
  fs::path data_;
  fs::path log_ = dir_ / "log.txt";
};

TEST_F(CliTest, PrepareWritesTheDocumentedFiles) {
  EXPECT_TRUE(fs::exists(data_ / "dataset.bin"));
  EXPECT_TRUE(fs::exists(data_ / "effective_config.txt"));
  const auto manifest = nlohmann::json::parse(Slurp(data_ / "manifest.json"));
  EXPECT_EQ(manifest["source"], "synthetic");
  EXPECT_EQ(manifest["partition_days"]["feature_window"], 8);
  EXPECT_EQ(manifest["partition_days"]["train"], 2);
  EXPECT_GT(manifest["samples"]["train"].get<int>(), 0);
}

TEST_F(CliTest, TrainWritesOneHistoryRowPerEpoch) {
  ASSERT_EQ(Train("t"), 0) << Slurp(log_);
  std::istringstream history(Slurp(dir_ / "t" / "history.jsonl"));
  std::string line;
  int rows = 0;
  while (std::getline(history, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["epoch"], ++rows);
  }
  EXPECT_EQ(rows, 2);
  EXPECT_TRUE(fs::exists(dir_ / "t" / "checkpoint.bin"));
  const auto summary = nlohmann::json::parse(Slurp(dir_ / "t" / "train_summary.json"));
  EXPECT_EQ(summary["epochs_run"], 2);
  EXPECT_NE(Slurp(dir_ / "t" / "effective_config.txt").find("train.seed = 4"), std::string::npos);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  ASSERT_EQ(Train("a"), 0) << Slurp(log_);
  ASSERT_EQ(Train("b"), 0) << Slurp(log_);
  EXPECT_EQ(Slurp(dir_ / "a" / "history.jsonl"), Slurp(dir_ / "b" / "history.jsonl"));
  EXPECT_EQ(Slurp(dir_ / "a" / "checkpoint.bin"), Slurp(dir_ / "b" / "checkpoint.bin"));
  for (const char* run : {"a", "b"}) {
    ASSERT_EQ(RunCli("evaluate --data " + data_.string() + " --checkpoint " +
                      (dir_ / run / "checkpoint.bin").string() + " --report-dir " +
                      (dir_ / (std::string("r") + run)).string(),
                  log_),
              0)
        << Slurp(log_);
  }
  for (const char* file : {"report.txt", "report.jsonl", "cluster_assignments.tsv"}) {
    EXPECT_EQ(Slurp(dir_ / "ra" / file), Slurp(dir_ / "rb" / file)) << file;
  }
}

TEST_F(CliTest, EvaluateReproducesTheSelectedValidationScore) {
  ASSERT_EQ(Train("t"), 0) << Slurp(log_);
  ASSERT_EQ(RunCli("evaluate --split validation --data " + data_.string() + " --checkpoint " +
                    (dir_ / "t" / "checkpoint.bin").string() + " --report-dir " +
                    (dir_ / "r").string(),
                log_),
            0)
      << Slurp(log_);
  double selected = 0;
  std::istringstream history(Slurp(dir_ / "t" / "history.jsonl"));
  for (std::string line; std::getline(history, line);) {
    const auto j = nlohmann::json::parse(line);
    if (j["selected"].get<bool>()) selected = j["val_gauc_ctr"].get<double>();
  }
  std::istringstream report(Slurp(dir_ / "r" / "report.jsonl"));
  bool found = false;
  for (std::string line; std::getline(report, line);) {
    const auto j = nlohmann::json::parse(line);
    if (j["record"] == "gauc" && j["task"] == "ctr") {
      EXPECT_NEAR(j["gauc"].get<double>(), selected, 1e-12);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, ExitCodesFollowTheErrorKind) {
  EXPECT_EQ(RunCli("", log_), 1);
  EXPECT_EQ(RunCli("train --data " + data_.string(), log_), 1);
  EXPECT_EQ(Train("t", " --ablation nonsense"), 1);
  EXPECT_EQ(RunCli("train --data " + (dir_ / "missing").string() + " --out " + (dir_ / "x").string(), log_), 2);
  EXPECT_NE(Slurp(log_).find("missing"), std::string::npos);
  EXPECT_EQ(RunCli("prepare-data --input " + (dir_ / "nope.csv").string() + " --out " +
                    (dir_ / "p").string(),
                log_),
            2);
  std::ofstream(dir_ / "junk.bin") << "not a checkpoint";
  EXPECT_EQ(RunCli("evaluate --data " + data_.string() + " --checkpoint " + (dir_ / "junk.bin").string() +
                    " --report-dir " + (dir_ / "r").string(),
                log_),
            2);
}

TEST_F(CliTest, UnwritableReportDirectoryIsReported) {
  ASSERT_EQ(Train("t"), 0) << Slurp(log_);
  // Directory creation under /proc fails regardless of privileges.
  const int rc = RunCli("evaluate --data " + data_.string() + " --checkpoint " +
                            (dir_ / "t" / "checkpoint.bin").string() +
                            " --report-dir /proc/lcrec_reports",
                        log_);
  EXPECT_NE(rc, 0);
  EXPECT_NE(rc, 1);
  EXPECT_NE(Slurp(log_).find("/proc/lcrec_reports"), std::string::npos) << Slurp(log_);
}

TEST_F(CliTest, ReportPathThatIsAFileIsRejected) {
  ASSERT_EQ(Train("t"), 0) << Slurp(log_);
  std::ofstream(dir_ / "plain") << "x";
  EXPECT_NE(RunCli("evaluate --data " + data_.string() + " --checkpoint " +
                    (dir_ / "t" / "checkpoint.bin").string() + " --report-dir " +
                    (dir_ / "plain").string(),
                log_),
            0);
}

TEST_F(CliTest, GradcheckPassesAndHonoursToleranceAndFreeze) {
  const std::string base = std::string("gradcheck --samples 3 --seed 2") + kTinyModel;
  ASSERT_EQ(RunCli(base + " --report " + (dir_ / "gc.txt").string(), log_), 0) << Slurp(log_);
  const std::string table = Slurp(dir_ / "gc.txt");
  EXPECT_NE(table.find("ilem.cnn"), std::string::npos);
  EXPECT_NE(table.find("excluded"), std::string::npos);
  EXPECT_EQ(RunCli(base + " --tolerance 0", log_), 3);
  ASSERT_EQ(RunCli(base + " --freeze ilfm", log_), 0) << Slurp(log_);
  const std::string frozen = Slurp(log_);
  std::istringstream rows(frozen);
  int frozen_rows = 0;
  for (std::string line; std::getline(rows, line);) {
    if (line.rfind("ilfm.", 0) == 0) {
      EXPECT_NE(line.find("frozen"), std::string::npos) << line;
      ++frozen_rows;
    }
  }
  EXPECT_EQ(frozen_rows, 2);
}

}  // namespace
