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

#ifndef LCREC_CLI_COMMANDS_H_
#define LCREC_CLI_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lcrec/cli/run_config.h"
#include "lcrec/config.h"

namespace lcrec::cli {

// Fixed output file names.
inline constexpr char kDatasetFile[] = "dataset.bin";
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kEffectiveConfigFile[] = "effective_config.txt";
inline constexpr char kCheckpointFile[] = "checkpoint.bin";
inline constexpr char kHistoryFile[] = "history.jsonl";
inline constexpr char kTrainSummaryFile[] = "train_summary.json";
inline constexpr char kReportTextFile[] = "report.txt";
inline constexpr char kReportJsonFile[] = "report.jsonl";
inline constexpr char kAssignmentsFile[] = "cluster_assignments.tsv";

// Settings shared by all commands: an optional config file and "key=value"
// overrides that are applied after it.
struct CommonArgs {
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;
};

struct PrepareArgs {
  CommonArgs common;
  bool synthetic = false;
  std::optional<std::filesystem::path> input;
  std::string format = "kuairand_csv";
  std::optional<int> window_days;
  std::optional<std::filesystem::path> category_map;
  std::optional<std::filesystem::path> embeddings;
  std::optional<int> threads;
  std::filesystem::path out;
};

struct TrainArgs {
  CommonArgs common;
  std::filesystem::path data;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> ablation;
  std::optional<int> epochs;
  std::optional<int> threads;
};

struct EvaluateArgs {
  CommonArgs common;
  std::filesystem::path data;
  std::filesystem::path checkpoint;
  std::filesystem::path report_dir;
  std::string split = "test";
};

struct GradcheckArgs {
  CommonArgs common;
  int samples = 8;
  double tolerance = 1e-4;
  std::vector<std::string> freeze;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> report;
};

// Each command returns the process exit code and throws the library's error
// types on failure; `ExitCodeFor` maps those to exit codes.
int RunPrepare(const PrepareArgs& args, std::ostream& log);
int RunTrain(const TrainArgs& args, std::ostream& log);
int RunEvaluate(const EvaluateArgs& args, std::ostream& log);
int RunGradcheck(const GradcheckArgs& args, std::ostream& log);

// 1 usage, 2 data or shape, 3 numeric, 1 for anything else.
int ExitCodeFor(const std::exception& error);

// `path` itself if it is a file, otherwise `path / kDatasetFile`.
std::filesystem::path ResolveDatasetPath(const std::filesystem::path& path);

}  // namespace lcrec::cli

#endif  // LCREC_CLI_COMMANDS_H_
