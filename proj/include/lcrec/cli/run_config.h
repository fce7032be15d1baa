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

#ifndef LCREC_CLI_RUN_CONFIG_H_
#define LCREC_CLI_RUN_CONFIG_H_

#include <filesystem>
#include <string>

#include "lcrec/config.h"
#include "lcrec/data/synthetic.h"
#include "lcrec/eval/reports.h"
#include "lcrec/model.h"
#include "lcrec/train/trainer.h"

namespace lcrec::cli {

struct DataConfig {
  int window_days = 20;
  // "hard" or "soft".
  std::string search_mode = "hard";
  int max_results = 100;
  int histogram_length = 20;
};

// Every setting of every command. One flat key space so that a single file
// configures a whole experiment.
struct RunConfig {
  DataConfig data;
  SyntheticConfig synthetic;
  ModelConfig model;
  train::TrainConfig train;
  eval::TaggerConfig tagger;
};

void BindRunConfig(ConfigBinder& binder, RunConfig& config);

// Applies an optional key-value file, then `overrides` in order. Unknown keys
// throw UsageError.
void LoadRunConfig(RunConfig& config, const std::filesystem::path* file,
                   const KeyValues& overrides);

// "key = value" lines of every bound key, preceded by a comment naming the
// command.
std::string EffectiveConfigText(const RunConfig& config,
                                const std::string& command);

}  // namespace lcrec::cli

#endif  // LCREC_CLI_RUN_CONFIG_H_
