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

#include "lcrec/cli/run_config.h"

namespace lcrec::cli {

void BindRunConfig(ConfigBinder& binder, RunConfig& config) {
  binder.Bind("data.window_days", &config.data.window_days);
  binder.Bind("data.search_mode", &config.data.search_mode);
  binder.Bind("data.max_results", &config.data.max_results);
  binder.Bind("data.histogram_length", &config.data.histogram_length);
  BindSyntheticConfig(binder, config.synthetic, "synthetic");
  BindModelConfig(binder, config.model);
  train::BindTrainConfig(binder, config.train);
  eval::BindTaggerConfig(binder, config.tagger);
}

void LoadRunConfig(RunConfig& config, const std::filesystem::path* file,
                   const KeyValues& overrides) {
  ConfigBinder binder;
  BindRunConfig(binder, config);
  if (file) binder.Apply(ReadKeyValueFile(*file));
  binder.Apply(overrides);
}

std::string EffectiveConfigText(const RunConfig& config,
                                const std::string& command) {
  RunConfig copy = config;
  ConfigBinder binder;
  BindRunConfig(binder, copy);
  return "# effective configuration of lcrec " + command + "\n" +
         FormatKeyValues(binder.Dump());
}

}  // namespace lcrec::cli
