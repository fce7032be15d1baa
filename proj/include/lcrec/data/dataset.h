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

#ifndef LCREC_DATA_DATASET_H_
#define LCREC_DATA_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "lcrec/data/types.h"
#include "lcrec/gsu.h"

namespace lcrec {

inline constexpr int kDatasetVersion = 1;

// A prepared, feature-complete split. Window events are not persisted.
struct Dataset {
  DatasetSplit split;
  int histogram_length = 20;
  std::vector<std::string> feature_names;
  // Train-split statistics already applied to every split's shared features.
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;
  std::string source;
  std::size_t total_rows = 0;
  std::size_t rejected_rows = 0;

  std::size_t feature_dim() const { return feature_names.size(); }
};

struct PrepareOptions {
  int window_days = 20;
  SearchConfig search;
  const EmbeddingTable* embeddings = nullptr;
  int threads = 1;
};

// Splits by day (train = window+1 .. last-2, validation = last-1,
// test = last), builds features from window events, standardizes with
// train statistics.
Dataset BuildDataset(std::vector<BehaviorEvent> events,
                     std::vector<RankingSample> samples,
                     const PrepareOptions& options);

// z-scores every split with the train split's mean and standard deviation
// (scale 1 for constant features).
void StandardizeFeatures(Dataset& dataset);

// Binary cache: "LCREC-DATASET v1" line, one JSON header line, then the
// three splits as fixed-width records.
void SaveDataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset LoadDataset(const std::filesystem::path& path);

// Manifest text (JSON) describing the day partition and split sizes.
std::string ManifestJson(const Dataset& dataset);

}  // namespace lcrec

#endif  // LCREC_DATA_DATASET_H_
