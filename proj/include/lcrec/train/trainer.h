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

#ifndef LCREC_TRAIN_TRAINER_H_
#define LCREC_TRAIN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lcrec/config.h"
#include "lcrec/data/types.h"
#include "lcrec/model.h"
#include "lcrec/nn/tensor.h"

namespace lcrec::train {

struct TrainConfig {
  int epochs = 10;
  int batch_size = 256;
  double learning_rate = 1e-3;
  int patience = 3;
  std::uint64_t seed = 1;
  int threads = 1;
  // Comma-separated parameter-group prefixes excluded from updates.
  std::string freeze;
};

void BindTrainConfig(ConfigBinder& binder, TrainConfig& config);
// Throws UsageError on non-positive sizes or rates.
void ValidateTrainConfig(const TrainConfig& config);

// Loss components for one batch, already divided by the batch normalizers.
struct LossParts {
  double total = 0.0;
  double ctr = 0.0;
  double cvr = 0.0;
  double recon = 0.0;
};

struct BatchGradients {
  LossParts loss;
  GateRange gates;
  // Codebook assignments and compressed encodings, rows in batch order.
  std::vector<int> indices;
  nn::Tensor compressed;
};

// Zeroes the store's gradients and fills them with d(loss)/d(parameter) for
// the batch. The batch is split into `threads` contiguous shards evaluated
// concurrently; shard gradients are summed in shard order.
BatchGradients ComputeGradients(LifecycleRanker& model,
                                std::span<const RankingSample* const> batch,
                                int threads);

struct Predictions {
  std::vector<double> ctr;
  std::vector<double> cvr;
  std::vector<int> clusters;  // empty for models without a codebook
};

Predictions Predict(const LifecycleRanker& model,
                    std::span<const RankingSample> samples,
                    std::size_t batch_size = 1024);

struct GaucPair {
  std::optional<double> ctr;
  // Computed on clicked samples only.
  std::optional<double> cvr;

  // Mean of the defined values, nullopt if neither is.
  std::optional<double> Mean() const;
};

GaucPair EvaluateGauc(std::span<const RankingSample> samples,
                      const Predictions& predictions);

struct EpochRecord {
  int epoch = 0;
  std::size_t batches = 0;
  LossParts train_loss;  // sample-weighted mean over the epoch
  GaucPair validation;
  GateRange gates;
  int active_codes = 0;
  int reseeded_codes = 0;
  bool selected = false;  // best validation score so far
};

std::string ToJsonLine(const EpochRecord& record);

struct TrainResult {
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  GateRange gates;  // over every training batch of the run
  bool stopped_early = false;
};

// Adam training with shuffled mini-batches, codebook moving-average updates
// after each step, per-epoch validation GAUC and early stopping. On return
// the model holds the parameters of the best validation epoch. With zero
// epochs only the codebook is seeded. Throws NumericError naming the epoch
// and batch when the loss or an update is not finite.
TrainResult Train(LifecycleRanker& model, std::span<const RankingSample> train,
                  std::span<const RankingSample> validation,
                  const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace lcrec::train

#endif  // LCREC_TRAIN_TRAINER_H_
