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

#ifndef LCREC_MODEL_H_
#define LCREC_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "lcrec/config.h"
#include "lcrec/data/types.h"
#include "lcrec/ilem/histogram_encoder.h"
#include "lcrec/ilem/vq_cluster.h"
#include "lcrec/ilfm/fusion.h"
#include "lcrec/nn/graph.h"
#include "lcrec/nn/parameter_store.h"

namespace lcrec {

// kBaseline: MMOE over the base features only.
// kIlem: base features, histogram encoding and lifecycle center concatenated,
//        no gates.
// kFull: base features and histogram encoding, recalibrated and fused under
//        gates driven by the lifecycle center.
enum class Variant { kBaseline, kIlem, kFull };

std::string_view ToString(Variant variant);
// Throws UsageError for anything but baseline, ilem or full.
Variant ParseVariant(std::string_view text);

struct ModelConfig {
  Variant variant = Variant::kFull;
  int feature_dim = 9;
  int histogram_length = 20;
  int encoder_dim = 32;
  ilem::VqConfig vq;
  ilfm::FusionConfig fusion;
  double recon_weight = 1.0;
  std::uint64_t init_seed = 1;
};

// Keys under "model."; feature_dim and histogram_length are taken from the
// dataset and not bound.
void BindModelConfig(ConfigBinder& binder, ModelConfig& config);

struct Batch {
  nn::Tensor histograms;  // [B x 3 x K]
  nn::Tensor features;    // [B x F]
  std::vector<double> click;
  std::vector<double> conversion;

  std::size_t size() const { return click.size(); }
};

Batch MakeBatch(std::span<const RankingSample* const> samples,
                int histogram_length);
Batch MakeBatch(std::span<const RankingSample> samples, int histogram_length);

// Divisors applied to the summed per-sample losses. Sharded evaluation passes
// the full-batch values to every shard so that shard gradients add up.
struct LossScale {
  double ctr = 1.0;
  double cvr = 0.0;
  double recon = 1.0;
};
LossScale BatchLossScale(const Batch& batch, const ModelConfig& config);

struct ForwardOptions {
  // false evaluates the plain MMOE path (no recalibration, no fusion gates)
  // with the same parameters.
  bool apply_gates = true;
  bool compute_loss = true;
  // Code assignments to use instead of the nearest-code search.
  std::span<const int> fixed_codes;
};

struct ModelTrace {
  nn::Var encoding;  // x, invalid for the baseline
  std::optional<ilem::VqOutput> vq;
  nn::Var shared_input;  // z
  std::optional<ilfm::FeatureRecalibrator::Output> recalibration;
  ilfm::MmoeOutput mmoe;
  nn::Var ctr_loss;
  nn::Var cvr_loss;
  nn::Var recon_loss;
  nn::Var loss;
};

struct GateRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  void Merge(const GateRange& other);
};

class LifecycleRanker {
 public:
  // Throws UsageError on invalid sizes.
  explicit LifecycleRanker(const ModelConfig& config);
  // Submodules hold indices into the owned store.
  LifecycleRanker(const LifecycleRanker&) = delete;
  LifecycleRanker& operator=(const LifecycleRanker&) = delete;

  const ModelConfig& config() const { return config_; }
  nn::ParameterStore& store() { return store_; }
  const nn::ParameterStore& store() const { return store_; }

  bool has_vq() const { return vq_ != nullptr; }
  ilem::LifecycleVq* vq() { return vq_.get(); }
  const ilem::LifecycleVq* vq() const { return vq_.get(); }
  bool NeedsCodebookInit() const { return vq_ && !vq_->codebook().initialized(); }

  // Seeds the codebook from the compressed encodings of `batch`.
  void InitializeCodebook(const Batch& batch, std::mt19937_64& rng);

  ModelTrace Forward(nn::Graph& g, const Batch& batch, const LossScale& scale,
                     const ForwardOptions& options = {}) const;

  // Min/max over every recalibration and fusion gate value in the trace.
  GateRange GateValues(const nn::Graph& g, const ModelTrace& trace) const;

  // Zeroes the gate affine maps (W', b', W_g, b_g).
  void ZeroGateParameters();

 private:
  ModelConfig config_;
  nn::ParameterStore store_;
  std::unique_ptr<ilem::HistogramEncoder> encoder_;
  std::unique_ptr<ilem::LifecycleVq> vq_;
  std::unique_ptr<ilfm::FeatureRecalibrator> recalibrator_;
  std::unique_ptr<ilfm::MmoeNetwork> mmoe_;
};

// Writes the model configuration (as "model.*" metadata) plus `extra`
// metadata and every array to a checkpoint file.
void SaveModel(const std::filesystem::path& path, const LifecycleRanker& model,
               const KeyValues& extra = {});

// Rebuilds the model from checkpoint metadata and loads its arrays. Shape
// disagreements throw ShapeError naming the offending component.
std::unique_ptr<LifecycleRanker> LoadModel(const std::filesystem::path& path,
                                           KeyValues* metadata = nullptr);

}  // namespace lcrec

#endif  // LCREC_MODEL_H_
