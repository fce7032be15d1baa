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

#ifndef LCREC_ILFM_FUSION_H_
#define LCREC_ILFM_FUSION_H_

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "lcrec/nn/graph.h"
#include "lcrec/nn/parameter_store.h"

namespace lcrec::ilfm {

struct FusionConfig {
  double gamma = 2.0;
  int expert_count = 3;
  std::vector<int> expert_widths = {64, 32};
  int task_count = 2;
  int recalibrator_hidden = 16;
  int tower_hidden = 16;
};

// Throws std::invalid_argument on a non-positive gamma, no experts, no expert
// layers or no tasks.
void ValidateFusionConfig(const FusionConfig& config);

// g = relu(W c + b), g' = gamma * sigmoid(W' g + b'), z' = g' (.) z.
// W' and b' start at zero, so g' is exactly 1 at initialization.
class FeatureRecalibrator {
 public:
  static constexpr char kGroup[] = "ilfm.recalibrator";

  FeatureRecalibrator(nn::ParameterStore& store, int code_dim, int feature_dim,
                      int hidden, double gamma, std::mt19937_64& rng);

  struct Output {
    nn::Var hidden;
    nn::Var scale;
    nn::Var recalibrated;
  };
  Output Forward(nn::Graph& g, nn::Var z, nn::Var c) const;

  int feature_dim() const { return feature_dim_; }

 private:
  int feature_dim_;
  double gamma_;
  std::size_t w1_ = 0, b1_ = 0, w2_ = 0, b2_ = 0;
};

// x_e = f (.) relu(W_e x + b_e) with f = gamma * sigmoid(W_g c + b_g). With
// gating disabled the layer is a plain relu dense layer.
class FusedExpertLayer {
 public:
  FusedExpertLayer(nn::ParameterStore& store, const std::string& prefix,
                   int input_dim, int output_dim, int code_dim, double gamma,
                   bool gated, std::mt19937_64& rng);

  struct Output {
    nn::Var scale;  // invalid when the gate is not applied
    nn::Var output;
  };
  Output Forward(nn::Graph& g, nn::Var x, nn::Var c, bool apply_gate) const;

  bool gated() const { return gated_; }

 private:
  double gamma_;
  bool gated_;
  std::size_t w_ = 0, b_ = 0, gw_ = 0, gb_ = 0;
};

struct MmoeOutput {
  // scales[e][l]: fusion gate of expert e, layer l (empty when ungated).
  std::vector<std::vector<nn::Var>> fusion_scales;
  std::vector<nn::Var> expert_outputs;
  std::vector<nn::Var> gate_weights;  // per task, [B x expert_count]
  std::vector<nn::Var> logits;        // per task, [B x 1]
  std::vector<nn::Var> predictions;   // per task, [B x 1]
};

// Shared experts built from fused layers, per-task softmax gates over the
// experts (fed with the recalibrated input) and per-task towers ending in a
// sigmoid.
class MmoeNetwork {
 public:
  static constexpr char kExpertGroup[] = "mmoe.experts";
  static constexpr char kGateGroup[] = "mmoe.gates";
  static constexpr char kTowerGroup[] = "mmoe.towers";
  static constexpr char kFusionGroup[] = "ilfm.fusion";

  MmoeNetwork(nn::ParameterStore& store, int input_dim, int code_dim,
              const FusionConfig& config, bool gated, std::mt19937_64& rng);

  // `c` is only read when the network is gated and `apply_gates` is true.
  MmoeOutput Forward(nn::Graph& g, nn::Var z, nn::Var c,
                     bool apply_gates = true) const;

  const FusionConfig& config() const { return config_; }
  bool gated() const { return gated_; }

 private:
  struct Tower {
    std::size_t w1, b1, w2, b2;
  };
  FusionConfig config_;
  bool gated_;
  std::vector<std::vector<FusedExpertLayer>> experts_;
  std::vector<std::pair<std::size_t, std::size_t>> task_gates_;
  std::vector<Tower> towers_;
};

}  // namespace lcrec::ilfm

#endif  // LCREC_ILFM_FUSION_H_
