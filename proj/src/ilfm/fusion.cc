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

#include "lcrec/ilfm/fusion.h"

#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "lcrec/errors.h"

namespace lcrec::ilfm {
namespace {

std::pair<std::size_t, std::size_t> AddDense(nn::ParameterStore& store,
                                             const std::string& name,
                                             const std::string& group,
                                             std::size_t in, std::size_t out,
                                             bool zero, std::mt19937_64& rng) {
  nn::Tensor w({in, out});
  if (!zero) nn::InitUniformFanIn(w, in, rng);
  const std::size_t wi = store.Add(name + ".weight", group, std::move(w));
  const std::size_t bi = store.Add(name + ".bias", group, nn::Tensor({out}));
  return {wi, bi};
}

}  // namespace

void ValidateFusionConfig(const FusionConfig& config) {
  if (!(config.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (config.expert_count < 1) {
    throw std::invalid_argument("expert_count must be at least 1");
  }
  if (config.expert_widths.empty()) {
    throw std::invalid_argument("experts need at least one layer");
  }
  for (int w : config.expert_widths) {
    if (w < 1) throw std::invalid_argument("expert widths must be positive");
  }
  if (config.task_count < 1) throw std::invalid_argument("task_count must be positive");
  if (config.recalibrator_hidden < 1 || config.tower_hidden < 1) {
    throw std::invalid_argument("hidden widths must be positive");
  }
}

FeatureRecalibrator::FeatureRecalibrator(nn::ParameterStore& store,
                                         int code_dim, int feature_dim,
                                         int hidden, double gamma,
                                         std::mt19937_64& rng)
    : feature_dim_(feature_dim), gamma_(gamma) {
  const auto c = static_cast<std::size_t>(code_dim);
  const auto h = static_cast<std::size_t>(hidden);
  const auto f = static_cast<std::size_t>(feature_dim);
  std::tie(w1_, b1_) = AddDense(store, "ilfm.recal1", kGroup, c, h, false, rng);
  std::tie(w2_, b2_) = AddDense(store, "ilfm.recal2", kGroup, h, f, true, rng);
}

FeatureRecalibrator::Output FeatureRecalibrator::Forward(nn::Graph& g,
                                                         nn::Var z,
                                                         nn::Var c) const {
  if (g.value(z).cols() != static_cast<std::size_t>(feature_dim_)) {
    throw ShapeError(
        "ilfm.recalibrator expects " + std::to_string(feature_dim_) +
        " features, got " + g.value(z).ShapeString());
  }
  Output out;
  out.hidden = g.Dense(c, g.Param(w1_), g.Param(b1_), nn::Activation::kRelu);
  out.scale = g.Scale(
      g.Dense(out.hidden, g.Param(w2_), g.Param(b2_), nn::Activation::kSigmoid),
      gamma_);
  out.recalibrated = g.Mul(out.scale, z);
  return out;
}

FusedExpertLayer::FusedExpertLayer(nn::ParameterStore& store,
                                   const std::string& prefix, int input_dim,
                                   int output_dim, int code_dim, double gamma,
                                   bool gated, std::mt19937_64& rng)
    : gamma_(gamma), gated_(gated) {
  const auto in = static_cast<std::size_t>(input_dim);
  const auto out = static_cast<std::size_t>(output_dim);
  std::tie(w_, b_) = AddDense(store, prefix, MmoeNetwork::kExpertGroup, in, out,
                              false, rng);
  if (gated) {
    std::tie(gw_, gb_) =
        AddDense(store, "ilfm.fusion." + prefix.substr(prefix.find('.') + 1),
                 MmoeNetwork::kFusionGroup,
                 static_cast<std::size_t>(code_dim), out, true, rng);
  }
}

FusedExpertLayer::Output FusedExpertLayer::Forward(nn::Graph& g, nn::Var x,
                                                   nn::Var c,
                                                   bool apply_gate) const {
  Output out;
  out.output = g.Dense(x, g.Param(w_), g.Param(b_), nn::Activation::kRelu);
  if (gated_ && apply_gate) {
    out.scale = g.Scale(
        g.Dense(c, g.Param(gw_), g.Param(gb_), nn::Activation::kSigmoid),
        gamma_);
    out.output = g.Mul(out.scale, out.output);
  }
  return out;
}

MmoeNetwork::MmoeNetwork(nn::ParameterStore& store, int input_dim,
                         int code_dim, const FusionConfig& config, bool gated,
                         std::mt19937_64& rng)
    : config_(config), gated_(gated) {
  ValidateFusionConfig(config);
  for (int e = 0; e < config.expert_count; ++e) {
    std::vector<FusedExpertLayer> layers;
    int in = input_dim;
    for (std::size_t l = 0; l < config.expert_widths.size(); ++l) {
      const std::string prefix = "mmoe.expert" + std::to_string(e) + "_layer" +
                                 std::to_string(l);
      layers.emplace_back(store, prefix, in, config.expert_widths[l], code_dim,
                          config.gamma, gated, rng);
      in = config.expert_widths[l];
    }
    experts_.push_back(std::move(layers));
  }
  const auto in = static_cast<std::size_t>(input_dim);
  const auto experts = static_cast<std::size_t>(config.expert_count);
  const auto top = static_cast<std::size_t>(config.expert_widths.back());
  const auto hidden = static_cast<std::size_t>(config.tower_hidden);
  for (int t = 0; t < config.task_count; ++t) {
    const std::string id = std::to_string(t);
    task_gates_.push_back(
        AddDense(store, "mmoe.gate" + id, kGateGroup, in, experts, false, rng));
    Tower tower{};
    std::tie(tower.w1, tower.b1) = AddDense(store, "mmoe.tower" + id + "_1",
                                            kTowerGroup, top, hidden, false, rng);
    std::tie(tower.w2, tower.b2) = AddDense(store, "mmoe.tower" + id + "_2",
                                            kTowerGroup, hidden, 1, false, rng);
    towers_.push_back(tower);
  }
}

MmoeOutput MmoeNetwork::Forward(nn::Graph& g, nn::Var z, nn::Var c,
                                bool apply_gates) const {
  const bool gate = gated_ && apply_gates;
  if (gate && !c.valid()) {
    throw std::invalid_argument("gated experts need a lifecycle center");
  }
  MmoeOutput out;
  for (const auto& layers : experts_) {
    nn::Var h = z;
    std::vector<nn::Var> scales;
    for (const FusedExpertLayer& layer : layers) {
      const FusedExpertLayer::Output o = layer.Forward(g, h, c, gate);
      if (o.scale.valid()) scales.push_back(o.scale);
      h = o.output;
    }
    out.fusion_scales.push_back(std::move(scales));
    out.expert_outputs.push_back(h);
  }
  for (std::size_t t = 0; t < towers_.size(); ++t) {
    const nn::Var weights = g.Softmax(
        g.Dense(z, g.Param(task_gates_[t].first), g.Param(task_gates_[t].second),
                nn::Activation::kIdentity));
    const nn::Var mixed = g.Mixture(weights, out.expert_outputs);
    const Tower& tw = towers_[t];
    const nn::Var h1 = g.Dense(mixed, g.Param(tw.w1), g.Param(tw.b1),
                               nn::Activation::kRelu);
    const nn::Var logit = g.Dense(h1, g.Param(tw.w2), g.Param(tw.b2),
                                  nn::Activation::kIdentity);
    out.gate_weights.push_back(weights);
    out.logits.push_back(logit);
    out.predictions.push_back(g.Sigmoid(logit));
  }
  return out;
}

}  // namespace lcrec::ilfm
