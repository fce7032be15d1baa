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

#include "lcrec/model.h"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

#include "lcrec/errors.h"
#include "lcrec/nn/checkpoint.h"

namespace lcrec {
namespace {

std::string JoinInts(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> SplitInts(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated list of integers, got '" +
                       text + "'");
    }
  }
  return out;
}

void RangeOver(const nn::Tensor& t, GateRange& range) {
  for (double v : t.values()) {
    range.min = std::min(range.min, v);
    range.max = std::max(range.max, v);
  }
  range.count += t.size();
}

}  // namespace

std::string_view ToString(Variant variant) {
  switch (variant) {
    case Variant::kBaseline:
      return "baseline";
    case Variant::kIlem:
      return "ilem";
    case Variant::kFull:
      return "full";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view text) {
  if (text == "baseline") return Variant::kBaseline;
  if (text == "ilem") return Variant::kIlem;
  if (text == "full") return Variant::kFull;
  throw UsageError("unknown model variant '" + std::string(text) +
                   "' (expected baseline, ilem or full)");
}

void BindModelConfig(ConfigBinder& binder, ModelConfig& config) {
  binder.BindCustom(
      "model.variant",
      [&config](const std::string& v) { config.variant = ParseVariant(v); },
      [&config] { return std::string(ToString(config.variant)); });
  binder.Bind("model.encoder_dim", &config.encoder_dim);
  binder.Bind("model.vq_hidden", &config.vq.hidden_dim);
  binder.Bind("model.code_dim", &config.vq.code_dim);
  binder.Bind("model.num_codes", &config.vq.num_codes);
  binder.Bind("model.vq_decay", &config.vq.decay);
  binder.Bind("model.vq_smoothing", &config.vq.smoothing);
  binder.Bind("model.dead_code_window", &config.vq.dead_code_window);
  binder.Bind("model.codebook_init_noise", &config.vq.init_noise);
  binder.Bind("model.gamma", &config.fusion.gamma);
  binder.Bind("model.expert_count", &config.fusion.expert_count);
  binder.BindCustom(
      "model.expert_widths",
      [&config](const std::string& v) { config.fusion.expert_widths = SplitInts(v); },
      [&config] { return JoinInts(config.fusion.expert_widths); });
  binder.Bind("model.recalibrator_hidden", &config.fusion.recalibrator_hidden);
  binder.Bind("model.tower_hidden", &config.fusion.tower_hidden);
  binder.Bind("model.recon_weight", &config.recon_weight);
  binder.Bind("model.init_seed", &config.init_seed);
}

Batch MakeBatch(std::span<const RankingSample* const> samples,
                int histogram_length) {
  const std::size_t n = samples.size();
  const auto k = static_cast<std::size_t>(histogram_length);
  const std::size_t f = n ? samples[0]->shared_features.size() : 0;
  Batch batch;
  batch.histograms = nn::Tensor({n, kActionTypeCount, k});
  batch.features = nn::Tensor({n, f});
  batch.click.resize(n);
  batch.conversion.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RankingSample& s = *samples[i];
    if (s.shared_features.size() != f) {
      throw ShapeError("shared features of sample " + std::to_string(s.sample_id) +
                       " have width " + std::to_string(s.shared_features.size()) +
                       ", expected " + std::to_string(f));
    }
    auto row = batch.histograms.row(i);
    for (std::size_t a = 0; a < kActionTypeCount; ++a) {
      const auto& h = s.histograms[a].values;
      if (h.size() != k) {
        throw ShapeError("histogram of sample " + std::to_string(s.sample_id) +
                         " has length " + std::to_string(h.size()) +
                         ", expected " + std::to_string(k));
      }
      std::copy(h.begin(), h.end(), row.begin() + static_cast<std::ptrdiff_t>(a * k));
    }
    std::copy(s.shared_features.begin(), s.shared_features.end(),
              batch.features.row(i).begin());
    batch.click[i] = s.label_click;
    batch.conversion[i] = s.label_conversion;
  }
  return batch;
}

Batch MakeBatch(std::span<const RankingSample> samples, int histogram_length) {
  std::vector<const RankingSample*> ptrs;
  ptrs.reserve(samples.size());
  for (const RankingSample& s : samples) ptrs.push_back(&s);
  return MakeBatch(std::span<const RankingSample* const>(ptrs), histogram_length);
}

LossScale BatchLossScale(const Batch& batch, const ModelConfig& config) {
  LossScale s;
  s.ctr = static_cast<double>(batch.size());
  s.cvr = 0.0;
  for (double c : batch.click) s.cvr += c;
  s.recon = static_cast<double>(batch.size()) * config.encoder_dim;
  return s;
}

void GateRange::Merge(const GateRange& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  min = std::min(min, other.min);
  max = std::max(max, other.max);
  count += other.count;
}

LifecycleRanker::LifecycleRanker(const ModelConfig& config) : config_(config) {
  if (config.feature_dim < 1) throw UsageError("feature_dim must be positive");
  if (config.encoder_dim < 1 || config.vq.code_dim < 1 ||
      config.vq.hidden_dim < 1 || config.vq.num_codes < 1) {
    throw UsageError("encoder, code and VQ sizes must be positive");
  }
  if (!(config.recon_weight >= 0.0)) {
    throw UsageError("model.recon_weight must be nonnegative");
  }
  if (!(config.vq.decay >= 0.0 && config.vq.decay < 1.0)) {
    throw UsageError("model.vq_decay must lie in [0, 1)");
  }
  try {
    ilfm::ValidateFusionConfig(config.fusion);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  config_.vq.input_dim = config.encoder_dim;
  std::mt19937_64 rng(config.init_seed);
  int shared = config.feature_dim;
  if (config.variant != Variant::kBaseline) {
    ilem::EncoderConfig enc;
    enc.histogram_length = config.histogram_length;
    enc.output_dim = config.encoder_dim;
    try {
      encoder_ = std::make_unique<ilem::HistogramEncoder>(store_, enc, rng);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    vq_ = std::make_unique<ilem::LifecycleVq>(store_, config_.vq, rng);
    shared += config.encoder_dim;
    if (config.variant == Variant::kIlem) shared += config.vq.code_dim;
  }
  const bool gated = config.variant == Variant::kFull;
  if (gated) {
    recalibrator_ = std::make_unique<ilfm::FeatureRecalibrator>(
        store_, config.vq.code_dim, shared, config.fusion.recalibrator_hidden,
        config.fusion.gamma, rng);
  }
  mmoe_ = std::make_unique<ilfm::MmoeNetwork>(store_, shared, config.vq.code_dim,
                                              config.fusion, gated, rng);
}

void LifecycleRanker::InitializeCodebook(const Batch& batch,
                                         std::mt19937_64& rng) {
  if (!vq_) return;
  nn::Graph g(store_);
  const nn::Var x = encoder_->Forward(g, g.Constant(batch.histograms));
  const nn::Var xc = vq_->Compress(g, x);
  vq_->codebook().InitializeFrom(g.value(xc), rng, config_.vq.init_noise);
}

ModelTrace LifecycleRanker::Forward(nn::Graph& g, const Batch& batch,
                                    const LossScale& scale,
                                    const ForwardOptions& options) const {
  if (batch.features.cols() != static_cast<std::size_t>(config_.feature_dim)) {
    throw ShapeError("model expects " + std::to_string(config_.feature_dim) +
                     " shared features, batch has " +
                     std::to_string(batch.features.cols()));
  }
  ModelTrace trace;
  const nn::Var base = g.Constant(batch.features);
  nn::Var c;
  if (config_.variant == Variant::kBaseline) {
    trace.shared_input = base;
  } else {
    if (batch.histograms.rank() != 3 ||
        batch.histograms.dim(2) != static_cast<std::size_t>(config_.histogram_length)) {
      throw ShapeError("ilem.cnn expects histograms of length " +
                       std::to_string(config_.histogram_length) + ", batch has " +
                       batch.histograms.ShapeString());
    }
    trace.encoding = encoder_->Forward(g, g.Constant(batch.histograms));
    trace.vq = vq_->Forward(g, trace.encoding, scale.recon, options.fixed_codes);
    c = trace.vq->center;
    if (config_.variant == Variant::kIlem) {
      const nn::Var parts[] = {base, trace.encoding, c};
      trace.shared_input = g.Concat(parts);
    } else {
      const nn::Var parts[] = {base, trace.encoding};
      trace.shared_input = g.Concat(parts);
    }
  }
  nn::Var z = trace.shared_input;
  if (recalibrator_ && options.apply_gates) {
    trace.recalibration = recalibrator_->Forward(g, z, c);
    z = trace.recalibration->recalibrated;
  }
  trace.mmoe = mmoe_->Forward(g, z, c, options.apply_gates);
  if (!options.compute_loss) return trace;

  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  const std::vector<double> ones(batch.size(), 1.0);
  trace.ctr_loss =
      g.SigmoidCrossEntropy(trace.mmoe.logits[0], batch.click, ones, scale.ctr);
  std::vector<nn::Var> terms = {trace.ctr_loss};
  std::vector<double> weights = {1.0};
  if (trace.mmoe.logits.size() > 1) {
    trace.cvr_loss = g.SigmoidCrossEntropy(trace.mmoe.logits[1], batch.conversion,
                                           batch.click, scale.cvr);
    terms.push_back(trace.cvr_loss);
    weights.push_back(1.0);
  }
  if (trace.vq) {
    trace.recon_loss = trace.vq->recon_loss;
    terms.push_back(trace.recon_loss);
    weights.push_back(config_.recon_weight);
  }
  trace.loss = g.WeightedSum(terms, weights);
  return trace;
}

GateRange LifecycleRanker::GateValues(const nn::Graph& g,
                                      const ModelTrace& trace) const {
  GateRange range;
  range.min = std::numeric_limits<double>::infinity();
  range.max = -std::numeric_limits<double>::infinity();
  if (trace.recalibration) RangeOver(g.value(trace.recalibration->scale), range);
  for (const auto& expert : trace.mmoe.fusion_scales) {
    for (const nn::Var& s : expert) RangeOver(g.value(s), range);
  }
  if (range.count == 0) range = GateRange{};
  return range;
}

void LifecycleRanker::ZeroGateParameters() {
  for (nn::Parameter& p : store_) {
    const bool recal_out = p.name.rfind("ilfm.recal2.", 0) == 0;
    const bool fusion = p.group == ilfm::MmoeNetwork::kFusionGroup;
    if (recal_out || fusion) p.value.Fill(0.0);
  }
}

void SaveModel(const std::filesystem::path& path, const LifecycleRanker& model,
               const KeyValues& extra) {
  ModelConfig config = model.config();
  ConfigBinder binder;
  BindModelConfig(binder, config);
  KeyValues meta = {
      {"model.feature_dim", std::to_string(config.feature_dim)},
      {"model.histogram_length", std::to_string(config.histogram_length)}};
  for (auto& kv : binder.Dump()) meta.push_back(std::move(kv));
  for (const auto& kv : extra) meta.push_back(kv);
  nn::WriteCheckpoint(path, meta, model.store());
}

std::unique_ptr<LifecycleRanker> LoadModel(const std::filesystem::path& path,
                                           KeyValues* metadata) {
  const nn::CheckpointFile file = nn::ReadCheckpoint(path);
  ModelConfig config;
  ConfigBinder binder;
  BindModelConfig(binder, config);
  for (const auto& [key, value] : file.metadata) {
    if (binder.Has(key)) binder.Set(key, value);
  }
  try {
    config.feature_dim = std::stoi(file.Meta("model.feature_dim"));
    config.histogram_length = std::stoi(file.Meta("model.histogram_length"));
  } catch (const std::logic_error&) {
    throw DataError("checkpoint " + path.string() + " has malformed model sizes");
  }
  auto model = std::make_unique<LifecycleRanker>(config);
  nn::LoadIntoStore(file, model->store());
  if (metadata) *metadata = file.metadata;
  return model;
}

}  // namespace lcrec
