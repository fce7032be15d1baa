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

#include "lcrec/train/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lcrec/errors.h"
#include "lcrec/eval/metrics.h"
#include "lcrec/nn/graph.h"
#include "lcrec/nn/optimizer.h"

namespace lcrec::train {
namespace {

double ScalarOf(const nn::Graph& g, nn::Var v) {
  return v.valid() ? g.value(v)[0] : 0.0;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
  }
  return out;
}

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void BindTrainConfig(ConfigBinder& binder, TrainConfig& config) {
  binder.Bind("train.epochs", &config.epochs);
  binder.Bind("train.batch_size", &config.batch_size);
  binder.Bind("train.learning_rate", &config.learning_rate);
  binder.Bind("train.patience", &config.patience);
  binder.Bind("train.seed", &config.seed);
  binder.Bind("train.threads", &config.threads);
  binder.Bind("train.freeze", &config.freeze);
}

void ValidateTrainConfig(const TrainConfig& config) {
  if (config.epochs < 0) throw UsageError("train.epochs must be nonnegative");
  if (config.batch_size < 1) throw UsageError("train.batch_size must be positive");
  if (!(config.learning_rate > 0.0)) {
    throw UsageError("train.learning_rate must be positive");
  }
  if (config.patience < 1) throw UsageError("train.patience must be positive");
  if (config.threads < 1) throw UsageError("train.threads must be positive");
}

BatchGradients ComputeGradients(LifecycleRanker& model,
                                std::span<const RankingSample* const> batch,
                                int threads) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const ModelConfig& mc = model.config();
  LossScale scale;
  scale.ctr = static_cast<double>(batch.size());
  for (const RankingSample* s : batch) scale.cvr += s->label_click;
  scale.recon = static_cast<double>(batch.size()) * mc.encoder_dim;

  const std::size_t shards =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)),
                            batch.size());
  struct Shard {
    nn::GradientBuffer grads;
    LossParts loss;
    GateRange gates;
    std::vector<int> indices;
    nn::Tensor compressed;
    std::exception_ptr error;
  };
  std::vector<Shard> results(shards);
  const nn::ParameterStore& store = model.store();
  auto run = [&](std::size_t s) {
    try {
      const std::size_t lo = batch.size() * s / shards;
      const std::size_t hi = batch.size() * (s + 1) / shards;
      const Batch b = MakeBatch(batch.subspan(lo, hi - lo), mc.histogram_length);
      nn::Graph g(store);
      const ModelTrace trace = model.Forward(g, b, scale);
      Shard& r = results[s];
      r.grads = store.MakeGradientBuffer();
      g.Backward(trace.loss, r.grads);
      r.loss = {ScalarOf(g, trace.loss), ScalarOf(g, trace.ctr_loss),
                ScalarOf(g, trace.cvr_loss), ScalarOf(g, trace.recon_loss)};
      r.gates = model.GateValues(g, trace);
      if (trace.vq) {
        r.indices = trace.vq->indices;
        r.compressed = g.value(trace.vq->compressed);
      }
    } catch (...) {
      results[s].error = std::current_exception();
    }
  };
  if (shards == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t s = 0; s < shards; ++s) pool.emplace_back(run, s);
    for (auto& t : pool) t.join();
  }
  for (const Shard& r : results) {
    if (r.error) std::rethrow_exception(r.error);
  }

  nn::ParameterStore& mutable_store = model.store();
  mutable_store.ZeroGrad();
  BatchGradients out;
  std::vector<double> compressed;
  std::size_t code_dim = 0;
  for (Shard& r : results) {
    mutable_store.AccumulateGradients(r.grads);
    out.loss.total += r.loss.total;
    out.loss.ctr += r.loss.ctr;
    out.loss.cvr += r.loss.cvr;
    out.loss.recon += r.loss.recon;
    out.gates.Merge(r.gates);
    out.indices.insert(out.indices.end(), r.indices.begin(), r.indices.end());
    if (!r.compressed.empty()) {
      code_dim = r.compressed.cols();
      compressed.insert(compressed.end(), r.compressed.values().begin(),
                        r.compressed.values().end());
    }
  }
  if (code_dim > 0) {
    out.compressed = nn::Tensor({out.indices.size(), code_dim}, std::move(compressed));
  }
  return out;
}

Predictions Predict(const LifecycleRanker& model,
                    std::span<const RankingSample> samples,
                    std::size_t batch_size) {
  Predictions p;
  p.ctr.reserve(samples.size());
  p.cvr.reserve(samples.size());
  ForwardOptions options;
  options.compute_loss = false;
  for (std::size_t lo = 0; lo < samples.size(); lo += batch_size) {
    const std::size_t n = std::min(batch_size, samples.size() - lo);
    const Batch b = MakeBatch(samples.subspan(lo, n), model.config().histogram_length);
    nn::Graph g(model.store());
    const ModelTrace trace = model.Forward(g, b, LossScale{}, options);
    const nn::Tensor& ctr = g.value(trace.mmoe.predictions[0]);
    p.ctr.insert(p.ctr.end(), ctr.values().begin(), ctr.values().end());
    if (trace.mmoe.predictions.size() > 1) {
      const nn::Tensor& cvr = g.value(trace.mmoe.predictions[1]);
      p.cvr.insert(p.cvr.end(), cvr.values().begin(), cvr.values().end());
    }
    if (trace.vq) {
      p.clusters.insert(p.clusters.end(), trace.vq->indices.begin(),
                        trace.vq->indices.end());
    }
  }
  return p;
}

std::optional<double> GaucPair::Mean() const {
  if (ctr && cvr) return 0.5 * (*ctr + *cvr);
  if (ctr) return ctr;
  return cvr;
}

GaucPair EvaluateGauc(std::span<const RankingSample> samples,
                      const Predictions& predictions) {
  GaucPair out;
  std::vector<UserId> users;
  std::vector<int> clicks;
  for (const RankingSample& s : samples) {
    users.push_back(s.user_id);
    clicks.push_back(s.label_click);
  }
  try {
    out.ctr = eval::Gauc(users, predictions.ctr, clicks).gauc;
  } catch (const DataError&) {
  }
  if (predictions.cvr.size() == samples.size()) {
    std::vector<UserId> cu;
    std::vector<double> cs;
    std::vector<int> cl;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!samples[i].label_click) continue;
      cu.push_back(samples[i].user_id);
      cs.push_back(predictions.cvr[i]);
      cl.push_back(samples[i].label_conversion);
    }
    try {
      out.cvr = eval::Gauc(cu, cs, cl).gauc;
    } catch (const DataError&) {
    }
  }
  return out;
}

std::string ToJsonLine(const EpochRecord& r) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["batches"] = r.batches;
  j["train_loss"] = r.train_loss.total;
  j["train_ctr_loss"] = r.train_loss.ctr;
  j["train_cvr_loss"] = r.train_loss.cvr;
  j["train_recon_loss"] = r.train_loss.recon;
  j["val_gauc_ctr"] = OptionalJson(r.validation.ctr);
  j["val_gauc_cvr"] = OptionalJson(r.validation.cvr);
  j["val_gauc_mean"] = OptionalJson(r.validation.Mean());
  if (r.gates.count > 0) {
    j["gate_min"] = r.gates.min;
    j["gate_max"] = r.gates.max;
  } else {
    j["gate_min"] = nullptr;
    j["gate_max"] = nullptr;
  }
  j["active_codes"] = r.active_codes;
  j["reseeded_codes"] = r.reseeded_codes;
  j["selected"] = r.selected;
  return j.dump();
}

TrainResult Train(LifecycleRanker& model, std::span<const RankingSample> train,
                  std::span<const RankingSample> validation,
                  const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  ValidateTrainConfig(config);
  if (train.empty()) throw DataError("training split is empty");
  nn::ParameterStore& store = model.store();
  for (const std::string& prefix : SplitList(config.freeze)) {
    if (store.FreezeGroups(prefix) == 0) {
      throw UsageError("no parameter group matches freeze prefix '" + prefix + "'");
    }
  }
  std::mt19937_64 rng(config.seed);
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto batch_ptrs = [&](std::size_t lo) {
    std::vector<const RankingSample*> ptrs;
    const std::size_t hi = std::min(lo + batch_size, order.size());
    for (std::size_t i = lo; i < hi; ++i) ptrs.push_back(&train[order[i]]);
    return ptrs;
  };
  if (model.NeedsCodebookInit()) {
    std::shuffle(order.begin(), order.end(), rng);
    const auto ptrs = batch_ptrs(0);
    model.InitializeCodebook(MakeBatch(std::span<const RankingSample* const>(ptrs),
                                       model.config().histogram_length),
                             rng);
  }

  nn::AdamOptimizer adam(store, nn::AdamConfig{config.learning_rate});
  TrainResult result;
  std::optional<double> best_score;
  std::vector<nn::Tensor> best;
  int bad_epochs = 0;
  const ilem::VqConfig& vq = model.config().vq;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord record;
    record.epoch = epoch;
    std::set<int> active;
    double weight = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += batch_size) {
      const auto ptrs = batch_ptrs(lo);
      ++record.batches;
      const std::string where = "epoch " + std::to_string(epoch) + ", batch " +
                                std::to_string(record.batches);
      BatchGradients grads = ComputeGradients(model, ptrs, config.threads);
      if (!std::isfinite(grads.loss.total)) {
        throw NumericError("non-finite training loss at " + where);
      }
      try {
        adam.Step(store);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at " + where);
      }
      if (model.has_vq()) {
        const ilem::CodebookUpdateStats stats = model.vq()->codebook().Update(
            grads.indices, grads.compressed, vq.decay, vq.smoothing,
            vq.dead_code_window, rng);
        record.reseeded_codes += stats.reseeded_codes;
        active.insert(grads.indices.begin(), grads.indices.end());
      }
      const double n = static_cast<double>(ptrs.size());
      record.train_loss.total += n * grads.loss.total;
      record.train_loss.ctr += n * grads.loss.ctr;
      record.train_loss.cvr += n * grads.loss.cvr;
      record.train_loss.recon += n * grads.loss.recon;
      weight += n;
      record.gates.Merge(grads.gates);
    }
    record.train_loss.total /= weight;
    record.train_loss.ctr /= weight;
    record.train_loss.cvr /= weight;
    record.train_loss.recon /= weight;
    record.active_codes = static_cast<int>(active.size());
    record.validation = EvaluateGauc(validation, Predict(model, validation));
    result.gates.Merge(record.gates);

    const std::optional<double> score = record.validation.Mean();
    const bool improved =
        best.empty() || !score || !best_score || *score > *best_score;
    if (improved) {
      best_score = score;
      best = store.SnapshotValues();
      result.best_epoch = epoch;
      record.selected = true;
      bad_epochs = 0;
    } else {
      ++bad_epochs;
    }
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);
    if (bad_epochs >= config.patience) {
      result.stopped_early = epoch < config.epochs;
      break;
    }
  }
  if (!best.empty()) store.RestoreValues(best);
  return result;
}

}  // namespace lcrec::train
