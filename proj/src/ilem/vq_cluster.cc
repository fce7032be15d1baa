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

#include "lcrec/ilem/vq_cluster.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace lcrec::ilem {
namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// Index drawn with probability proportional to weights; uniform if all zero.
std::size_t DrawWeighted(const std::vector<double>& weights,
                         std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    return std::uniform_int_distribution<std::size_t>(0, weights.size() - 1)(rng);
  }
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace

int NearestCode(std::span<const double> v, const nn::Tensor& codebook) {
  if (codebook.rows() == 0) throw std::invalid_argument("empty codebook");
  if (codebook.cols() != v.size()) {
    throw std::invalid_argument("vector of size " + std::to_string(v.size()) +
                                " against codebook " + codebook.ShapeString());
  }
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < codebook.rows(); ++m) {
    const double d = SquaredDistance(v, codebook.row(m));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(m);
    }
  }
  return best;
}

Codebook::Codebook(nn::ParameterStore& store, int num_codes, int dim)
    : store_(&store), num_codes_(num_codes), dim_(dim) {
  if (num_codes < 1 || dim < 1) {
    throw std::invalid_argument("codebook needs at least one code and dimension");
  }
  const auto m = static_cast<std::size_t>(num_codes);
  const auto d = static_cast<std::size_t>(dim);
  q_ = store.Add("ilem.vq.codebook", kGroup, nn::Tensor({m, d}), false);
  ema_count_ = store.Add("ilem.vq.ema_count", kGroup, nn::Tensor({m}), false);
  ema_sum_ = store.Add("ilem.vq.ema_sum", kGroup, nn::Tensor({m, d}), false);
  usage_ = store.Add("ilem.vq.usage", kGroup, nn::Tensor({m}), false);
  idle_ = store.Add("ilem.vq.idle_steps", kGroup, nn::Tensor({m}), false);
  init_flag_ = store.Add("ilem.vq.initialized", kGroup, nn::Tensor({1}), false);
}

bool Codebook::initialized() const { return Buffer(init_flag_)[0] != 0.0; }

const nn::Tensor& Codebook::centers() const { return Buffer(q_); }

std::span<const double> Codebook::center(int m) const {
  return Buffer(q_).row(static_cast<std::size_t>(m));
}

std::span<const double> Codebook::usage() const {
  return Buffer(usage_).values();
}

void Codebook::InitializeFrom(const nn::Tensor& xc, std::mt19937_64& rng,
                              double noise) {
  if (xc.rows() == 0 || xc.cols() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("cannot seed codebook from " + xc.ShapeString());
  }
  nn::Tensor& q = Buffer(q_);
  std::normal_distribution<double> jitter(0.0, noise);
  const std::size_t n = xc.rows();
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (int m = 0; m < num_codes_; ++m) {
    std::size_t pick;
    if (m == 0) {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    } else {
      pick = DrawWeighted(nearest, rng);
    }
    auto dst = q.row(static_cast<std::size_t>(m));
    const auto src = xc.row(pick);
    for (int k = 0; k < dim_; ++k) {
      dst[static_cast<std::size_t>(k)] = src[static_cast<std::size_t>(k)] +
                                         (noise > 0.0 ? jitter(rng) : 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = SquaredDistance(xc.row(i), dst);
      if (d < nearest[i]) nearest[i] = d;
    }
  }
  Buffer(ema_count_).Fill(1.0);
  Buffer(ema_sum_) = q;
  Buffer(usage_).Fill(0.0);
  Buffer(idle_).Fill(0.0);
  Buffer(init_flag_)[0] = 1.0;
}

CodebookUpdateStats Codebook::Update(std::span<const int> indices,
                                     const nn::Tensor& xc, double decay,
                                     double smoothing, int dead_window,
                                     std::mt19937_64& rng) {
  if (indices.empty() || indices.size() != xc.rows()) {
    throw std::invalid_argument("codebook update needs one index per row");
  }
  const auto m_count = static_cast<std::size_t>(num_codes_);
  const auto d = static_cast<std::size_t>(dim_);
  std::vector<double> counts(m_count, 0.0);
  nn::Tensor sums({m_count, d});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto m = static_cast<std::size_t>(indices[i]);
    counts[m] += 1.0;
    const auto row = xc.row(i);
    for (std::size_t k = 0; k < d; ++k) sums.at(m, k) += row[k];
  }

  nn::Tensor& q = Buffer(q_);
  nn::Tensor& ema_count = Buffer(ema_count_);
  nn::Tensor& ema_sum = Buffer(ema_sum_);
  nn::Tensor& usage = Buffer(usage_);
  nn::Tensor& idle = Buffer(idle_);

  CodebookUpdateStats stats;
  double total = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    if (counts[m] == 0.0) continue;
    ++stats.used_codes;
    ema_count[m] = decay * ema_count[m] + (1.0 - decay) * counts[m];
    for (std::size_t k = 0; k < d; ++k) {
      ema_sum.at(m, k) = decay * ema_sum.at(m, k) + (1.0 - decay) * sums.at(m, k);
    }
    total += ema_count[m];
  }
  const double used = static_cast<double>(stats.used_codes);
  for (std::size_t m = 0; m < m_count; ++m) {
    if (counts[m] == 0.0) {
      idle[m] += 1.0;
      continue;
    }
    const double smoothed =
        (ema_count[m] + smoothing) / (total + used * smoothing) * total;
    for (std::size_t k = 0; k < d; ++k) q.at(m, k) = ema_sum.at(m, k) / smoothed;
    usage[m] += counts[m];
    idle[m] = 0.0;
  }

  if (dead_window > 0) {
    std::vector<double> residual(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      residual[i] = SquaredDistance(
          xc.row(i), q.row(static_cast<std::size_t>(indices[i])));
    }
    for (std::size_t m = 0; m < m_count; ++m) {
      if (idle[m] < static_cast<double>(dead_window)) continue;
      const std::size_t pick = DrawWeighted(residual, rng);
      const auto src = xc.row(pick);
      for (std::size_t k = 0; k < d; ++k) {
        q.at(m, k) = src[k];
        ema_sum.at(m, k) = src[k];
      }
      ema_count[m] = 1.0;
      idle[m] = 0.0;
      // A reseeded row should not be picked again for another dead code.
      residual[pick] = 0.0;
      ++stats.reseeded_codes;
    }
  }
  return stats;
}

LifecycleVq::LifecycleVq(nn::ParameterStore& store, const VqConfig& config,
                         std::mt19937_64& rng)
    : config_(config), codebook_(store, config.num_codes, config.code_dim) {
  const auto in = static_cast<std::size_t>(config.input_dim);
  const auto hidden = static_cast<std::size_t>(config.hidden_dim);
  const auto code = static_cast<std::size_t>(config.code_dim);
  auto dense = [&](const std::string& name, const char* group, std::size_t a,
                   std::size_t b, std::size_t& w, std::size_t& bias) {
    nn::Tensor weight({a, b});
    nn::InitUniformFanIn(weight, a, rng);
    w = store.Add(name + ".weight", group, std::move(weight));
    bias = store.Add(name + ".bias", group, nn::Tensor({b}));
  };
  dense("ilem.vq_enc1", kEncoderGroup, in, hidden, enc_w1_, enc_b1_);
  dense("ilem.vq_enc2", kEncoderGroup, hidden, code, enc_w2_, enc_b2_);
  dense("ilem.vq_dec1", kDecoderGroup, code, hidden, dec_w1_, dec_b1_);
  dense("ilem.vq_dec2", kDecoderGroup, hidden, in, dec_w2_, dec_b2_);
}

nn::Var LifecycleVq::Compress(nn::Graph& g, nn::Var x) const {
  const nn::Var xs = g.StopGradient(x);
  const nn::Var h = g.Dense(xs, g.Param(enc_w1_), g.Param(enc_b1_),
                            nn::Activation::kRelu);
  return g.Dense(h, g.Param(enc_w2_), g.Param(enc_b2_),
                 nn::Activation::kIdentity);
}

VqOutput LifecycleVq::Forward(nn::Graph& g, nn::Var x, double recon_normalizer,
                              std::span<const int> fixed_indices) const {
  if (!codebook_.initialized()) {
    throw std::logic_error("VQ forward before the codebook was initialized");
  }
  VqOutput out;
  out.compressed = Compress(g, x);
  const nn::Tensor& xc = g.value(out.compressed);
  const nn::Tensor& q = codebook_.centers();
  if (!fixed_indices.empty() && fixed_indices.size() != xc.rows()) {
    throw std::invalid_argument("fixed code assignments do not match the batch");
  }
  nn::Tensor centers({xc.rows(), xc.cols()});
  out.indices.resize(xc.rows());
  for (std::size_t b = 0; b < xc.rows(); ++b) {
    const int m = fixed_indices.empty() ? NearestCode(xc.row(b), q)
                                        : fixed_indices[b];
    out.indices[b] = m;
    const auto src = q.row(static_cast<std::size_t>(m));
    std::copy(src.begin(), src.end(), centers.row(b).begin());
  }
  out.center = g.Constant(std::move(centers));
  const nn::Var st = g.Add(
      out.compressed, g.StopGradient(g.Sub(out.center, out.compressed)));
  const nn::Var h = g.Dense(st, g.Param(dec_w1_), g.Param(dec_b1_),
                            nn::Activation::kRelu);
  out.decoded = g.Dense(h, g.Param(dec_w2_), g.Param(dec_b2_),
                        nn::Activation::kIdentity);
  out.recon_loss =
      g.SquaredError(g.StopGradient(x), out.decoded, recon_normalizer);
  return out;
}

}  // namespace lcrec::ilem
