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

#ifndef LCREC_ILEM_VQ_CLUSTER_H_
#define LCREC_ILEM_VQ_CLUSTER_H_

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lcrec/nn/graph.h"
#include "lcrec/nn/parameter_store.h"
#include "lcrec/nn/tensor.h"

namespace lcrec::ilem {

// Index of the row of `codebook` [M x d] closest to `v` in L2 distance.
// Ties resolve to the lowest index.
int NearestCode(std::span<const double> v, const nn::Tensor& codebook);

struct CodebookUpdateStats {
  int used_codes = 0;
  int reseeded_codes = 0;
};

// Cluster centers Q [M x d] plus the moving-average state used to learn them.
// All arrays live in the parameter store as non-trainable buffers so that
// they are checkpointed with the model and never touched by the optimizer.
class Codebook {
 public:
  static constexpr char kGroup[] = "ilem.codebook";

  Codebook(nn::ParameterStore& store, int num_codes, int dim);

  int num_codes() const { return num_codes_; }
  int dim() const { return dim_; }
  bool initialized() const;
  const nn::Tensor& centers() const;
  std::span<const double> center(int m) const;
  // Cumulative number of vectors assigned to each code during updates.
  std::span<const double> usage() const;
  int Nearest(std::span<const double> v) const { return NearestCode(v, centers()); }

  // k-means++ style seeding from the rows of `xc` [B x d] plus Gaussian noise
  // of standard deviation `noise`. Rows are reused if B < M.
  void InitializeFrom(const nn::Tensor& xc, std::mt19937_64& rng, double noise);

  // Moves every code that received at least one vector toward the mean of
  // its assigned rows using count/sum moving averages with Laplace smoothing
  // over the used codes. Codes unused for `dead_window` consecutive updates
  // are reseeded to a batch row drawn with probability proportional to its
  // squared distance from its assigned code. `dead_window` <= 0 disables
  // reseeding.
  CodebookUpdateStats Update(std::span<const int> indices, const nn::Tensor& xc,
                             double decay, double smoothing, int dead_window,
                             std::mt19937_64& rng);

 private:
  nn::Tensor& Buffer(std::size_t i) { return (*store_)[i].value; }
  const nn::Tensor& Buffer(std::size_t i) const { return (*store_)[i].value; }

  nn::ParameterStore* store_;
  int num_codes_;
  int dim_;
  std::size_t q_ = 0;
  std::size_t ema_count_ = 0;
  std::size_t ema_sum_ = 0;
  std::size_t usage_ = 0;
  std::size_t idle_ = 0;
  std::size_t init_flag_ = 0;
};

struct VqConfig {
  int input_dim = 32;
  int hidden_dim = 32;
  int code_dim = 16;
  int num_codes = 10;
  double decay = 0.99;
  double smoothing = 1e-5;
  int dead_code_window = 100;
  double init_noise = 1e-3;
};

struct VqOutput {
  nn::Var compressed;      // xc [B x code_dim]
  nn::Var center;          // c [B x code_dim], a constant lookup
  nn::Var decoded;         // d [B x input_dim]
  nn::Var recon_loss;      // scalar sum((sg(x) - d)^2) / normalizer
  std::vector<int> indices;
};

// Compresses sg(x) with a two-layer MLP, assigns the nearest code and
// reconstructs sg(x) from the straight-through value xc + sg(c - xc).
class LifecycleVq {
 public:
  static constexpr char kEncoderGroup[] = "ilem.vq_encoder";
  static constexpr char kDecoderGroup[] = "ilem.vq_decoder";

  LifecycleVq(nn::ParameterStore& store, const VqConfig& config,
              std::mt19937_64& rng);

  // Requires an initialized codebook. `recon_normalizer` is the divisor of
  // the summed squared residual, normally batch size times input_dim.
  // Non-empty `fixed_indices` replace the nearest-code search.
  VqOutput Forward(nn::Graph& g, nn::Var x, double recon_normalizer,
                   std::span<const int> fixed_indices = {}) const;
  // xc only; used to seed the codebook and to feed its updates.
  nn::Var Compress(nn::Graph& g, nn::Var x) const;

  Codebook& codebook() { return codebook_; }
  const Codebook& codebook() const { return codebook_; }
  const VqConfig& config() const { return config_; }

 private:
  VqConfig config_;
  Codebook codebook_;
  std::size_t enc_w1_ = 0, enc_b1_ = 0, enc_w2_ = 0, enc_b2_ = 0;
  std::size_t dec_w1_ = 0, dec_b1_ = 0, dec_w2_ = 0, dec_b2_ = 0;
};

}  // namespace lcrec::ilem

#endif  // LCREC_ILEM_VQ_CLUSTER_H_
