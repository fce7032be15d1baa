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

#ifndef LCREC_ILEM_HISTOGRAM_ENCODER_H_
#define LCREC_ILEM_HISTOGRAM_ENCODER_H_

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "lcrec/nn/graph.h"
#include "lcrec/nn/parameter_store.h"

namespace lcrec::ilem {

struct EncoderConfig {
  int channels = 3;
  int histogram_length = 20;
  std::array<int, 3> kernel_sizes = {5, 3, 2};
  std::array<int, 3> filters = {8, 16, 32};
  int output_dim = 32;
};

// Three valid, stride-1 convolutions with relu, flattened and mapped to
// output_dim by a linear head. K = 20 gives 3x20 -> 8x16 -> 16x14 -> 32x13 ->
// 416 -> output_dim.
class HistogramEncoder {
 public:
  static constexpr char kGroup[] = "ilem.cnn";

  // Throws std::invalid_argument if the histogram is too short for the
  // kernel chain.
  HistogramEncoder(nn::ParameterStore& store, const EncoderConfig& config,
                   std::mt19937_64& rng);

  // block: [B x channels x K] -> [B x output_dim].
  nn::Var Forward(nn::Graph& g, nn::Var block) const;

  // Sequence lengths after each convolution.
  std::array<std::size_t, 3> conv_lengths() const { return lengths_; }
  std::size_t flatten_width() const;
  const EncoderConfig& config() const { return config_; }

 private:
  EncoderConfig config_;
  std::array<std::size_t, 3> lengths_{};
  std::array<std::size_t, 3> kernel_{};
  std::array<std::size_t, 3> bias_{};
  std::size_t head_weight_ = 0;
  std::size_t head_bias_ = 0;
};

}  // namespace lcrec::ilem

#endif  // LCREC_ILEM_HISTOGRAM_ENCODER_H_
