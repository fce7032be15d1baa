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

#include "lcrec/ilem/histogram_encoder.h"

#include <stdexcept>
#include <string>

namespace lcrec::ilem {

HistogramEncoder::HistogramEncoder(nn::ParameterStore& store,
                                   const EncoderConfig& config,
                                   std::mt19937_64& rng)
    : config_(config) {
  int length = config.histogram_length;
  int in_channels = config.channels;
  for (std::size_t l = 0; l < 3; ++l) {
    length -= config.kernel_sizes[l] - 1;
    if (length < 1) {
      throw std::invalid_argument(
          "histogram length " + std::to_string(config.histogram_length) +
          " is too short for the encoder kernels");
    }
    lengths_[l] = static_cast<std::size_t>(length);
    const auto out = static_cast<std::size_t>(config.filters[l]);
    const auto in = static_cast<std::size_t>(in_channels);
    const auto width = static_cast<std::size_t>(config.kernel_sizes[l]);
    nn::Tensor k({out, in, width});
    nn::InitUniformFanIn(k, in * width, rng);
    const std::string name = "ilem.conv" + std::to_string(l + 1);
    kernel_[l] = store.Add(name + ".kernel", kGroup, std::move(k));
    bias_[l] = store.Add(name + ".bias", kGroup, nn::Tensor({out}));
    in_channels = config.filters[l];
  }
  const std::size_t flat = flatten_width();
  const auto out = static_cast<std::size_t>(config.output_dim);
  nn::Tensor w({flat, out});
  nn::InitUniformFanIn(w, flat, rng);
  head_weight_ = store.Add("ilem.head.weight", kGroup, std::move(w));
  head_bias_ = store.Add("ilem.head.bias", kGroup, nn::Tensor({out}));
}

std::size_t HistogramEncoder::flatten_width() const {
  return lengths_[2] * static_cast<std::size_t>(config_.filters[2]);
}

nn::Var HistogramEncoder::Forward(nn::Graph& g, nn::Var block) const {
  nn::Var h = block;
  for (std::size_t l = 0; l < 3; ++l) {
    h = g.Relu(g.Conv1d(h, g.Param(kernel_[l]), g.Param(bias_[l])));
  }
  return g.Dense(g.Flatten(h), g.Param(head_weight_), g.Param(head_bias_),
                 nn::Activation::kIdentity);
}

}  // namespace lcrec::ilem
