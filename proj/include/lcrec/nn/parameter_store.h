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

#ifndef LCREC_NN_PARAMETER_STORE_H_
#define LCREC_NN_PARAMETER_STORE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lcrec/nn/tensor.h"

namespace lcrec::nn {

struct Parameter {
  std::string name;
  // Parameter group, e.g. "ilem.cnn" or "ilfm.fusion". Freezing and gradient
  // checks operate per group.
  std::string group;
  Tensor value;
  Tensor grad;
  // Buffers (trainable == false) are state that is never touched by the
  // optimizer, such as the VQ codebook and its moving averages.
  bool trainable = true;
  bool frozen = false;

  bool receives_gradient() const { return trainable && !frozen; }
};

// Per-parameter gradient arrays, aligned with ParameterStore indices. Separate
// buffers let independent evaluation contexts accumulate concurrently.
using GradientBuffer = std::vector<Tensor>;

class ParameterStore {
 public:
  std::size_t Add(std::string name, std::string group, Tensor init,
                  bool trainable = true);

  std::size_t IndexOf(std::string_view name) const;
  bool Contains(std::string_view name) const;

  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }
  Parameter& at(std::string_view name) { return params_[IndexOf(name)]; }
  const Parameter& at(std::string_view name) const {
    return params_[IndexOf(name)];
  }
  std::size_t size() const { return params_.size(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void ZeroGrad();
  GradientBuffer MakeGradientBuffer() const;
  // grad += buffer for every parameter that receives gradients.
  void AccumulateGradients(const GradientBuffer& buffer);

  // Freezes every group whose name starts with `prefix`. Returns the number
  // of parameters affected.
  std::size_t FreezeGroups(std::string_view prefix, bool frozen = true);
  std::vector<std::string> Groups() const;
  std::size_t TrainableScalarCount() const;

  // Value snapshot of every array, keyed by name; used to retain the best
  // checkpoint during training.
  std::vector<Tensor> SnapshotValues() const;
  void RestoreValues(const std::vector<Tensor>& snapshot);

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
void InitUniformFanIn(Tensor& t, std::size_t fan_in, std::mt19937_64& rng);

}  // namespace lcrec::nn

#endif  // LCREC_NN_PARAMETER_STORE_H_
