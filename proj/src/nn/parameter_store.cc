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

#include "lcrec/nn/parameter_store.h"

#include <cmath>
#include <set>
#include <utility>

#include "lcrec/errors.h"

namespace lcrec::nn {

std::size_t ParameterStore::Add(std::string name, std::string group,
                                Tensor init, bool trainable) {
  if (Contains(name)) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  const std::size_t index = params_.size();
  Parameter p;
  p.grad = Tensor(init.shape());
  p.value = std::move(init);
  p.name = std::move(name);
  p.group = std::move(group);
  p.trainable = trainable;
  index_.emplace(p.name, index);
  params_.push_back(std::move(p));
  return index;
}

std::size_t ParameterStore::IndexOf(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::out_of_range("unknown parameter: " + std::string(name));
  }
  return it->second;
}

bool ParameterStore::Contains(std::string_view name) const {
  return index_.find(name) != index_.end();
}

void ParameterStore::ZeroGrad() {
  for (Parameter& p : params_) p.grad.Fill(0.0);
}

GradientBuffer ParameterStore::MakeGradientBuffer() const {
  GradientBuffer buffer;
  buffer.reserve(params_.size());
  for (const Parameter& p : params_) buffer.emplace_back(p.value.shape());
  return buffer;
}

void ParameterStore::AccumulateGradients(const GradientBuffer& buffer) {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = params_[i];
    if (!p.receives_gradient()) continue;
    const Tensor& g = buffer[i];
    for (std::size_t j = 0; j < g.size(); ++j) p.grad[j] += g[j];
  }
}

std::size_t ParameterStore::FreezeGroups(std::string_view prefix, bool frozen) {
  std::size_t count = 0;
  for (Parameter& p : params_) {
    if (std::string_view(p.group).substr(0, prefix.size()) == prefix) {
      p.frozen = frozen;
      ++count;
    }
  }
  return count;
}

std::vector<std::string> ParameterStore::Groups() const {
  std::vector<std::string> groups;
  std::set<std::string> seen;
  for (const Parameter& p : params_) {
    if (seen.insert(p.group).second) groups.push_back(p.group);
  }
  return groups;
}

std::size_t ParameterStore::TrainableScalarCount() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) {
    if (p.trainable) n += p.value.size();
  }
  return n;
}

std::vector<Tensor> ParameterStore::SnapshotValues() const {
  std::vector<Tensor> snapshot;
  snapshot.reserve(params_.size());
  for (const Parameter& p : params_) snapshot.push_back(p.value);
  return snapshot;
}

void ParameterStore::RestoreValues(const std::vector<Tensor>& snapshot) {
  if (snapshot.size() != params_.size()) {
    throw ShapeError("snapshot has " + std::to_string(snapshot.size()) +
                     " arrays, store has " + std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!snapshot[i].SameShape(params_[i].value)) {
      throw ShapeError("snapshot shape mismatch for " + params_[i].name);
    }
    params_[i].value = snapshot[i];
  }
}

void InitUniformFanIn(Tensor& t, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t.values()) v = dist(rng);
}

}  // namespace lcrec::nn
