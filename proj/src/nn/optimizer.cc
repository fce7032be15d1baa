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

#include "lcrec/nn/optimizer.h"

#include <cmath>

#include "lcrec/errors.h"

namespace lcrec::nn {

AdamOptimizer::AdamOptimizer(const ParameterStore& store, AdamConfig config)
    : config_(config) {
  for (const Parameter& p : store) {
    first_moment_.emplace_back(p.value.shape());
    second_moment_.emplace_back(p.value.shape());
  }
}

void AdamOptimizer::Step(ParameterStore& store) {
  if (store.size() != first_moment_.size()) {
    throw ShapeError("adam: store changed size after optimizer creation");
  }
  for (const Parameter& p : store) {
    if (p.receives_gradient() && !p.grad.AllFinite()) {
      throw NumericError("non-finite gradient in parameter " + p.name);
    }
  }
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store[i];
    if (!p.receives_gradient()) continue;
    Tensor& m = first_moment_[i];
    Tensor& v = second_moment_[i];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad[j];
      m[j] = b1 * m[j] + (1.0 - b1) * g;
      v[j] = b2 * v[j] + (1.0 - b2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p.value[j] -= config_.learning_rate * m_hat /
                    (std::sqrt(v_hat) + config_.epsilon);
    }
    if (!p.value.AllFinite()) {
      throw NumericError("non-finite value after update in parameter " +
                         p.name);
    }
  }
}

}  // namespace lcrec::nn
