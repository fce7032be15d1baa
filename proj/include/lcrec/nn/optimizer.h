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

#ifndef LCREC_NN_OPTIMIZER_H_
#define LCREC_NN_OPTIMIZER_H_

#include <cstdint>
#include <vector>

#include "lcrec/nn/parameter_store.h"

namespace lcrec::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam over every parameter that receives gradients. Moment buffers are
// allocated for the whole store so indices line up.
class AdamOptimizer {
 public:
  AdamOptimizer(const ParameterStore& store, AdamConfig config);

  // Applies one update from store[i].grad. Throws NumericError naming the
  // parameter if a gradient or updated value is not finite.
  void Step(ParameterStore& store);

  std::int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::int64_t step_ = 0;
  std::vector<Tensor> first_moment_;
  std::vector<Tensor> second_moment_;
};

}  // namespace lcrec::nn

#endif  // LCREC_NN_OPTIMIZER_H_
