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

#ifndef LCREC_NN_GRADCHECK_H_
#define LCREC_NN_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lcrec/nn/parameter_store.h"

namespace lcrec::nn {

struct GradCheckOptions {
  // Initial central-difference step. When a probe changes the branch
  // signature (a relu switches on or off) the step is divided by 10, down to
  // min_step.
  double step = 1e-4;
  double min_step = 1e-7;
  // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor);
  // keeps entries whose true gradient is ~0 from reporting roundoff as error.
  double relative_floor = 1e-7;
};

enum class GroupCheckStatus { kChecked, kFrozen, kExcluded };

struct GroupGradCheck {
  std::string group;
  GroupCheckStatus status = GroupCheckStatus::kChecked;
  std::size_t entries = 0;
  double max_relative_error = 0.0;
  double max_abs_error = 0.0;
  double max_abs_analytic = 0.0;
  // Entries probed with a reduced step, and entries that sat on a kink even
  // at min_step (non-differentiable there, so not compared).
  std::size_t refined = 0;
  std::size_t kinks = 0;
};

struct GradCheckReport {
  std::vector<GroupGradCheck> groups;

  // True when every checked group is strictly under `tolerance`.
  bool Passed(double tolerance) const;
  std::string ToText(double tolerance) const;
};

struct LossProbe {
  double value = 0.0;
  // Identifies the piecewise branch of the evaluation (see
  // Graph::relu_signature); 0 if the objective is smooth.
  std::uint64_t branch = 0;
};

// Central-difference check of every trainable, non-frozen entry against the
// analytic gradient. `loss` evaluates the objective from the store's current
// values; `analytic` must leave d(loss)/d(param) in store[i].grad. Frozen
// groups are reported with their (zero) analytic gradient; buffers such as
// the EMA codebook are reported as excluded.
GradCheckReport FiniteDiffCheck(ParameterStore& store,
                                const std::function<LossProbe()>& loss,
                                const std::function<void()>& analytic,
                                const GradCheckOptions& options = {});

}  // namespace lcrec::nn

#endif  // LCREC_NN_GRADCHECK_H_
