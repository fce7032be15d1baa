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

#ifndef LCREC_EVAL_METRICS_H_
#define LCREC_EVAL_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lcrec/data/types.h"

namespace lcrec::eval {

// Probability that a random positive outranks a random negative, ties
// counted as one half, via the rank-sum statistic with average ranks.
// Returns nullopt when the labels are single-class.
std::optional<double> Auc(std::span<const double> scores,
                          std::span<const int> labels);

struct UserAuc {
  UserId user = 0;
  std::size_t impressions = 0;
  double auc = 0.0;
};

struct GaucReport {
  double gauc = 0.0;
  std::vector<UserAuc> users;  // eligible users in ascending id order
  std::size_t skipped_users = 0;
  std::size_t weighted_impressions = 0;
};

// Impression-weighted mean of per-user AUC over users that have both
// classes. Throws DataError if no user is eligible and std::invalid_argument
// if the spans disagree in length.
GaucReport Gauc(std::span<const UserId> users, std::span<const double> scores,
                std::span<const int> labels);

}  // namespace lcrec::eval

#endif  // LCREC_EVAL_METRICS_H_
