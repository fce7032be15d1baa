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

#ifndef LCREC_EVAL_REPORTS_H_
#define LCREC_EVAL_REPORTS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lcrec/config.h"
#include "lcrec/data/types.h"

namespace lcrec::eval {

struct SliceRow {
  LifecycleTag tag = LifecycleTag::kUnexplored;
  std::size_t impressions = 0;
  double share = 0.0;
  double ctr = 0.0;
  std::optional<double> cvr;  // conversions / clicks; absent without clicks
  double mean_pred_ctr = 0.0;
  // Mean predicted CVR over the clicked impressions of the bucket.
  std::optional<double> mean_pred_cvr;
};

struct SliceReport {
  std::size_t total = 0;
  std::vector<SliceRow> rows;         // tags with at least one sample
  std::vector<LifecycleTag> absent;   // tags without samples
  std::size_t untagged = 0;
};

// Per-tag impression share, empirical CTR/CVR and mean predictions. Samples
// without a tag are counted separately and excluded from the shares.
SliceReport LifecycleSliceReport(std::span<const std::optional<LifecycleTag>> tags,
                                 std::span<const double> pred_ctr,
                                 std::span<const double> pred_cvr,
                                 std::span<const int> clicks,
                                 std::span<const int> conversions);

struct ClusterActivationReport {
  int num_codes = 0;
  // One row per tag that has samples, in tag order.
  std::vector<LifecycleTag> tags;
  std::vector<std::size_t> counts;
  std::vector<std::vector<double>> distribution;
  std::vector<int> majority;  // most frequent cluster per row, lowest on ties
  double ami = 0.0;

  // Row of `tag`, if present.
  std::optional<std::size_t> RowOf(LifecycleTag tag) const;
};

ClusterActivationReport ClusterActivation(std::span<const LifecycleTag> tags,
                                          std::span<const int> clusters,
                                          int num_codes);

// Adjusted mutual information with arithmetic-mean normalization, using the
// exact hypergeometric expected mutual information. Returns 0 when either
// labelling has a single class, since no information can be shared.
double AdjustedMutualInformation(std::span<const int> a, std::span<const int> b);

struct TaggerConfig {
  // |relative slope| above this is a trend, otherwise a flat long-term
  // interest. The relative slope is the least-squares slope per day times
  // the histogram length over the mean mass.
  double slope_threshold = 0.5;
};

void BindTaggerConfig(ConfigBinder& binder, TaggerConfig& config);

// Rule-based lifecycle tag from the histogram shape (reporting only): no mass
// in any histogram is unexplored; otherwise the exposure histogram's trend
// decides between emergent, long-term and declining.
LifecycleTag TagFromHistograms(
    const std::array<ActivityHistogram, kActionTypeCount>& histograms,
    const TaggerConfig& config);

double RelativeSlope(std::span<const double> histogram);

}  // namespace lcrec::eval

#endif  // LCREC_EVAL_REPORTS_H_
