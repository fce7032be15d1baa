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

#ifndef LCREC_DATA_SPLIT_H_
#define LCREC_DATA_SPLIT_H_

#include <vector>

#include "lcrec/data/types.h"

namespace lcrec {

struct SplitBoundaries {
  // Last day (inclusive, 1-based) of the training and validation ranges.
  int train_end = 0;
  int validation_end = 0;
};

// Day indices are counted from 1 at the earliest date among events and
// samples. Days 1..feature_window_days hold only feature-construction events;
// samples are assigned by day_index alone:
//   train      = (feature_window_days, train_end]
//   validation = (train_end, validation_end]
//   test       = (validation_end, last day]
// Samples inside the feature window are dropped. Throws DataError unless
// 0 <= window < train_end < validation_end < last day.
DatasetSplit SplitByDay(std::vector<BehaviorEvent> events,
                        std::vector<RankingSample> samples,
                        int feature_window_days, SplitBoundaries boundaries);

// Number of distinct days spanned by events and samples.
int DaySpan(const std::vector<BehaviorEvent>& events,
            const std::vector<RankingSample>& samples);

// One sample per exposure after the feature window. Clicks and interactions
// on the same (user, item, day) set the labels; conversion requires a click.
std::vector<RankingSample> SamplesFromEvents(
    const std::vector<BehaviorEvent>& events, int feature_window_days);

}  // namespace lcrec

#endif  // LCREC_DATA_SPLIT_H_
