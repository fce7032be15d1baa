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

#ifndef LCREC_HISTOGRAM_H_
#define LCREC_HISTOGRAM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lcrec/data/types.h"
#include "lcrec/gsu.h"

namespace lcrec {

// values[j] = sum of relevance over results dated on active_dates[j]
// (active_dates[0] is the most recent). Slots beyond active_dates.size() are
// zero. Throws std::invalid_argument if a result is dated outside
// `active_dates`.
ActivityHistogram BuildHistogram(std::span<const SearchResult> results,
                                 std::span<const std::int64_t> active_dates,
                                 std::size_t length, ActionType action);

// One user's window events split by action type, each sorted by timestamp.
struct UserHistory {
  std::array<std::vector<BehaviorEvent>, kActionTypeCount> by_action;

  std::span<const BehaviorEvent> events(ActionType a) const {
    return by_action[static_cast<std::size_t>(a)];
  }
};

UserHistory MakeUserHistory(std::span<const BehaviorEvent> user_events);

struct SoftSearchContext {
  const EmbeddingTable* table = nullptr;
  ItemId candidate_item = 0;
};

struct FeatureBlock {
  // Rows ordered exposure, click, interaction; each of length K.
  std::array<ActivityHistogram, kActionTypeCount> histograms;
  std::array<std::size_t, kActionTypeCount> result_counts{};
  std::size_t missing_embeddings = 0;
};

// Runs the configured search once per action type and builds each row
// independently. Soft mode requires `soft` with a table that holds the
// candidate item.
FeatureBlock BuildFeatureBlock(const UserHistory& history,
                               CategoryId candidate_category,
                               const SearchConfig& config,
                               const SoftSearchContext* soft = nullptr);

}  // namespace lcrec

#endif  // LCREC_HISTOGRAM_H_
