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

#include "lcrec/histogram.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lcrec/errors.h"

namespace lcrec {

ActivityHistogram BuildHistogram(std::span<const SearchResult> results,
                                 std::span<const std::int64_t> active_dates,
                                 std::size_t length, ActionType action) {
  if (active_dates.size() > length) {
    throw std::invalid_argument("histogram: " +
                                std::to_string(active_dates.size()) +
                                " active dates exceed length " +
                                std::to_string(length));
  }
  ActivityHistogram h{action, std::vector<double>(length, 0.0)};
  for (const SearchResult& r : results) {
    const std::int64_t date = r.event.date_key();
    auto it = std::find(active_dates.begin(), active_dates.end(), date);
    if (it == active_dates.end()) {
      throw std::invalid_argument(
          "histogram: search result dated " + std::to_string(date) +
          " lies outside the active-date window");
    }
    h.values[static_cast<std::size_t>(it - active_dates.begin())] += r.relevance;
  }
  return h;
}

UserHistory MakeUserHistory(std::span<const BehaviorEvent> user_events) {
  UserHistory history;
  for (const BehaviorEvent& e : user_events) {
    history.by_action[static_cast<std::size_t>(e.action)].push_back(e);
  }
  for (auto& events : history.by_action) {
    std::stable_sort(events.begin(), events.end(),
                     [](const BehaviorEvent& a, const BehaviorEvent& b) {
                       return a.timestamp < b.timestamp;
                     });
  }
  return history;
}

FeatureBlock BuildFeatureBlock(const UserHistory& history,
                               CategoryId candidate_category,
                               const SearchConfig& config,
                               const SoftSearchContext* soft) {
  FeatureBlock block;
  const std::size_t length = static_cast<std::size_t>(config.active_date_window);
  const std::vector<double>* candidate_embedding = nullptr;
  if (config.mode == SearchMode::kSoft) {
    if (soft == nullptr || soft->table == nullptr) {
      throw std::invalid_argument("soft search requires an embedding table");
    }
    candidate_embedding = soft->table->Find(soft->candidate_item);
    if (candidate_embedding == nullptr) {
      throw DataError("no embedding for candidate item " +
                      std::to_string(soft->candidate_item));
    }
  }
  for (ActionType action : kAllActionTypes) {
    const auto events = history.events(action);
    const std::vector<std::int64_t> dates =
        RecentActiveDates(events, config.active_date_window);
    std::vector<SearchResult> results;
    if (config.mode == SearchMode::kHard) {
      results = HardSearch(events, candidate_category, config);
    } else {
      SoftSearchOutput out =
          SoftSearch(events, *candidate_embedding, *soft->table, config);
      block.missing_embeddings += out.missing_embeddings;
      results = std::move(out.results);
    }
    const std::size_t row = static_cast<std::size_t>(action);
    block.result_counts[row] = results.size();
    block.histograms[row] = BuildHistogram(results, dates, length, action);
  }
  return block;
}

}  // namespace lcrec
