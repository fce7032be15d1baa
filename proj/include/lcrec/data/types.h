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

#ifndef LCREC_DATA_TYPES_H_
#define LCREC_DATA_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace lcrec {

using UserId = std::uint64_t;
using ItemId = std::uint64_t;
using CategoryId = std::uint64_t;

enum class ActionType : std::uint8_t { kExposure = 0, kClick = 1, kInteraction = 2 };
inline constexpr std::size_t kActionTypeCount = 3;
inline constexpr std::array<ActionType, kActionTypeCount> kAllActionTypes = {
    ActionType::kExposure, ActionType::kClick, ActionType::kInteraction};

std::string_view ToString(ActionType action);
std::optional<ActionType> ParseActionType(std::string_view text);

enum class LifecycleTag : std::int8_t {
  kUnexplored = 0,
  kEmergent = 1,
  kLongTerm = 2,
  kDeclining = 3,
};
inline constexpr std::size_t kLifecycleTagCount = 4;
inline constexpr std::array<LifecycleTag, kLifecycleTagCount> kAllLifecycleTags = {
    LifecycleTag::kUnexplored, LifecycleTag::kEmergent, LifecycleTag::kLongTerm,
    LifecycleTag::kDeclining};

std::string_view ToString(LifecycleTag tag);
std::optional<LifecycleTag> ParseLifecycleTag(std::string_view text);

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Calendar day (UTC) of a timestamp in seconds since the epoch.
constexpr std::int64_t DateKeyOf(std::int64_t timestamp) {
  return timestamp >= 0 ? timestamp / kSecondsPerDay
                        : -((-timestamp + kSecondsPerDay - 1) / kSecondsPerDay);
}

struct BehaviorEvent {
  UserId user_id = 0;
  ItemId item_id = 0;
  CategoryId category_id = 0;
  ActionType action = ActionType::kExposure;
  std::int64_t timestamp = 0;

  std::int64_t date_key() const { return DateKeyOf(timestamp); }

  friend bool operator==(const BehaviorEvent&, const BehaviorEvent&) = default;
};

// Relevance mass per recent active date; index 0 is the most recent date.
struct ActivityHistogram {
  ActionType action = ActionType::kExposure;
  std::vector<double> values;

  friend bool operator==(const ActivityHistogram&,
                         const ActivityHistogram&) = default;
};

struct RankingSample {
  std::uint64_t sample_id = 0;
  UserId user_id = 0;
  ItemId candidate_item_id = 0;
  CategoryId candidate_category_id = 0;
  std::int64_t timestamp = 0;
  int day_index = 0;
  // Shared-bottom input before the learned histogram encoding is appended.
  std::vector<double> shared_features;
  // Rows ordered exposure, click, interaction.
  std::array<ActivityHistogram, kActionTypeCount> histograms;
  int label_click = 0;
  int label_conversion = 0;
  std::optional<LifecycleTag> lifecycle_tag;

  friend bool operator==(const RankingSample&, const RankingSample&) = default;
};

struct DatasetSplit {
  std::vector<RankingSample> train;
  std::vector<RankingSample> validation;
  std::vector<RankingSample> test;
  // Events of the feature-construction window, sorted by (user, timestamp).
  std::vector<BehaviorEvent> window_events;
  int feature_window_days = 0;
  // Inclusive day-index ranges, days counted from 1.
  int last_day = 0;
  int train_end = 0;
  int validation_end = 0;
};

// Stable sort by (user_id, timestamp).
void SortEvents(std::vector<BehaviorEvent>& events);

}  // namespace lcrec

#endif  // LCREC_DATA_TYPES_H_
