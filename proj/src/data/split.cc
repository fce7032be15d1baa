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

#include "lcrec/data/split.h"

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <tuple>

#include "lcrec/errors.h"

namespace lcrec {
namespace {

struct DayRange {
  std::int64_t first_date = std::numeric_limits<std::int64_t>::max();
  std::int64_t last_date = std::numeric_limits<std::int64_t>::min();
  bool empty() const { return first_date > last_date; }
};

DayRange RangeOf(const std::vector<BehaviorEvent>& events,
                 const std::vector<RankingSample>& samples) {
  DayRange r;
  for (const BehaviorEvent& e : events) {
    r.first_date = std::min(r.first_date, e.date_key());
    r.last_date = std::max(r.last_date, e.date_key());
  }
  for (const RankingSample& s : samples) {
    r.first_date = std::min(r.first_date, DateKeyOf(s.timestamp));
    r.last_date = std::max(r.last_date, DateKeyOf(s.timestamp));
  }
  return r;
}

}  // namespace

int DaySpan(const std::vector<BehaviorEvent>& events,
            const std::vector<RankingSample>& samples) {
  const DayRange r = RangeOf(events, samples);
  return r.empty() ? 0 : static_cast<int>(r.last_date - r.first_date + 1);
}

DatasetSplit SplitByDay(std::vector<BehaviorEvent> events,
                        std::vector<RankingSample> samples,
                        int feature_window_days, SplitBoundaries b) {
  const DayRange range = RangeOf(events, samples);
  if (range.empty()) throw DataError("cannot split an empty dataset");
  const int last_day = static_cast<int>(range.last_date - range.first_date + 1);
  if (feature_window_days < 0 || b.train_end <= feature_window_days ||
      b.validation_end <= b.train_end || last_day <= b.validation_end) {
    throw DataError("split boundaries (window " +
                    std::to_string(feature_window_days) + ", train_end " +
                    std::to_string(b.train_end) + ", validation_end " +
                    std::to_string(b.validation_end) +
                    ") do not fit the data's day range 1.." +
                    std::to_string(last_day));
  }
  DatasetSplit split;
  split.feature_window_days = feature_window_days;
  split.last_day = last_day;
  split.train_end = b.train_end;
  split.validation_end = b.validation_end;
  for (const BehaviorEvent& e : events) {
    const int day = static_cast<int>(e.date_key() - range.first_date + 1);
    if (day <= feature_window_days) split.window_events.push_back(e);
  }
  SortEvents(split.window_events);
  for (RankingSample& s : samples) {
    s.day_index = static_cast<int>(DateKeyOf(s.timestamp) - range.first_date + 1);
    if (s.day_index <= feature_window_days) continue;
    if (s.day_index <= b.train_end) {
      split.train.push_back(std::move(s));
    } else if (s.day_index <= b.validation_end) {
      split.validation.push_back(std::move(s));
    } else {
      split.test.push_back(std::move(s));
    }
  }
  return split;
}

std::vector<RankingSample> SamplesFromEvents(
    const std::vector<BehaviorEvent>& events, int feature_window_days) {
  std::vector<RankingSample> samples;
  if (events.empty()) return samples;
  std::int64_t first_date = events.front().date_key();
  for (const BehaviorEvent& e : events) first_date = std::min(first_date, e.date_key());

  using Key = std::tuple<UserId, ItemId, std::int64_t>;
  std::set<Key> clicked;
  std::set<Key> interacted;
  for (const BehaviorEvent& e : events) {
    const Key k{e.user_id, e.item_id, e.date_key()};
    if (e.action == ActionType::kClick) clicked.insert(k);
    if (e.action == ActionType::kInteraction) interacted.insert(k);
  }
  std::uint64_t next_id = 0;
  for (const BehaviorEvent& e : events) {
    if (e.action != ActionType::kExposure) continue;
    const int day = static_cast<int>(e.date_key() - first_date + 1);
    if (day <= feature_window_days) continue;
    const Key k{e.user_id, e.item_id, e.date_key()};
    RankingSample s;
    s.sample_id = next_id++;
    s.user_id = e.user_id;
    s.candidate_item_id = e.item_id;
    s.candidate_category_id = e.category_id;
    s.timestamp = e.timestamp;
    s.day_index = day;
    s.label_click = clicked.count(k) ? 1 : 0;
    s.label_conversion = (s.label_click && interacted.count(k)) ? 1 : 0;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace lcrec
