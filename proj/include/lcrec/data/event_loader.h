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

#ifndef LCREC_DATA_EVENT_LOADER_H_
#define LCREC_DATA_EVENT_LOADER_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "lcrec/data/types.h"

namespace lcrec {

enum class EventFormat {
  // KuaiRand interaction log (comma separated, header row). Required columns:
  // user_id, video_id, time_ms, is_click, is_like, is_follow, is_comment,
  // is_forward. An optional `tag` or `category_id` column supplies the
  // category; otherwise the category map (or the item id) is used. Each row
  // yields an exposure, a click when is_click=1, and an interaction when any
  // of like/follow/comment/forward is set.
  kKuaiRandCsv,
  // One event per line: user_id \t item_id \t category_id \t action \t
  // timestamp_seconds, action in {exposure, click, interaction}. A header line
  // starting with "user_id" is skipped.
  kInternalTsv,
};

std::optional<EventFormat> ParseEventFormat(std::string_view tag);

struct LoadOptions {
  // Two columns item_id,category_id (comma or tab separated) for logs that do
  // not carry a category.
  std::optional<std::filesystem::path> category_map;
  // Fatal when rejected_rows / total_rows exceeds this fraction.
  double max_rejected_fraction = 0.01;
};

struct LoadResult {
  std::vector<BehaviorEvent> events;  // sorted by (user_id, timestamp)
  std::size_t total_rows = 0;
  std::size_t rejected_rows = 0;
};

// Throws DataError on a missing file, or when too many rows fail to parse
// (the message carries the failure count).
LoadResult LoadEvents(const std::filesystem::path& path, EventFormat format,
                      const LoadOptions& options = {});

void WriteEventsTsv(const std::filesystem::path& path,
                    const std::vector<BehaviorEvent>& events);

}  // namespace lcrec

#endif  // LCREC_DATA_EVENT_LOADER_H_
