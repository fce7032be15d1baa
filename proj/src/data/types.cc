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

#include "lcrec/data/types.h"

#include <algorithm>

namespace lcrec {

std::string_view ToString(ActionType action) {
  switch (action) {
    case ActionType::kExposure:
      return "exposure";
    case ActionType::kClick:
      return "click";
    case ActionType::kInteraction:
      return "interaction";
  }
  return "unknown";
}

std::optional<ActionType> ParseActionType(std::string_view text) {
  for (ActionType a : kAllActionTypes) {
    if (ToString(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view ToString(LifecycleTag tag) {
  switch (tag) {
    case LifecycleTag::kUnexplored:
      return "unexplored";
    case LifecycleTag::kEmergent:
      return "emergent";
    case LifecycleTag::kLongTerm:
      return "long_term";
    case LifecycleTag::kDeclining:
      return "declining";
  }
  return "unknown";
}

std::optional<LifecycleTag> ParseLifecycleTag(std::string_view text) {
  for (LifecycleTag t : kAllLifecycleTags) {
    if (ToString(t) == text) return t;
  }
  if (text == "stable") return LifecycleTag::kLongTerm;
  return std::nullopt;
}

void SortEvents(std::vector<BehaviorEvent>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const BehaviorEvent& a, const BehaviorEvent& b) {
                     if (a.user_id != b.user_id) return a.user_id < b.user_id;
                     return a.timestamp < b.timestamp;
                   });
}

}  // namespace lcrec
