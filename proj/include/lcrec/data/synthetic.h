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

#ifndef LCREC_DATA_SYNTHETIC_H_
#define LCREC_DATA_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lcrec/config.h"
#include "lcrec/data/types.h"
#include "lcrec/gsu.h"

namespace lcrec {

// Generator of user logs whose per-(user, category) activity follows a
// life-cycle phase template. Arrays indexed by LifecycleTag.
struct SyntheticConfig {
  int users = 1050;
  int categories = 20;
  int items_per_category = 50;
  int total_days = 30;
  int window_days = 20;
  int impressions_per_user_day = 5;
  std::array<double, kLifecycleTagCount> phase_mix = {0.4, 0.2, 0.2, 0.2};
  double active_day_prob = 0.85;
  // Expected exposures per active day at template intensity 1.
  double exposure_rate = 3.0;
  // Per-pair multiplier on the template, uniform in [min, max].
  double intensity_min = 0.5;
  double intensity_max = 1.5;
  double history_click_rate = 0.3;
  double history_interaction_rate = 0.3;
  // Label-day click and conversion-given-click rates per phase.
  std::array<double, kLifecycleTagCount> ctr = {0.05, 0.30, 0.20, 0.10};
  std::array<double, kLifecycleTagCount> cvr = {0.10, 0.30, 0.25, 0.10};
  // Weight of the latent item quality on the click logit per phase.
  std::array<double, kLifecycleTagCount> quality_effect = {0.3, 1.0, 0.6, 0.0};
  int embedding_dim = 8;
  double embedding_noise = 0.3;
  std::uint64_t seed = 1;
  // Midnight UTC of day 1.
  std::int64_t start_timestamp = 1649980800;
};

// Registers every field under "<prefix>.<name>".
void BindSyntheticConfig(ConfigBinder& binder, SyntheticConfig& config,
                         const std::string& prefix = "synthetic");

// Throws UsageError on zero users or categories, a phase mix that does not
// sum to 1 within 1e-9, or inconsistent day counts.
void ValidateSyntheticConfig(const SyntheticConfig& config);

struct SyntheticData {
  // History and label-day events, sorted by (user, timestamp).
  std::vector<BehaviorEvent> events;
  // One sample per label-day impression; features are not yet built.
  std::vector<RankingSample> samples;
  EmbeddingTable item_embeddings;
  std::map<std::pair<UserId, CategoryId>, LifecycleTag> phases;
};

// Expected daily activity multiplier of a phase on window day `day`
// (1-based): emergent ramps 0 -> 1, stable is flat at 1, declining ramps
// 1 -> 0 and unexplored is 0.
double PhaseIntensity(LifecycleTag phase, int day, int window_days);

SyntheticData GenerateSynthetic(const SyntheticConfig& config);

}  // namespace lcrec

#endif  // LCREC_DATA_SYNTHETIC_H_
