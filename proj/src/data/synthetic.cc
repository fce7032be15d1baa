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

#include "lcrec/data/synthetic.h"

#include <cmath>
#include <random>

#include "lcrec/errors.h"

namespace lcrec {
namespace {

double Logit(double p) { return std::log(p / (1.0 - p)); }
double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void BindPerPhase(ConfigBinder& binder, const std::string& prefix,
                  std::array<double, kLifecycleTagCount>& values) {
  for (LifecycleTag tag : kAllLifecycleTags) {
    binder.Bind(prefix + "_" + std::string(ToString(tag)),
                &values[static_cast<std::size_t>(tag)]);
  }
}

}  // namespace

void BindSyntheticConfig(ConfigBinder& binder, SyntheticConfig& c,
                         const std::string& prefix) {
  const std::string p = prefix + ".";
  binder.Bind(p + "users", &c.users);
  binder.Bind(p + "categories", &c.categories);
  binder.Bind(p + "items_per_category", &c.items_per_category);
  binder.Bind(p + "total_days", &c.total_days);
  binder.Bind(p + "window_days", &c.window_days);
  binder.Bind(p + "impressions_per_user_day", &c.impressions_per_user_day);
  BindPerPhase(binder, p + "phase", c.phase_mix);
  binder.Bind(p + "active_day_prob", &c.active_day_prob);
  binder.Bind(p + "exposure_rate", &c.exposure_rate);
  binder.Bind(p + "intensity_min", &c.intensity_min);
  binder.Bind(p + "intensity_max", &c.intensity_max);
  binder.Bind(p + "history_click_rate", &c.history_click_rate);
  binder.Bind(p + "history_interaction_rate", &c.history_interaction_rate);
  BindPerPhase(binder, p + "ctr", c.ctr);
  BindPerPhase(binder, p + "cvr", c.cvr);
  BindPerPhase(binder, p + "quality_effect", c.quality_effect);
  binder.Bind(p + "embedding_dim", &c.embedding_dim);
  binder.Bind(p + "embedding_noise", &c.embedding_noise);
  binder.Bind(p + "seed", &c.seed);
  binder.Bind(p + "start_timestamp", &c.start_timestamp);
}

void ValidateSyntheticConfig(const SyntheticConfig& c) {
  if (c.users <= 0) throw UsageError("synthetic config: zero users");
  if (c.categories <= 0) throw UsageError("synthetic config: zero categories");
  if (c.items_per_category <= 0) {
    throw UsageError("synthetic config: items_per_category must be positive");
  }
  if (c.window_days < 2 || c.total_days <= c.window_days) {
    throw UsageError(
        "synthetic config: need window_days >= 2 and total_days > window_days");
  }
  double sum = 0.0;
  for (double w : c.phase_mix) {
    if (w < 0.0) throw UsageError("synthetic config: negative phase weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw UsageError("synthetic config: phase mix sums to " +
                     FormatDouble(sum) + ", expected 1");
  }
  for (const auto* rates : {&c.ctr, &c.cvr}) {
    for (double r : *rates) {
      if (!(r > 0.0 && r < 1.0)) {
        throw UsageError("synthetic config: label rates must lie in (0, 1)");
      }
    }
  }
  if (!(c.history_click_rate > 0.0 && c.history_click_rate < 1.0) ||
      c.history_interaction_rate < 0.0 || c.history_interaction_rate > 1.0) {
    throw UsageError("synthetic config: history rates out of range");
  }
  if (c.intensity_min < 0.0 || c.intensity_max < c.intensity_min) {
    throw UsageError("synthetic config: bad intensity range");
  }
}

double PhaseIntensity(LifecycleTag phase, int day, int window_days) {
  const double s = static_cast<double>(day - 1) /
                   static_cast<double>(window_days - 1);
  switch (phase) {
    case LifecycleTag::kUnexplored:
      return 0.0;
    case LifecycleTag::kEmergent:
      return s;
    case LifecycleTag::kLongTerm:
      return 1.0;
    case LifecycleTag::kDeclining:
      return 1.0 - s;
  }
  return 0.0;
}

SyntheticData GenerateSynthetic(const SyntheticConfig& c) {
  ValidateSyntheticConfig(c);
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> second_of_day(0,
                                                            kSecondsPerDay - 1);
  SyntheticData data;

  // Items: latent quality plus an embedding near the category centroid.
  const auto item_id = [&](int category, int j) -> ItemId {
    return static_cast<ItemId>(category) * 100000 + static_cast<ItemId>(j);
  };
  std::vector<std::vector<double>> quality(c.categories + 1);
  data.item_embeddings = EmbeddingTable(static_cast<std::size_t>(c.embedding_dim));
  for (int cat = 1; cat <= c.categories; ++cat) {
    std::vector<double> centroid(c.embedding_dim);
    for (double& v : centroid) v = normal(rng);
    quality[cat].resize(c.items_per_category);
    for (int j = 0; j < c.items_per_category; ++j) {
      quality[cat][j] = normal(rng);
      std::vector<double> e = centroid;
      for (double& v : e) v += c.embedding_noise * normal(rng);
      data.item_embeddings.Set(item_id(cat, j), std::move(e));
    }
  }

  std::discrete_distribution<int> phase_dist(c.phase_mix.begin(),
                                             c.phase_mix.end());
  std::uniform_int_distribution<int> pick_category(1, c.categories);
  std::uniform_int_distribution<int> pick_item(0, c.items_per_category - 1);
  std::uniform_real_distribution<double> intensity(c.intensity_min,
                                                   c.intensity_max);
  const double history_click_logit = Logit(c.history_click_rate);
  std::uint64_t next_sample_id = 0;

  for (int u = 1; u <= c.users; ++u) {
    const UserId user = static_cast<UserId>(u);
    std::vector<LifecycleTag> phase(c.categories + 1);
    std::vector<double> multiplier(c.categories + 1);
    for (int cat = 1; cat <= c.categories; ++cat) {
      phase[cat] = static_cast<LifecycleTag>(phase_dist(rng));
      multiplier[cat] = intensity(rng);
      data.phases[{user, static_cast<CategoryId>(cat)}] = phase[cat];
    }
    // Feature-window history.
    for (int day = 1; day <= c.window_days; ++day) {
      if (unit(rng) >= c.active_day_prob) continue;
      const std::int64_t day_start =
          c.start_timestamp + static_cast<std::int64_t>(day - 1) * kSecondsPerDay;
      for (int cat = 1; cat <= c.categories; ++cat) {
        const double rate = c.exposure_rate * multiplier[cat] *
                            PhaseIntensity(phase[cat], day, c.window_days);
        if (rate <= 0.0) continue;
        std::poisson_distribution<int> count(rate);
        const int n = count(rng);
        for (int k = 0; k < n; ++k) {
          const int j = pick_item(rng);
          BehaviorEvent e{user, item_id(cat, j), static_cast<CategoryId>(cat),
                          ActionType::kExposure, day_start + second_of_day(rng)};
          data.events.push_back(e);
          if (unit(rng) < 1.0 / (1.0 + std::exp(-(history_click_logit +
                                                 quality[cat][j])))) {
            e.action = ActionType::kClick;
            data.events.push_back(e);
            if (unit(rng) < c.history_interaction_rate) {
              e.action = ActionType::kInteraction;
              data.events.push_back(e);
            }
          }
        }
      }
    }
    // Label days: impressions with phase-dependent outcomes.
    for (int day = c.window_days + 1; day <= c.total_days; ++day) {
      const std::int64_t day_start =
          c.start_timestamp + static_cast<std::int64_t>(day - 1) * kSecondsPerDay;
      for (int k = 0; k < c.impressions_per_user_day; ++k) {
        const int cat = pick_category(rng);
        const int j = pick_item(rng);
        const std::size_t p = static_cast<std::size_t>(phase[cat]);
        RankingSample s;
        s.sample_id = next_sample_id++;
        s.user_id = user;
        s.candidate_item_id = item_id(cat, j);
        s.candidate_category_id = static_cast<CategoryId>(cat);
        s.timestamp = day_start + second_of_day(rng);
        s.day_index = day;
        s.lifecycle_tag = phase[cat];
        const double click_p =
            Sigmoid(Logit(c.ctr[p]) + c.quality_effect[p] * quality[cat][j]);
        s.label_click = unit(rng) < click_p ? 1 : 0;
        s.label_conversion =
            (s.label_click == 1 && unit(rng) < c.cvr[p]) ? 1 : 0;
        BehaviorEvent e{user, s.candidate_item_id, s.candidate_category_id,
                        ActionType::kExposure, s.timestamp};
        data.events.push_back(e);
        if (s.label_click) {
          e.action = ActionType::kClick;
          data.events.push_back(e);
        }
        if (s.label_conversion) {
          e.action = ActionType::kInteraction;
          data.events.push_back(e);
        }
        data.samples.push_back(std::move(s));
      }
    }
  }
  SortEvents(data.events);
  return data;
}

}  // namespace lcrec
