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

#include "lcrec/data/features.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <utility>

namespace lcrec {

const std::array<std::string, kBaseFeatureCount>& BaseFeatureNames() {
  static const std::array<std::string, kBaseFeatureCount> names = {
      "user_exposures",   "user_clicks",      "user_interactions",
      "search_exposures", "search_clicks",    "search_interactions",
      "search_ctr",       "item_click_logit", "category_exposures"};
  return names;
}

FeatureBuilder::FeatureBuilder(std::span<const BehaviorEvent> window_events,
                               SearchConfig config,
                               const EmbeddingTable* embeddings)
    : config_(config), embeddings_(embeddings) {
  std::size_t begin = 0;
  while (begin < window_events.size()) {
    std::size_t end = begin;
    const UserId user = window_events[begin].user_id;
    while (end < window_events.size() && window_events[end].user_id == user) {
      ++end;
    }
    auto& history = histories_[user];
    auto& counts = user_counts_[user];
    // Events may arrive in several runs per user if the input is unsorted.
    UserHistory part = MakeUserHistory(window_events.subspan(begin, end - begin));
    for (std::size_t a = 0; a < kActionTypeCount; ++a) {
      auto& dst = history.by_action[a];
      dst.insert(dst.end(), part.by_action[a].begin(), part.by_action[a].end());
      counts[a] += part.by_action[a].size();
    }
    begin = end;
  }
  for (auto& [user, history] : histories_) {
    (void)user;
    for (auto& events : history.by_action) {
      std::stable_sort(events.begin(), events.end(),
                       [](const BehaviorEvent& a, const BehaviorEvent& b) {
                         return a.timestamp < b.timestamp;
                       });
    }
  }
  for (const BehaviorEvent& e : window_events) {
    if (e.action == ActionType::kExposure) {
      ++item_counts_[e.item_id].first;
      ++category_exposures_[e.category_id];
    } else if (e.action == ActionType::kClick) {
      ++item_counts_[e.item_id].second;
    }
  }
}

FeatureBlock FeatureBuilder::BlockFor(const RankingSample& sample) const {
  static const UserHistory kEmpty;
  auto it = histories_.find(sample.user_id);
  const UserHistory& history = it == histories_.end() ? kEmpty : it->second;
  SoftSearchContext soft{embeddings_, sample.candidate_item_id};
  return BuildFeatureBlock(history, sample.candidate_category_id, config_,
                           config_.mode == SearchMode::kSoft ? &soft : nullptr);
}

void FeatureBuilder::FillFrom(const FeatureBlock& block,
                              RankingSample& sample) const {
  sample.histograms = block.histograms;
  std::vector<double> f(kBaseFeatureCount, 0.0);
  auto uc = user_counts_.find(sample.user_id);
  for (std::size_t a = 0; a < kActionTypeCount; ++a) {
    const double n = uc == user_counts_.end() ? 0.0
                                              : static_cast<double>(uc->second[a]);
    f[a] = std::log1p(n);
    f[3 + a] = std::log1p(static_cast<double>(block.result_counts[a]));
  }
  f[6] = (static_cast<double>(block.result_counts[1]) + 1.0) /
         (static_cast<double>(block.result_counts[0]) + 2.0);
  auto ic = item_counts_.find(sample.candidate_item_id);
  const double exposures =
      ic == item_counts_.end() ? 0.0 : static_cast<double>(ic->second.first);
  const double clicks =
      ic == item_counts_.end() ? 0.0 : static_cast<double>(ic->second.second);
  f[7] = std::log((clicks + 1.0) / (std::max(exposures - clicks, 0.0) + 1.0));
  auto cc = category_exposures_.find(sample.candidate_category_id);
  f[8] = std::log1p(cc == category_exposures_.end()
                        ? 0.0
                        : static_cast<double>(cc->second));
  sample.shared_features = std::move(f);
}

void FeatureBuilder::Fill(RankingSample& sample) const {
  const FeatureBlock block = BlockFor(sample);
  missing_embeddings_ += block.missing_embeddings;
  FillFrom(block, sample);
}

void FeatureBuilder::FillAll(std::vector<RankingSample>& samples,
                             int threads) const {
  if (config_.mode == SearchMode::kHard) {
    // Hard search does not depend on the candidate item.
    std::map<std::pair<UserId, CategoryId>, FeatureBlock> cache;
    for (RankingSample& s : samples) {
      const auto key = std::make_pair(s.user_id, s.candidate_category_id);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, BlockFor(s)).first;
      FillFrom(it->second, s);
    }
    return;
  }
  threads = std::max(threads, 1);
  std::vector<std::size_t> missing(threads, 0);
  auto work = [&](int t) {
    for (std::size_t i = t; i < samples.size(); i += threads) {
      const FeatureBlock block = BlockFor(samples[i]);
      missing[t] += block.missing_embeddings;
      FillFrom(block, samples[i]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (std::size_t m : missing) missing_embeddings_ += m;
}

}  // namespace lcrec
