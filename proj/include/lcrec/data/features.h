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

#ifndef LCREC_DATA_FEATURES_H_
#define LCREC_DATA_FEATURES_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lcrec/data/types.h"
#include "lcrec/gsu.h"
#include "lcrec/histogram.h"

namespace lcrec {

// Shared-bottom features available to every model variant, including the
// search-based baseline:
//   0-2  log1p(user exposures / clicks / interactions in the window)
//   3-5  log1p(search result count per action for the candidate)
//   6    smoothed click-through of the candidate's search results
//   7    smoothed click log-odds of the candidate item in the window
//   8    log1p(window exposures of the candidate category)
inline constexpr std::size_t kBaseFeatureCount = 9;
const std::array<std::string, kBaseFeatureCount>& BaseFeatureNames();

// Builds histograms and base features from feature-window events only.
class FeatureBuilder {
 public:
  FeatureBuilder(std::span<const BehaviorEvent> window_events,
                 SearchConfig config, const EmbeddingTable* embeddings = nullptr);

  // Fills histograms and shared_features of every sample. Hard-search blocks
  // are shared across samples of the same (user, category).
  void FillAll(std::vector<RankingSample>& samples, int threads = 1) const;
  void Fill(RankingSample& sample) const;

  const SearchConfig& config() const { return config_; }
  std::size_t missing_embeddings() const { return missing_embeddings_; }

 private:
  FeatureBlock BlockFor(const RankingSample& sample) const;
  void FillFrom(const FeatureBlock& block, RankingSample& sample) const;

  SearchConfig config_;
  const EmbeddingTable* embeddings_;
  std::unordered_map<UserId, UserHistory> histories_;
  std::unordered_map<UserId, std::array<std::size_t, kActionTypeCount>>
      user_counts_;
  std::unordered_map<ItemId, std::pair<std::size_t, std::size_t>> item_counts_;
  std::unordered_map<CategoryId, std::size_t> category_exposures_;
  mutable std::size_t missing_embeddings_ = 0;
};

}  // namespace lcrec

#endif  // LCREC_DATA_FEATURES_H_
