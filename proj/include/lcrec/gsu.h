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

#ifndef LCREC_GSU_H_
#define LCREC_GSU_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "lcrec/data/types.h"

namespace lcrec {

// General search unit: per candidate, the most relevant recent behaviours of
// one action type.

enum class SearchMode { kHard, kSoft };

// Relevance carried by every hard-search result.
inline constexpr double kHardSearchRelevance = 0.1;

struct SearchConfig {
  SearchMode mode = SearchMode::kHard;
  // N: maximum number of results.
  int max_results = 100;
  // K: the search range is the user's K most recent active dates (days with
  // at least one event of the searched action type).
  int active_date_window = 20;
};

struct SearchResult {
  BehaviorEvent event;
  double relevance = 0.0;
};

// Distinct date keys of `events`, most recent first, at most `k` of them.
std::vector<std::int64_t> RecentActiveDates(std::span<const BehaviorEvent> events,
                                            int k);

// Events of `candidate` within the K most recent active dates, most recent
// first (ties by item id), truncated to N, each with relevance 0.1.
// `events` must be one user's events of one action type sorted by timestamp.
std::vector<SearchResult> HardSearch(std::span<const BehaviorEvent> events,
                                     CategoryId candidate,
                                     const SearchConfig& config);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  void Set(ItemId item, std::vector<double> embedding);
  // nullptr when the item has no embedding.
  const std::vector<double>* Find(ItemId item) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }

  // Whitespace separated: item_id v_1 ... v_dim per line.
  static EmbeddingTable Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<ItemId, std::vector<double>> table_;
};

struct SoftSearchOutput {
  std::vector<SearchResult> results;
  std::size_t missing_embeddings = 0;
};

// Relevance r = max(0, cos(candidate, event item)). Events with r = 0 are
// dropped; the top N by r are returned, ties broken by recency then item id.
SoftSearchOutput SoftSearch(std::span<const BehaviorEvent> events,
                            std::span<const double> candidate_embedding,
                            const EmbeddingTable& table,
                            const SearchConfig& config);

}  // namespace lcrec

#endif  // LCREC_GSU_H_
