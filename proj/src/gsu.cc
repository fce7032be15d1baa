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

#include "lcrec/gsu.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "lcrec/errors.h"

namespace lcrec {
namespace {

// Index of the first event inside the K-most-recent-active-date window.
std::size_t WindowStart(std::span<const BehaviorEvent> events, int k) {
  if (events.empty() || k <= 0) return events.size();
  int dates = 0;
  std::int64_t current = 0;
  std::size_t start = events.size();
  for (std::size_t i = events.size(); i-- > 0;) {
    const std::int64_t d = events[i].date_key();
    if (dates == 0 || d != current) {
      if (dates == k) break;
      ++dates;
      current = d;
    }
    start = i;
  }
  return start;
}

bool MoreRecent(const SearchResult& a, const SearchResult& b) {
  if (a.event.timestamp != b.event.timestamp) {
    return a.event.timestamp > b.event.timestamp;
  }
  return a.event.item_id < b.event.item_id;
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<std::int64_t> RecentActiveDates(std::span<const BehaviorEvent> events,
                                            int k) {
  std::vector<std::int64_t> dates;
  for (std::size_t i = events.size(); i-- > 0;) {
    const std::int64_t d = events[i].date_key();
    if (dates.empty() || dates.back() != d) {
      if (static_cast<int>(dates.size()) == k) break;
      dates.push_back(d);
    }
  }
  return dates;
}

std::vector<SearchResult> HardSearch(std::span<const BehaviorEvent> events,
                                     CategoryId candidate,
                                     const SearchConfig& config) {
  std::vector<SearchResult> results;
  for (std::size_t i = WindowStart(events, config.active_date_window);
       i < events.size(); ++i) {
    if (events[i].category_id == candidate) {
      results.push_back(SearchResult{events[i], kHardSearchRelevance});
    }
  }
  std::stable_sort(results.begin(), results.end(), MoreRecent);
  if (results.size() > static_cast<std::size_t>(config.max_results)) {
    results.resize(static_cast<std::size_t>(config.max_results));
  }
  return results;
}

void EmbeddingTable::Set(ItemId item, std::vector<double> embedding) {
  if (dim_ == 0) dim_ = embedding.size();
  if (embedding.size() != dim_) {
    throw ShapeError("embedding for item " + std::to_string(item) + " has " +
                     std::to_string(embedding.size()) + " dims, table has " +
                     std::to_string(dim_));
  }
  table_[item] = std::move(embedding);
}

const std::vector<double>* EmbeddingTable::Find(ItemId item) const {
  auto it = table_.find(item);
  return it == table_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("embedding table not found: " + path.string());
  EmbeddingTable table;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    ItemId item = 0;
    if (!(ss >> item)) continue;
    std::vector<double> v;
    double x = 0.0;
    while (ss >> x) v.push_back(x);
    table.Set(item, std::move(v));
  }
  return table;
}

void EmbeddingTable::Save(const std::filesystem::path& path) const {
  std::vector<ItemId> items;
  items.reserve(table_.size());
  for (const auto& [item, v] : table_) items.push_back(item);
  std::sort(items.begin(), items.end());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write embedding table: " + path.string());
  out.precision(17);
  for (ItemId item : items) {
    out << item;
    for (double x : table_.at(item)) out << ' ' << x;
    out << '\n';
  }
}

SoftSearchOutput SoftSearch(std::span<const BehaviorEvent> events,
                            std::span<const double> candidate_embedding,
                            const EmbeddingTable& table,
                            const SearchConfig& config) {
  if (candidate_embedding.size() != table.dim()) {
    throw ShapeError("soft search: candidate embedding has " +
                     std::to_string(candidate_embedding.size()) +
                     " dims, table has " + std::to_string(table.dim()));
  }
  SoftSearchOutput out;
  const double candidate_norm = Norm(candidate_embedding);
  for (std::size_t i = WindowStart(events, config.active_date_window);
       i < events.size(); ++i) {
    const std::vector<double>* e = table.Find(events[i].item_id);
    if (e == nullptr) {
      ++out.missing_embeddings;
      continue;
    }
    const double norm = Norm(*e);
    if (norm == 0.0 || candidate_norm == 0.0) continue;
    double dot = 0.0;
    for (std::size_t j = 0; j < e->size(); ++j) {
      dot += (*e)[j] * candidate_embedding[j];
    }
    const double r = std::max(0.0, dot / (norm * candidate_norm));
    if (r > 0.0) out.results.push_back(SearchResult{events[i], r});
  }
  std::stable_sort(out.results.begin(), out.results.end(),
                   [](const SearchResult& a, const SearchResult& b) {
                     if (a.relevance != b.relevance) {
                       return a.relevance > b.relevance;
                     }
                     return MoreRecent(a, b);
                   });
  if (out.results.size() > static_cast<std::size_t>(config.max_results)) {
    out.results.resize(static_cast<std::size_t>(config.max_results));
  }
  return out;
}

}  // namespace lcrec
