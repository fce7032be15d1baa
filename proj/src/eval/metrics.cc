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

#include "lcrec/eval/metrics.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lcrec/errors.h"

namespace lcrec::eval {

std::optional<double> Auc(std::span<const double> scores,
                          std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("AUC needs one label per score");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  double positives = 0.0;
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1 .. j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        positives += 1.0;
        rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) return std::nullopt;
  return (rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

GaucReport Gauc(std::span<const UserId> users, std::span<const double> scores,
                std::span<const int> labels) {
  if (users.size() != scores.size() || users.size() != labels.size()) {
    throw std::invalid_argument("GAUC inputs differ in length");
  }
  std::map<UserId, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < users.size(); ++i) groups[users[i]].push_back(i);

  GaucReport report;
  double weighted = 0.0;
  std::vector<double> s;
  std::vector<int> l;
  for (const auto& [user, rows] : groups) {
    s.clear();
    l.clear();
    for (std::size_t r : rows) {
      s.push_back(scores[r]);
      l.push_back(labels[r]);
    }
    const std::optional<double> auc = Auc(s, l);
    if (!auc) {
      ++report.skipped_users;
      continue;
    }
    report.users.push_back({user, rows.size(), *auc});
    report.weighted_impressions += rows.size();
    weighted += static_cast<double>(rows.size()) * *auc;
  }
  if (report.users.empty()) {
    throw DataError("GAUC undefined: no user has both positive and negative labels");
  }
  report.gauc = weighted / static_cast<double>(report.weighted_impressions);
  return report;
}

}  // namespace lcrec::eval
