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

#include "lcrec/eval/reports.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lcrec::eval {
namespace {

double Entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

std::vector<int> Relabel(std::span<const int> labels) {
  std::map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = ids.emplace(labels[i], static_cast<int>(ids.size())).first;
    out[i] = it->second;
  }
  return out;
}

// E[MI] under the hypergeometric model of random labellings with fixed
// marginals.
double ExpectedMutualInformation(const std::vector<double>& a,
                                 const std::vector<double>& b, double n) {
  const double lg_n = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (double ai : a) {
    for (double bj : b) {
      const double lo = std::max(1.0, ai + bj - n);
      const double hi = std::min(ai, bj);
      const double fixed = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                           std::lgamma(n - ai + 1.0) + std::lgamma(n - bj + 1.0) -
                           lg_n;
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_p = fixed - std::lgamma(nij + 1.0) -
                             std::lgamma(ai - nij + 1.0) -
                             std::lgamma(bj - nij + 1.0) -
                             std::lgamma(n - ai - bj + nij + 1.0);
        emi += (nij / n) * std::log(n * nij / (ai * bj)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

}  // namespace

SliceReport LifecycleSliceReport(std::span<const std::optional<LifecycleTag>> tags,
                                 std::span<const double> pred_ctr,
                                 std::span<const double> pred_cvr,
                                 std::span<const int> clicks,
                                 std::span<const int> conversions) {
  const std::size_t n = tags.size();
  if (pred_ctr.size() != n || pred_cvr.size() != n || clicks.size() != n ||
      conversions.size() != n) {
    throw std::invalid_argument("slice report inputs differ in length");
  }
  struct Acc {
    std::size_t impressions = 0, clicks = 0, conversions = 0;
    double p_ctr = 0.0, p_cvr_clicked = 0.0;
  };
  std::array<Acc, kLifecycleTagCount> acc{};
  SliceReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tags[i]) {
      ++report.untagged;
      continue;
    }
    Acc& a = acc[static_cast<std::size_t>(*tags[i])];
    ++a.impressions;
    a.p_ctr += pred_ctr[i];
    if (clicks[i]) {
      ++a.clicks;
      a.conversions += conversions[i] ? 1 : 0;
      a.p_cvr_clicked += pred_cvr[i];
    }
    ++report.total;
  }
  for (LifecycleTag tag : kAllLifecycleTags) {
    const Acc& a = acc[static_cast<std::size_t>(tag)];
    if (a.impressions == 0) {
      report.absent.push_back(tag);
      continue;
    }
    SliceRow row;
    row.tag = tag;
    row.impressions = a.impressions;
    const double imp = static_cast<double>(a.impressions);
    row.share = imp / static_cast<double>(report.total);
    row.ctr = static_cast<double>(a.clicks) / imp;
    row.mean_pred_ctr = a.p_ctr / imp;
    if (a.clicks > 0) {
      const double c = static_cast<double>(a.clicks);
      row.cvr = static_cast<double>(a.conversions) / c;
      row.mean_pred_cvr = a.p_cvr_clicked / c;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::optional<std::size_t> ClusterActivationReport::RowOf(LifecycleTag tag) const {
  for (std::size_t r = 0; r < tags.size(); ++r) {
    if (tags[r] == tag) return r;
  }
  return std::nullopt;
}

ClusterActivationReport ClusterActivation(std::span<const LifecycleTag> tags,
                                          std::span<const int> clusters,
                                          int num_codes) {
  if (tags.size() != clusters.size()) {
    throw std::invalid_argument("one cluster index per tag required");
  }
  if (num_codes < 1) throw std::invalid_argument("num_codes must be positive");
  const auto m = static_cast<std::size_t>(num_codes);
  std::array<std::vector<std::size_t>, kLifecycleTagCount> hist;
  for (auto& h : hist) h.assign(m, 0);
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (clusters[i] < 0 || clusters[i] >= num_codes) {
      throw std::invalid_argument("cluster index out of range");
    }
    ++hist[static_cast<std::size_t>(tags[i])][static_cast<std::size_t>(clusters[i])];
  }
  ClusterActivationReport report;
  report.num_codes = num_codes;
  for (LifecycleTag tag : kAllLifecycleTags) {
    const auto& h = hist[static_cast<std::size_t>(tag)];
    std::size_t total = 0;
    for (std::size_t c : h) total += c;
    if (total == 0) continue;
    std::vector<double> row(m);
    for (std::size_t k = 0; k < m; ++k) {
      row[k] = static_cast<double>(h[k]) / static_cast<double>(total);
    }
    report.tags.push_back(tag);
    report.counts.push_back(total);
    report.majority.push_back(static_cast<int>(
        std::max_element(h.begin(), h.end()) - h.begin()));
    report.distribution.push_back(std::move(row));
  }
  std::vector<int> tag_ids(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) tag_ids[i] = static_cast<int>(tags[i]);
  report.ami = AdjustedMutualInformation(tag_ids, clusters);
  return report;
}

double AdjustedMutualInformation(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("labellings differ in length");
  const std::vector<int> la = Relabel(a);
  const std::vector<int> lb = Relabel(b);
  const int ka = la.empty() ? 0 : *std::max_element(la.begin(), la.end()) + 1;
  const int kb = lb.empty() ? 0 : *std::max_element(lb.begin(), lb.end()) + 1;
  if (ka <= 1 || kb <= 1) return 0.0;

  const double n = static_cast<double>(a.size());
  std::vector<std::vector<double>> table(static_cast<std::size_t>(ka),
                                         std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  std::vector<double> ra(static_cast<std::size_t>(ka), 0.0);
  std::vector<double> rb(static_cast<std::size_t>(kb), 0.0);
  for (std::size_t i = 0; i < la.size(); ++i) {
    table[static_cast<std::size_t>(la[i])][static_cast<std::size_t>(lb[i])] += 1.0;
    ra[static_cast<std::size_t>(la[i])] += 1.0;
    rb[static_cast<std::size_t>(lb[i])] += 1.0;
  }
  double mi = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (std::size_t j = 0; j < rb.size(); ++j) {
      const double nij = table[i][j];
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (ra[i] * rb[j]));
    }
  }
  const double emi = ExpectedMutualInformation(ra, rb, n);
  const double normalizer = 0.5 * (Entropy(ra, n) + Entropy(rb, n));
  double denominator = normalizer - emi;
  constexpr double kEps = 2.220446049250313e-16;
  denominator = denominator < 0.0 ? std::min(denominator, -kEps)
                                  : std::max(denominator, kEps);
  return (mi - emi) / denominator;
}

void BindTaggerConfig(ConfigBinder& binder, TaggerConfig& config) {
  binder.Bind("eval.tag_slope_threshold", &config.slope_threshold);
}

double RelativeSlope(std::span<const double> h) {
  // Index 0 is the most recent date, so time runs as -k.
  const double k = static_cast<double>(h.size());
  if (h.size() < 2) return 0.0;
  double mean_t = 0.0, mean_v = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mean_t += -static_cast<double>(i);
    mean_v += h[i];
  }
  mean_t /= k;
  mean_v /= k;
  if (mean_v <= 0.0) return 0.0;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dt = -static_cast<double>(i) - mean_t;
    cov += dt * (h[i] - mean_v);
    var += dt * dt;
  }
  return cov / var * k / mean_v;
}

LifecycleTag TagFromHistograms(
    const std::array<ActivityHistogram, kActionTypeCount>& histograms,
    const TaggerConfig& config) {
  bool any = false;
  for (const ActivityHistogram& h : histograms) {
    for (double v : h.values) any = any || v != 0.0;
  }
  if (!any) return LifecycleTag::kUnexplored;
  const double slope = RelativeSlope(histograms[0].values);
  if (slope > config.slope_threshold) return LifecycleTag::kEmergent;
  if (slope < -config.slope_threshold) return LifecycleTag::kDeclining;
  return LifecycleTag::kLongTerm;
}

}  // namespace lcrec::eval
