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

#include "lcrec/nn/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

namespace lcrec::nn {

bool GradCheckReport::Passed(double tolerance) const {
  return std::all_of(groups.begin(), groups.end(), [&](const auto& g) {
    return g.status != GroupCheckStatus::kChecked ||
           g.max_relative_error < tolerance;
  });
}

std::string GradCheckReport::ToText(double tolerance) const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-22s %-9s %8s %8s %6s %14s %14s %s\n",
                "group", "status", "entries", "refined", "kinks", "max_rel_err",
                "max_|grad|", "result");
  out += line;
  for (const GroupGradCheck& g : groups) {
    const char* status = g.status == GroupCheckStatus::kChecked  ? "checked"
                         : g.status == GroupCheckStatus::kFrozen ? "frozen"
                                                                 : "excluded";
    const char* result =
        g.status != GroupCheckStatus::kChecked  ? "-"
        : g.max_relative_error < tolerance      ? "PASS"
                                                : "FAIL";
    std::snprintf(line, sizeof(line), "%-22s %-9s %8zu %8zu %6zu %14.3e %14.3e %s\n",
                  g.group.c_str(), status, g.entries, g.refined, g.kinks,
                  g.max_relative_error, g.max_abs_analytic, result);
    out += line;
  }
  return out;
}

GradCheckReport FiniteDiffCheck(ParameterStore& store,
                                const std::function<LossProbe()>& loss,
                                const std::function<void()>& analytic,
                                const GradCheckOptions& options) {
  store.ZeroGrad();
  analytic();

  std::map<std::string, GroupGradCheck> by_group;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store[i];
    auto [it, inserted] = by_group.try_emplace(p.group);
    GroupGradCheck& report = it->second;
    if (inserted) {
      report.group = p.group;
      order.push_back(p.group);
      report.status = !p.trainable ? GroupCheckStatus::kExcluded
                      : p.frozen   ? GroupCheckStatus::kFrozen
                                   : GroupCheckStatus::kChecked;
    }
    if (!p.trainable) continue;
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      report.max_abs_analytic =
          std::max(report.max_abs_analytic, std::abs(p.grad[j]));
    }
    if (p.frozen) continue;
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double original = p.value[j];
      const std::uint64_t base = loss().branch;
      double step = options.step;
      std::optional<double> numeric;
      while (step >= options.min_step * 0.999) {
        p.value[j] = original + step;
        const LossProbe plus = loss();
        p.value[j] = original - step;
        const LossProbe minus = loss();
        p.value[j] = original;
        if (plus.branch == base && minus.branch == base) {
          numeric = (plus.value - minus.value) / (2.0 * step);
          break;
        }
        step /= 10.0;
      }
      if (!numeric) {
        ++report.kinks;
        continue;
      }
      if (step < options.step) ++report.refined;
      const double a = p.grad[j];
      const double abs_err = std::abs(a - *numeric);
      const double denom =
          std::max({std::abs(a), std::abs(*numeric), options.relative_floor});
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      report.max_relative_error =
          std::max(report.max_relative_error, abs_err / denom);
      ++report.entries;
    }
  }
  GradCheckReport result;
  for (const std::string& g : order) result.groups.push_back(by_group[g]);
  return result;
}

}  // namespace lcrec::nn
