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

#include "lcrec/data/dataset.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <utility>

#include "json.hpp"
#include "lcrec/data/features.h"
#include "lcrec/data/split.h"
#include "lcrec/errors.h"

namespace lcrec {
namespace {

constexpr char kMagic[] = "LCREC-DATASET";

template <typename T>
void Put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T Get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError("truncated dataset cache");
  return v;
}

void PutDoubles(std::ostream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> GetDoubles(std::istream& in, std::size_t n) {
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw DataError("truncated dataset cache");
  return v;
}

void WriteSamples(std::ostream& out, const std::vector<RankingSample>& samples,
                  std::size_t feature_dim, std::size_t length) {
  Put<std::uint64_t>(out, samples.size());
  for (const RankingSample& s : samples) {
    if (s.shared_features.size() != feature_dim) {
      throw ShapeError("sample " + std::to_string(s.sample_id) + " has " +
                       std::to_string(s.shared_features.size()) +
                       " features, dataset has " + std::to_string(feature_dim));
    }
    Put<std::uint64_t>(out, s.sample_id);
    Put<std::uint64_t>(out, s.user_id);
    Put<std::uint64_t>(out, s.candidate_item_id);
    Put<std::uint64_t>(out, s.candidate_category_id);
    Put<std::int64_t>(out, s.timestamp);
    Put<std::int32_t>(out, s.day_index);
    Put<std::int32_t>(out, s.label_click);
    Put<std::int32_t>(out, s.label_conversion);
    Put<std::int32_t>(out, s.lifecycle_tag ? static_cast<int>(*s.lifecycle_tag)
                                           : -1);
    PutDoubles(out, s.shared_features);
    for (const ActivityHistogram& h : s.histograms) {
      if (h.values.size() != length) {
        throw ShapeError("histogram length mismatch in sample " +
                         std::to_string(s.sample_id));
      }
      PutDoubles(out, h.values);
    }
  }
}

std::vector<RankingSample> ReadSamples(std::istream& in, std::size_t feature_dim,
                                       std::size_t length) {
  const auto count = Get<std::uint64_t>(in);
  std::vector<RankingSample> samples;
  samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    RankingSample s;
    s.sample_id = Get<std::uint64_t>(in);
    s.user_id = Get<std::uint64_t>(in);
    s.candidate_item_id = Get<std::uint64_t>(in);
    s.candidate_category_id = Get<std::uint64_t>(in);
    s.timestamp = Get<std::int64_t>(in);
    s.day_index = Get<std::int32_t>(in);
    s.label_click = Get<std::int32_t>(in);
    s.label_conversion = Get<std::int32_t>(in);
    const auto tag = Get<std::int32_t>(in);
    if (tag >= 0) s.lifecycle_tag = static_cast<LifecycleTag>(tag);
    s.shared_features = GetDoubles(in, feature_dim);
    for (ActionType a : kAllActionTypes) {
      s.histograms[static_cast<std::size_t>(a)] =
          ActivityHistogram{a, GetDoubles(in, length)};
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

nlohmann::ordered_json HeaderJson(const Dataset& d) {
  nlohmann::ordered_json j;
  j["format_version"] = kDatasetVersion;
  j["source"] = d.source;
  j["histogram_length"] = d.histogram_length;
  j["feature_names"] = d.feature_names;
  j["feature_mean"] = d.feature_mean;
  j["feature_scale"] = d.feature_scale;
  j["feature_window_days"] = d.split.feature_window_days;
  j["last_day"] = d.split.last_day;
  j["train_end"] = d.split.train_end;
  j["validation_end"] = d.split.validation_end;
  j["total_rows"] = d.total_rows;
  j["rejected_rows"] = d.rejected_rows;
  return j;
}

}  // namespace

Dataset BuildDataset(std::vector<BehaviorEvent> events,
                     std::vector<RankingSample> samples,
                     const PrepareOptions& options) {
  const int last_day = DaySpan(events, samples);
  Dataset d;
  d.split = SplitByDay(std::move(events), std::move(samples),
                       options.window_days,
                       SplitBoundaries{last_day - 2, last_day - 1});
  d.histogram_length = options.search.active_date_window;
  d.feature_names.assign(BaseFeatureNames().begin(), BaseFeatureNames().end());
  FeatureBuilder builder(d.split.window_events, options.search,
                         options.embeddings);
  builder.FillAll(d.split.train, options.threads);
  builder.FillAll(d.split.validation, options.threads);
  builder.FillAll(d.split.test, options.threads);
  StandardizeFeatures(d);
  return d;
}

void StandardizeFeatures(Dataset& d) {
  const std::size_t dim = d.feature_dim();
  d.feature_mean.assign(dim, 0.0);
  d.feature_scale.assign(dim, 1.0);
  const auto& train = d.split.train;
  if (!train.empty()) {
    const double n = static_cast<double>(train.size());
    for (const RankingSample& s : train) {
      for (std::size_t k = 0; k < dim; ++k) d.feature_mean[k] += s.shared_features[k];
    }
    for (double& m : d.feature_mean) m /= n;
    std::vector<double> var(dim, 0.0);
    for (const RankingSample& s : train) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double c = s.shared_features[k] - d.feature_mean[k];
        var[k] += c * c;
      }
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const double sd = std::sqrt(var[k] / n);
      d.feature_scale[k] = sd > 1e-12 ? sd : 1.0;
    }
  }
  for (auto* part : {&d.split.train, &d.split.validation, &d.split.test}) {
    for (RankingSample& s : *part) {
      for (std::size_t k = 0; k < dim; ++k) {
        s.shared_features[k] =
            (s.shared_features[k] - d.feature_mean[k]) / d.feature_scale[k];
      }
    }
  }
}

void SaveDataset(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write dataset cache: " + path.string());
  out << kMagic << " v" << kDatasetVersion << "\n";
  out << HeaderJson(d).dump() << "\n";
  const std::size_t length = static_cast<std::size_t>(d.histogram_length);
  WriteSamples(out, d.split.train, d.feature_dim(), length);
  WriteSamples(out, d.split.validation, d.feature_dim(), length);
  WriteSamples(out, d.split.test, d.feature_dim(), length);
  if (!out) throw DataError("failed writing dataset cache: " + path.string());
}

Dataset LoadDataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("dataset cache not found: " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != std::string(kMagic) + " v" + std::to_string(kDatasetVersion)) {
    throw DataError("unsupported dataset cache header '" + line + "' in " +
                    path.string());
  }
  std::getline(in, line);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt dataset header: ") + e.what());
  }
  Dataset d;
  d.source = j.at("source").get<std::string>();
  d.histogram_length = j.at("histogram_length").get<int>();
  d.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  d.feature_mean = j.at("feature_mean").get<std::vector<double>>();
  d.feature_scale = j.at("feature_scale").get<std::vector<double>>();
  d.split.feature_window_days = j.at("feature_window_days").get<int>();
  d.split.last_day = j.at("last_day").get<int>();
  d.split.train_end = j.at("train_end").get<int>();
  d.split.validation_end = j.at("validation_end").get<int>();
  d.total_rows = j.at("total_rows").get<std::size_t>();
  d.rejected_rows = j.at("rejected_rows").get<std::size_t>();
  const std::size_t length = static_cast<std::size_t>(d.histogram_length);
  d.split.train = ReadSamples(in, d.feature_dim(), length);
  d.split.validation = ReadSamples(in, d.feature_dim(), length);
  d.split.test = ReadSamples(in, d.feature_dim(), length);
  return d;
}

std::string ManifestJson(const Dataset& d) {
  nlohmann::ordered_json j;
  j["format_version"] = kDatasetVersion;
  j["source"] = d.source;
  j["histogram_length"] = d.histogram_length;
  j["feature_dim"] = d.feature_dim();
  const DatasetSplit& s = d.split;
  j["partition_days"] = {
      {"feature_window", s.feature_window_days},
      {"train", s.train_end - s.feature_window_days},
      {"validation", s.validation_end - s.train_end},
      {"test", s.last_day - s.validation_end},
  };
  j["day_ranges"] = {
      {"feature_window", {1, s.feature_window_days}},
      {"train", {s.feature_window_days + 1, s.train_end}},
      {"validation", {s.train_end + 1, s.validation_end}},
      {"test", {s.validation_end + 1, s.last_day}},
  };
  j["samples"] = {{"train", s.train.size()},
                  {"validation", s.validation.size()},
                  {"test", s.test.size()}};
  j["total_rows"] = d.total_rows;
  j["rejected_rows"] = d.rejected_rows;
  return j.dump(2) + "\n";
}

}  // namespace lcrec
