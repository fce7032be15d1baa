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

#include "lcrec/data/event_loader.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_map>

#include "lcrec/errors.h"

namespace lcrec {
namespace {

std::vector<std::string_view> SplitCsvLine(std::string_view line,
                                           char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i < line.size() && line[i] == '"') quoted = !quoted;
    if (i == line.size() || (line[i] == delimiter && !quoted)) {
      std::string_view f = line.substr(start, i - start);
      if (f.size() >= 2 && f.front() == '"' && f.back() == '"') {
        f = f.substr(1, f.size() - 2);
      }
      fields.push_back(f);
      start = i + 1;
    }
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> ParseInteger(std::string_view s) {
  s = Trim(s);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Integer, or a float literal with an integral value ("1651234567000.0").
std::optional<std::int64_t> ParseTimestampLike(std::string_view s) {
  if (auto v = ParseInteger<std::int64_t>(s)) return v;
  s = Trim(s);
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(d)) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(std::floor(d));
}

// Leading integer of a category field such as "8" or "8,23".
std::optional<CategoryId> ParseCategory(std::string_view s) {
  s = Trim(s);
  std::size_t end = 0;
  while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
  if (end == 0) return std::nullopt;
  return ParseInteger<CategoryId>(s.substr(0, end));
}

std::unordered_map<ItemId, CategoryId> LoadCategoryMap(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("category map not found: " + path.string());
  std::unordered_map<ItemId, CategoryId> map;
  std::string line;
  while (std::getline(in, line)) {
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    auto fields = SplitCsvLine(line, delim);
    if (fields.size() < 2) continue;
    auto item = ParseInteger<ItemId>(fields[0]);
    auto cat = ParseCategory(fields[1]);
    if (item && cat) map[*item] = *cat;
  }
  return map;
}

class KuaiRandParser {
 public:
  KuaiRandParser(std::string_view header,
                 const std::unordered_map<ItemId, CategoryId>* category_map)
      : category_map_(category_map) {
    auto names = SplitCsvLine(header, ',');
    for (std::size_t i = 0; i < names.size(); ++i) {
      columns_[std::string(Trim(names[i]))] = i;
    }
    for (const char* required :
         {"user_id", "video_id", "time_ms", "is_click", "is_like", "is_follow",
          "is_comment", "is_forward"}) {
      if (!columns_.count(required)) {
        throw DataError(std::string("kuairand_csv header lacks column ") +
                        required);
      }
    }
    for (const char* c : {"category_id", "tag"}) {
      if (columns_.count(c)) {
        category_column_ = columns_[c];
        break;
      }
    }
  }

  // Appends the row's events; false when the row is malformed.
  bool Parse(std::string_view line, std::vector<BehaviorEvent>& out) const {
    auto f = SplitCsvLine(line, ',');
    auto field = [&](const char* name) -> std::optional<std::string_view> {
      const std::size_t idx = columns_.at(name);
      if (idx >= f.size()) return std::nullopt;
      return f[idx];
    };
    auto user = field("user_id");
    auto item = field("video_id");
    auto time_ms = field("time_ms");
    if (!user || !item || !time_ms) return false;
    auto user_id = ParseInteger<UserId>(*user);
    auto item_id = ParseInteger<ItemId>(*item);
    auto ms = ParseTimestampLike(*time_ms);
    if (!user_id || !item_id || !ms) return false;
    const std::int64_t timestamp = *ms / 1000;
    if (timestamp <= 0) return false;
    auto flag = [&](const char* name) {
      auto v = field(name);
      if (!v) return false;
      auto parsed = ParseTimestampLike(*v);
      return parsed.has_value() && *parsed != 0;
    };
    CategoryId category = *item_id;
    if (category_column_ && *category_column_ < f.size()) {
      if (auto c = ParseCategory(f[*category_column_])) category = *c;
    } else if (category_map_ != nullptr) {
      auto it = category_map_->find(*item_id);
      if (it != category_map_->end()) category = it->second;
    }
    BehaviorEvent e{*user_id, *item_id, category, ActionType::kExposure,
                    timestamp};
    out.push_back(e);
    if (flag("is_click")) {
      e.action = ActionType::kClick;
      out.push_back(e);
    }
    if (flag("is_like") || flag("is_follow") || flag("is_comment") ||
        flag("is_forward")) {
      e.action = ActionType::kInteraction;
      out.push_back(e);
    }
    return true;
  }

 private:
  std::unordered_map<std::string, std::size_t> columns_;
  std::optional<std::size_t> category_column_;
  const std::unordered_map<ItemId, CategoryId>* category_map_;
};

bool ParseTsvRow(std::string_view line, std::vector<BehaviorEvent>& out) {
  auto f = SplitCsvLine(line, '\t');
  if (f.size() != 5) return false;
  auto user = ParseInteger<UserId>(f[0]);
  auto item = ParseInteger<ItemId>(f[1]);
  auto cat = ParseInteger<CategoryId>(f[2]);
  auto action = ParseActionType(Trim(f[3]));
  auto ts = ParseInteger<std::int64_t>(f[4]);
  if (!user || !item || !cat || !action || !ts || *ts <= 0) return false;
  out.push_back(BehaviorEvent{*user, *item, *cat, *action, *ts});
  return true;
}

}  // namespace

std::optional<EventFormat> ParseEventFormat(std::string_view tag) {
  if (tag == "kuairand_csv") return EventFormat::kKuaiRandCsv;
  if (tag == "internal_tsv") return EventFormat::kInternalTsv;
  return std::nullopt;
}

LoadResult LoadEvents(const std::filesystem::path& path, EventFormat format,
                      const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("input file not found: " + path.string());
  std::unordered_map<ItemId, CategoryId> category_map;
  if (options.category_map) category_map = LoadCategoryMap(*options.category_map);

  LoadResult result;
  std::string line;
  std::optional<KuaiRandParser> kuairand;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (format == EventFormat::kKuaiRandCsv) {
        kuairand.emplace(line, options.category_map ? &category_map : nullptr);
        continue;
      }
      if (line.rfind("user_id", 0) == 0) continue;
    }
    ++result.total_rows;
    const bool ok = format == EventFormat::kKuaiRandCsv
                        ? kuairand->Parse(line, result.events)
                        : ParseTsvRow(line, result.events);
    if (!ok) ++result.rejected_rows;
  }
  if (result.total_rows > 0 &&
      static_cast<double>(result.rejected_rows) >
          options.max_rejected_fraction *
              static_cast<double>(result.total_rows)) {
    throw DataError(std::to_string(result.rejected_rows) + " of " +
                    std::to_string(result.total_rows) +
                    " rows failed to parse in " + path.string());
  }
  SortEvents(result.events);
  return result;
}

void WriteEventsTsv(const std::filesystem::path& path,
                    const std::vector<BehaviorEvent>& events) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write events: " + path.string());
  out << "user_id\titem_id\tcategory_id\taction\ttimestamp\n";
  for (const BehaviorEvent& e : events) {
    out << e.user_id << '\t' << e.item_id << '\t' << e.category_id << '\t'
        << ToString(e.action) << '\t' << e.timestamp << '\n';
  }
}

}  // namespace lcrec
