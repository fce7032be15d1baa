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

#include "lcrec/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lcrec/errors.h"

namespace lcrec {
namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw UsageError("invalid value '" + value + "' for key " + key);
  }
  return out;
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

KeyValues ParseKeyValueText(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) +
                       " is not key = value: " + trimmed);
    }
    out.emplace_back(Trim(std::string_view(trimmed).substr(0, eq)),
                     Trim(std::string_view(trimmed).substr(eq + 1)));
  }
  return out;
}

KeyValues ReadKeyValueFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseKeyValueText(ss.str());
}

std::string FormatKeyValues(const KeyValues& values) {
  std::string out;
  for (const auto& [k, v] : values) out += k + " = " + v + "\n";
  return out;
}

void ConfigBinder::Bind(std::string key, int* target) {
  const std::string k = key;
  BindCustom(
      std::move(key),
      [target, k](const std::string& v) { *target = ParseNumber<int>(k, v); },
      [target] { return std::to_string(*target); });
}

void ConfigBinder::Bind(std::string key, double* target) {
  const std::string k = key;
  BindCustom(
      std::move(key),
      [target, k](const std::string& v) { *target = ParseNumber<double>(k, v); },
      [target] { return FormatDouble(*target); });
}

void ConfigBinder::Bind(std::string key, std::uint64_t* target) {
  const std::string k = key;
  BindCustom(
      std::move(key),
      [target, k](const std::string& v) {
        *target = ParseNumber<std::uint64_t>(k, v);
      },
      [target] { return std::to_string(*target); });
}

void ConfigBinder::Bind(std::string key, std::int64_t* target) {
  const std::string k = key;
  BindCustom(
      std::move(key),
      [target, k](const std::string& v) {
        *target = ParseNumber<std::int64_t>(k, v);
      },
      [target] { return std::to_string(*target); });
}

void ConfigBinder::Bind(std::string key, std::string* target) {
  BindCustom(
      std::move(key), [target](const std::string& v) { *target = v; },
      [target] { return *target; });
}

void ConfigBinder::Bind(std::string key, bool* target) {
  const std::string k = key;
  BindCustom(
      std::move(key),
      [target, k](const std::string& v) {
        if (v == "true" || v == "1") {
          *target = true;
        } else if (v == "false" || v == "0") {
          *target = false;
        } else {
          throw UsageError("invalid boolean '" + v + "' for key " + k);
        }
      },
      [target] { return std::string(*target ? "true" : "false"); });
}

void ConfigBinder::BindCustom(std::string key, Setter set, Getter get) {
  entries_.push_back(Entry{std::move(key), std::move(set), std::move(get)});
}

void ConfigBinder::Set(const std::string& key, const std::string& value) {
  for (Entry& e : entries_) {
    if (e.key == key) {
      e.set(value);
      return;
    }
  }
  throw UsageError("unknown config key: " + key);
}

void ConfigBinder::Apply(const KeyValues& values) {
  for (const auto& [k, v] : values) Set(k, v);
}

bool ConfigBinder::Has(std::string_view key) const {
  for (const Entry& e : entries_) {
    if (e.key == key) return true;
  }
  return false;
}

KeyValues ConfigBinder::Dump() const {
  KeyValues out;
  for (const Entry& e : entries_) out.emplace_back(e.key, e.get());
  return out;
}

}  // namespace lcrec
