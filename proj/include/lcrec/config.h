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

#ifndef LCREC_CONFIG_H_
#define LCREC_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lcrec {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat "key = value" lines; blank lines and '#' comments are ignored.
// Throws UsageError on a line without '='.
KeyValues ParseKeyValueText(std::string_view text);
KeyValues ReadKeyValueFile(const std::filesystem::path& path);
std::string FormatKeyValues(const KeyValues& values);

// Binds config keys to struct fields so that a whole run can be loaded from
// one flat file and echoed back verbatim.
class ConfigBinder {
 public:
  using Setter = std::function<void(const std::string&)>;
  using Getter = std::function<std::string()>;

  void Bind(std::string key, int* target);
  void Bind(std::string key, double* target);
  void Bind(std::string key, std::uint64_t* target);
  void Bind(std::string key, std::int64_t* target);
  void Bind(std::string key, std::string* target);
  void Bind(std::string key, bool* target);
  void BindCustom(std::string key, Setter set, Getter get);

  // Throws UsageError for unknown keys and unparseable values.
  void Set(const std::string& key, const std::string& value);
  void Apply(const KeyValues& values);
  bool Has(std::string_view key) const;
  // Every bound key in registration order.
  KeyValues Dump() const;

 private:
  struct Entry {
    std::string key;
    Setter set;
    Getter get;
  };
  std::vector<Entry> entries_;
};

std::string FormatDouble(double v);

}  // namespace lcrec

#endif  // LCREC_CONFIG_H_
