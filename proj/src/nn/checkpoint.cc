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

#include "lcrec/nn/checkpoint.h"

#include <fstream>
#include <sstream>

#include "lcrec/errors.h"

namespace lcrec::nn {
namespace {

constexpr char kMagic[] = "LCREC-CHECKPOINT";

std::string ReadLine(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("truncated checkpoint: " + path.string());
  }
  return line;
}

std::size_t ParseCount(const std::string& line, const std::string& tag,
                       const std::filesystem::path& path) {
  std::istringstream ss(line);
  std::string word;
  std::size_t count = 0;
  if (!(ss >> word >> count) || word != tag) {
    throw DataError("malformed checkpoint section '" + line + "' in " +
                    path.string());
  }
  return count;
}

}  // namespace

const std::string& CheckpointFile::Meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  throw DataError("checkpoint metadata missing key: " + key);
}

void WriteCheckpoint(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& metadata,
    const ParameterStore& store) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  out << kMagic << " v" << kCheckpointVersion << "\n";
  out << "metadata " << metadata.size() << "\n";
  for (const auto& [key, value] : metadata) out << key << "\t" << value << "\n";
  out << "arrays " << store.size() << "\n";
  for (const Parameter& p : store) {
    out << p.name << "\t" << p.group << "\t" << (p.trainable ? 1 : 0) << "\t"
        << p.value.rank() << "\t";
    for (std::size_t d = 0; d < p.value.rank(); ++d) {
      out << (d > 0 ? " " : "") << p.value.dim(d);
    }
    out << "\n";
    out.write(reinterpret_cast<const char*>(p.value.raw()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing checkpoint: " + path.string());
}

CheckpointFile ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  const std::string header = ReadLine(in, path);
  const std::string expected =
      std::string(kMagic) + " v" + std::to_string(kCheckpointVersion);
  if (header != expected) {
    throw DataError("unsupported checkpoint header '" + header + "' in " +
                    path.string());
  }
  CheckpointFile file;
  const std::size_t meta_count = ParseCount(ReadLine(in, path), "metadata", path);
  for (std::size_t i = 0; i < meta_count; ++i) {
    const std::string line = ReadLine(in, path);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("malformed checkpoint metadata line: " + line);
    }
    file.metadata.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  const std::size_t array_count = ParseCount(ReadLine(in, path), "arrays", path);
  for (std::size_t i = 0; i < array_count; ++i) {
    std::istringstream ss(ReadLine(in, path));
    CheckpointArray array;
    int trainable = 0;
    std::size_t rank = 0;
    if (!std::getline(ss, array.name, '\t') ||
        !std::getline(ss, array.group, '\t') || !(ss >> trainable >> rank)) {
      throw DataError("malformed checkpoint array header in " + path.string());
    }
    std::vector<std::size_t> shape(rank);
    for (std::size_t& d : shape) {
      if (!(ss >> d)) {
        throw DataError("malformed shape for array " + array.name);
      }
    }
    array.trainable = trainable != 0;
    array.value = Tensor(shape);
    in.read(reinterpret_cast<char*>(array.value.raw()),
            static_cast<std::streamsize>(array.value.size() * sizeof(double)));
    if (!in) throw DataError("truncated payload for array " + array.name);
    file.arrays.push_back(std::move(array));
  }
  return file;
}

void LoadIntoStore(const CheckpointFile& file, ParameterStore& store) {
  for (Parameter& p : store) {
    const CheckpointArray* found = nullptr;
    for (const CheckpointArray& a : file.arrays) {
      if (a.name == p.name) {
        found = &a;
        break;
      }
    }
    if (found == nullptr) {
      throw ShapeError("checkpoint has no array for " + p.name + " (component " +
                       p.group + ")");
    }
    if (!found->value.SameShape(p.value)) {
      throw ShapeError("dimension mismatch in component " + p.group + ": " +
                       p.name + " expects " + p.value.ShapeString() +
                       ", checkpoint has " + found->value.ShapeString());
    }
    p.value = found->value;
  }
}

}  // namespace lcrec::nn
