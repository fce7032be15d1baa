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

#ifndef LCREC_NN_CHECKPOINT_H_
#define LCREC_NN_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lcrec/nn/parameter_store.h"

namespace lcrec::nn {

inline constexpr int kCheckpointVersion = 1;

// Named-array container:
//
//   LCREC-CHECKPOINT v1
//   metadata <n>
//   <key>\t<value>                      (n lines)
//   arrays <m>
//   <name>\t<group>\t<trainable>\t<rank>\t<d0> <d1> ...
//   <raw little-endian float64 payload>  (repeated m times)
struct CheckpointArray {
  std::string name;
  std::string group;
  bool trainable = true;
  Tensor value;
};

struct CheckpointFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<CheckpointArray> arrays;

  // Throws DataError when the key is absent.
  const std::string& Meta(const std::string& key) const;
};

void WriteCheckpoint(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& metadata,
    const ParameterStore& store);

CheckpointFile ReadCheckpoint(const std::filesystem::path& path);

// Copies every array into the store by name. A missing array or a shape
// disagreement throws ShapeError naming the parameter and its group.
void LoadIntoStore(const CheckpointFile& file, ParameterStore& store);

}  // namespace lcrec::nn

#endif  // LCREC_NN_CHECKPOINT_H_
