// Copyright 2026 The Refresh Authors.
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "refresh/nn/parameter.hpp"

namespace refresh::nn {

// Binary checkpoint container, format version 1. Integers are little-endian.
//
//   8 bytes   magic "RFRSHCKP"
//   u32       format version
//   u64       manifest length M
//   M bytes   manifest JSON:
//               {"metadata":<caller JSON>,
//                "tensors":[{"count","frozen_rows","name","offset","shape",
//                            "step_count"}, ...]}
//   u64       data length D
//   D bytes   for each tensor at its byte offset: value, adam_m, adam_v,
//             `count` IEEE-754 binary64 values each
//   u64       FNV-1a 64-bit hash of the manifest and data bytes
//
// Gradients are not stored; they are zero after loading.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointContents {
  ParameterStore params;
  std::string metadata_json;  // compact JSON text
};

// `metadata_json` must be a JSON value; it is stored re-serialised in
// canonical form (sorted keys) so identical inputs give identical bytes.
void write_checkpoint(std::ostream& out, const ParameterStore& params,
                      std::string_view metadata_json);
CheckpointContents read_checkpoint(std::istream& in, const std::string& source);

void save_checkpoint_file(const std::filesystem::path& path, const ParameterStore& params,
                          std::string_view metadata_json);
CheckpointContents load_checkpoint_file(const std::filesystem::path& path);

}  // namespace refresh::nn
