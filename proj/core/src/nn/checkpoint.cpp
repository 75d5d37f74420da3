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

#include "refresh/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <vector>

#include "refresh/error.hpp"

namespace refresh::nn {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "RFRSHCKP";
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

template <class UInt>
void put_le(std::string& buf, UInt v) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

template <class UInt>
UInt get_le(std::string_view bytes) {
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    v |= static_cast<UInt>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  }
  return v;
}

void put_doubles(std::string& buf, std::span<const double> values) {
  for (double d : values) put_le(buf, std::bit_cast<std::uint64_t>(d));
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::string take(std::size_t n) {
    std::string buf(n, '\0');
    in_.read(buf.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated file");
    return buf;
  }
  template <class UInt>
  UInt take_le() {
    return get_le<UInt>(take(sizeof(UInt)));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw CheckpointError(source_ + ": " + what);
  }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace

void write_checkpoint(std::ostream& out, const ParameterStore& params,
                      std::string_view metadata_json) {
  json manifest;
  try {
    manifest["metadata"] = json::parse(metadata_json);
  } catch (const json::exception& e) {
    throw Error(std::string("checkpoint metadata is not valid JSON: ") + e.what());
  }
  std::string data;
  json tensors = json::array();
  for (const auto& p : params) {
    tensors.push_back({{"name", p.name},
                       {"shape", p.value.shape()},
                       {"offset", data.size()},
                       {"count", p.value.size()},
                       {"step_count", p.step_count},
                       {"frozen_rows", p.frozen_rows}});
    put_doubles(data, p.value.data());
    put_doubles(data, p.adam_m.data());
    put_doubles(data, p.adam_v.data());
  }
  manifest["tensors"] = std::move(tensors);
  const std::string manifest_text = manifest.dump();

  std::string buf(kMagic);
  put_le<std::uint32_t>(buf, kCheckpointVersion);
  put_le<std::uint64_t>(buf, manifest_text.size());
  buf += manifest_text;
  put_le<std::uint64_t>(buf, data.size());
  buf += data;
  put_le<std::uint64_t>(buf, fnv1a(data, fnv1a(manifest_text)));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("checkpoint write failed");
}

CheckpointContents read_checkpoint(std::istream& in, const std::string& source) {
  Reader r(in, source);
  if (r.take(kMagic.size()) != kMagic) r.fail("not a checkpoint file (bad magic)");
  const auto version = r.take_le<std::uint32_t>();
  if (version != kCheckpointVersion) {
    r.fail("unsupported checkpoint version " + std::to_string(version));
  }
  const auto manifest_len = r.take_le<std::uint64_t>();
  if (manifest_len > (1ULL << 34)) r.fail("implausible manifest length");
  const std::string manifest_text = r.take(manifest_len);
  const auto data_len = r.take_le<std::uint64_t>();
  if (data_len > (1ULL << 40)) r.fail("implausible data length");
  const std::string data = r.take(data_len);
  const auto checksum = r.take_le<std::uint64_t>();
  if (checksum != fnv1a(data, fnv1a(manifest_text))) r.fail("checksum mismatch");

  CheckpointContents out;
  try {
    const json manifest = json::parse(manifest_text);
    out.metadata_json = manifest.at("metadata").dump();
    for (const auto& t : manifest.at("tensors")) {
      const auto shape = t.at("shape").get<std::vector<std::size_t>>();
      const auto count = t.at("count").get<std::size_t>();
      const auto offset = t.at("offset").get<std::size_t>();
      if (offset + 3 * count * 8 > data.size()) r.fail("tensor block out of range");
      auto block = [&](std::size_t which) {
        std::vector<double> v(count);
        const std::string_view bytes(data.data() + offset + which * count * 8, count * 8);
        for (std::size_t i = 0; i < count; ++i) {
          v[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes.substr(i * 8, 8)));
        }
        return Array(shape, std::move(v));
      };
      const ParamId id = out.params.add(t.at("name").get<std::string>(), block(0));
      Parameter& p = out.params[id];
      p.adam_m = block(1);
      p.adam_v = block(2);
      p.step_count = t.at("step_count").get<std::int64_t>();
      p.frozen_rows = t.at("frozen_rows").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    r.fail(std::string("corrupted manifest: ") + e.what());
  } catch (const ShapeError& e) {
    r.fail(std::string("corrupted manifest: ") + e.what());
  }
  return out;
}

void save_checkpoint_file(const std::filesystem::path& path, const ParameterStore& params,
                          std::string_view metadata_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  write_checkpoint(out, params, metadata_json);
}

CheckpointContents load_checkpoint_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace refresh::nn
