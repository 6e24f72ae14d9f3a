// Copyright 2026 The Textanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Checkpoint layout:
//
//   <JSON header>\n<float32 LE array 0><float32 LE array 1>...
//
// The header records the version, shapes, vocabulary and, per array, its
// name, element count and byte offset from the first byte after the newline.

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "textanon/encoder.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

struct ArraySlot {
  const char* name;
  std::vector<float> ModelParams::*member;
};

constexpr ArraySlot kArrays[] = {
    {"embeddings", &ModelParams::embeddings},
    {"doc_projection", &ModelParams::doc_projection},
    {"profile_projection", &ModelParams::profile_projection},
};

void AppendFloats(std::string& out, const std::vector<float>& values) {
  const std::size_t start = out.size();
  out.resize(start + values.size() * 4);
  char* dst = out.data() + start;
  for (float v : values) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) *dst++ = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
}

std::vector<float> ReadFloats(std::string_view data, std::size_t offset,
                              std::size_t count) {
  if (offset > data.size() || count > (data.size() - offset) / 4) {
    throw Error(ErrorCode::kParse, "checkpoint array exceeds file size");
  }
  std::vector<float> out(count);
  const auto* src = reinterpret_cast<const unsigned char*>(data.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= std::uint32_t{src[4 * i + b]} << (8 * b);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

}  // namespace

std::string SerializeCheckpoint(const ModelParams& params) {
  params.Validate();
  nlohmann::json header;
  header["version"] = params.version;
  header["dim"] = params.dim;
  header["input_dim"] = params.input_dim;
  header["label_smoothing"] = params.label_smoothing;
  header["hash_buckets"] = params.vocab.hash_buckets();
  header["vocabulary"] = params.vocab.terms();
  nlohmann::json arrays = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& slot : kArrays) {
    const auto& values = params.*(slot.member);
    arrays.push_back({{"name", slot.name},
                      {"dtype", "float32"},
                      {"count", values.size()},
                      {"offset", offset}});
    offset += values.size() * 4;
  }
  header["arrays"] = arrays;

  std::string out = header.dump();
  out += '\n';
  out.reserve(out.size() + offset);
  for (const auto& slot : kArrays) AppendFloats(out, params.*(slot.member));
  return out;
}

void SaveCheckpoint(const ModelParams& params,
                    const std::filesystem::path& path) {
  const std::string bytes = SerializeCheckpoint(params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write checkpoint: " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "short write to checkpoint: " + path.string());
  }
}

ModelParams DeserializeCheckpoint(std::string_view bytes) {
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw Error(ErrorCode::kParse, "checkpoint has no header line");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("checkpoint header is not JSON: ") + e.what());
  }
  if (!header.is_object() || !header.contains("version") ||
      !header["version"].is_string()) {
    throw Error(ErrorCode::kParse, "checkpoint header has no version");
  }
  const auto version = header["version"].get<std::string>();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint version '" + version + "' does not match '" +
                    std::string(kCheckpointVersion) + "'");
  }

  ModelParams p;
  try {
    p.version = version;
    p.dim = header.at("dim").get<std::size_t>();
    p.input_dim = header.at("input_dim").get<std::size_t>();
    p.label_smoothing = header.at("label_smoothing").get<double>();
    p.vocab = Vocabulary(header.at("vocabulary").get<std::vector<std::string>>(),
                         header.at("hash_buckets").get<std::size_t>());
    const std::string_view data = bytes.substr(newline + 1);
    for (const auto& slot : kArrays) {
      const nlohmann::json* entry = nullptr;
      for (const auto& a : header.at("arrays")) {
        if (a.at("name").get<std::string>() == slot.name) entry = &a;
      }
      if (entry == nullptr) {
        throw Error(ErrorCode::kParse,
                    std::string("checkpoint is missing array ") + slot.name);
      }
      if (entry->value("dtype", "float32") != "float32") {
        throw Error(ErrorCode::kParse, "unsupported checkpoint dtype");
      }
      p.*(slot.member) = ReadFloats(data, entry->at("offset").get<std::size_t>(),
                                    entry->at("count").get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed checkpoint header: ") + e.what());
  }
  p.Validate();
  return p;
}

ModelParams LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open checkpoint: " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return DeserializeCheckpoint(buf.str());
}

}  // namespace textanon
