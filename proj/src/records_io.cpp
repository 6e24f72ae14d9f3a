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

#include "textanon/records_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

using ordered_json = nlohmann::ordered_json;

void ForEachLine(std::string_view jsonl,
                 const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
      fn(line_no, obj);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

ordered_json MaskJson(const MaskVector& mask) {
  auto arr = ordered_json::array();
  for (auto b : mask.bits()) arr.push_back(static_cast<int>(b));
  return arr;
}

MaskVector MaskFromJson(const nlohmann::json& arr) {
  std::vector<std::uint8_t> bits;
  for (const auto& v : arr) {
    const int b = v.get<int>();
    if (b != 0 && b != 1) {
      throw Error(ErrorCode::kParse, "mask entries must be 0 or 1");
    }
    bits.push_back(static_cast<std::uint8_t>(b));
  }
  return MaskVector(std::move(bits));
}

}  // namespace

std::string RedactedRecordLine(const Profile& profile, const AlignedRecord& record,
                               const RedactionResult& result, MaskMode mode) {
  ordered_json j;
  j["id"] = record.id;
  j["document"] = ApplyMask(record.document, result.mask, mode);
  auto entries = ordered_json::array();
  for (const auto& [k, v] : profile.entries) entries.push_back({k, v});
  j["profile"] = std::move(entries);
  j["mask"] = MaskJson(result.mask);
  j["method"] = result.method;
  j["k"] = result.k.value_or(0);
  return j.dump();
}

std::vector<RedactedRecord> ParseRedactedCorpus(std::string_view jsonl) {
  std::vector<RedactedRecord> out;
  ForEachLine(jsonl, [&](std::size_t, const nlohmann::json& j) {
    RedactedRecord r;
    r.id = j.at("id").get<std::string>();
    r.document = j.at("document").get<std::string>();
    for (const auto& e : j.at("profile")) {
      r.profile.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    r.mask = MaskFromJson(j.at("mask"));
    r.method = j.at("method").get<std::string>();
    r.k = j.at("k").get<std::size_t>();
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<RedactedRecord> LoadRedactedCorpus(const std::filesystem::path& path) {
  return ParseRedactedCorpus(ReadFile(path));
}

std::string SidecarLine(const std::string& id, const RedactionResult& result) {
  ordered_json j;
  j["id"] = id;
  j["method"] = result.method;
  if (result.k) {
    j["k"] = *result.k;
  } else {
    j["k"] = nullptr;
  }
  j["steps"] = result.steps;
  j["final_rank"] = result.final_rank;
  j["final_probability"] = result.final_probability;
  j["success"] = result.success;
  j["mask"] = MaskJson(result.mask);
  return j.dump();
}

std::vector<std::pair<std::string, RedactionResult>> ParseSidecar(
    std::string_view jsonl) {
  std::vector<std::pair<std::string, RedactionResult>> out;
  ForEachLine(jsonl, [&](std::size_t, const nlohmann::json& j) {
    RedactionResult r;
    r.method = j.at("method").get<std::string>();
    if (!j.at("k").is_null()) r.k = j["k"].get<std::size_t>();
    r.steps = j.at("steps").get<std::size_t>();
    r.final_rank = j.at("final_rank").get<std::size_t>();
    r.final_probability = j.at("final_probability").get<double>();
    r.success = j.at("success").get<bool>();
    r.mask = MaskFromJson(j.at("mask"));
    out.emplace_back(j.at("id").get<std::string>(), std::move(r));
  });
  return out;
}

std::unordered_map<std::string, std::vector<EntityTag>> ParseTagFile(
    std::string_view jsonl) {
  std::unordered_map<std::string, std::vector<EntityTag>> out;
  ForEachLine(jsonl, [&](std::size_t line_no, const nlohmann::json& j) {
    std::vector<EntityTag> tags;
    for (const auto& t : j.at("tags")) tags.push_back(ParseEntityTag(t.get<std::string>()));
    if (!out.emplace(j.at("id").get<std::string>(), std::move(tags)).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id in tag file");
    }
  });
  return out;
}

std::unordered_map<std::string, std::vector<EntityTag>> LoadTagFile(
    const std::filesystem::path& path) {
  return ParseTagFile(ReadFile(path));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace textanon
