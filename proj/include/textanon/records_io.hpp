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

// JSONL formats for redacted corpora, per-document redaction sidecars and
// external entity-tag files.

#ifndef TEXTANON_RECORDS_IO_HPP_
#define TEXTANON_RECORDS_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/deid.hpp"

namespace textanon {

struct RedactedRecord {
  std::string id;
  std::string document;  // rendered under the chosen mask mode
  std::vector<std::pair<std::string, std::string>> profile;
  MaskVector mask;
  std::string method;
  std::size_t k = 0;  // 0 for methods without a K
};

// {"id", "document", "profile", "mask", "method", "k"}
std::string RedactedRecordLine(const Profile& profile, const AlignedRecord& record,
                               const RedactionResult& result, MaskMode mode);
std::vector<RedactedRecord> ParseRedactedCorpus(std::string_view jsonl);
std::vector<RedactedRecord> LoadRedactedCorpus(const std::filesystem::path& path);

// {"id", "method", "k", "steps", "final_rank", "final_probability", "success",
//  "mask"}
std::string SidecarLine(const std::string& id, const RedactionResult& result);
std::vector<std::pair<std::string, RedactionResult>> ParseSidecar(
    std::string_view jsonl);

// {"id": str, "tags": ["O", "PER", "B-LOC", ...]}
std::unordered_map<std::string, std::vector<EntityTag>> LoadTagFile(
    const std::filesystem::path& path);
std::unordered_map<std::string, std::vector<EntityTag>> ParseTagFile(
    std::string_view jsonl);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace textanon

#endif  // TEXTANON_RECORDS_IO_HPP_
