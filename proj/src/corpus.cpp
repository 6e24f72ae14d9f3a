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

#include "textanon/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ASCII punctuation only; bytes >= 0x80 belong to words.
bool IsPunct(unsigned char c) {
  return c < 0x80 && !IsSpace(c) && !std::isalnum(c);
}

bool HasLetterOrDigit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return c >= 0x80 || std::isalnum(c);
  });
}

Token MakeToken(std::string surface, const StopwordList& stopwords) {
  Token t;
  t.normalized = Normalize(surface);
  t.is_punctuation = !HasLetterOrDigit(surface) && surface != kMaskLiteral;
  t.is_stopword = !t.is_punctuation && stopwords.Contains(t.normalized);
  t.surface = std::move(surface);
  return t;
}

bool NoSpaceBefore(std::string_view s) {
  return s.size() == 1 && std::string_view(",.;:!?)]}%").find(s[0]) !=
                              std::string_view::npos;
}

bool NoSpaceAfter(std::string_view s) {
  return s.size() == 1 && std::string_view("([{").find(s[0]) !=
                              std::string_view::npos;
}

class TextBuilder {
 public:
  void Append(std::string_view token) {
    if (!out_.empty() && !glue_next_ && !NoSpaceBefore(token)) out_ += ' ';
    out_ += token;
    glue_next_ = NoSpaceAfter(token);
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
  bool glue_next_ = false;
};

// FNV-1a, stable across platforms.
std::uint64_t HashTerm(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

bool Document::operator==(const Document& other) const {
  if (tokens.size() != other.tokens.size()) return false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].surface != other.tokens[i].surface) return false;
  }
  return true;
}

MaskVector::MaskVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

MaskVector MaskVector::Ones(std::size_t length) {
  return MaskVector(std::vector<std::uint8_t>(length, 1));
}

std::size_t MaskVector::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool MaskVector::IsSubsetOf(const MaskVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

std::string Normalize(std::string_view surface) {
  std::string out(surface);
  for (auto& ch : out) {
    auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') ch = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Document Tokenize(std::string_view text, const StopwordList& stopwords) {
  Document doc;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      doc.tokens.push_back(MakeToken(std::move(word), stopwords));
      word.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (text.substr(i, kMaskLiteral.size()) == kMaskLiteral) {
      flush();
      doc.tokens.push_back(MakeToken(std::string(kMaskLiteral), stopwords));
      i += kMaskLiteral.size();
    } else if (IsSpace(c)) {
      flush();
      ++i;
    } else if (IsPunct(c)) {
      flush();
      doc.tokens.push_back(MakeToken(std::string(1, text[i]), stopwords));
      ++i;
    } else {
      word += text[i];
      ++i;
    }
  }
  flush();
  if (doc.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "text contains no tokens");
  }
  return doc;
}

Document LinearizeProfile(const Profile& profile, std::size_t max_length,
                          const StopwordList& stopwords) {
  if (profile.entries.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "profile '" + profile.id + "' has no entries");
  }
  Document out;
  for (std::size_t e = 0; e < profile.entries.size(); ++e) {
    std::vector<Token> piece;
    if (e > 0) piece.push_back(MakeToken("|", stopwords));
    const auto& [key, value] = profile.entries[e];
    for (auto& t : Tokenize(key, stopwords).tokens) piece.push_back(t);
    piece.push_back(MakeToken(":", stopwords));
    if (value.find_first_not_of(" \t\r\n") != std::string::npos) {
      for (auto& t : Tokenize(value, stopwords).tokens) piece.push_back(t);
    }
    if (out.tokens.size() + piece.size() > max_length) {
      if (e == 0) {
        piece.resize(max_length);
        out.tokens = std::move(piece);
      }
      break;
    }
    out.tokens.insert(out.tokens.end(), piece.begin(), piece.end());
  }
  return out;
}

Corpus::Corpus(std::vector<AlignedRecord> records, std::vector<Profile> profiles)
    : records_(std::move(records)), profiles_(std::move(profiles)) {
  linearized_.reserve(profiles_.size());
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    if (!profile_index_.emplace(profiles_[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate profile id '" + profiles_[i].id + "'");
    }
    linearized_.push_back(LinearizeProfile(profiles_[i]));
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].profile_index >= profiles_.size()) {
      throw Error(ErrorCode::kNotFound,
                  "record '" + records_[i].id + "' has no profile");
    }
    record_index_.emplace(records_[i].id, i);
  }
}

const AlignedRecord* Corpus::FindRecord(std::string_view id) const {
  auto it = record_index_.find(std::string(id));
  return it == record_index_.end() ? nullptr : &records_[it->second];
}

std::size_t Corpus::ProfileIndex(std::string_view id) const {
  auto it = profile_index_.find(std::string(id));
  if (it == profile_index_.end()) {
    throw Error(ErrorCode::kNotFound,
                "profile id '" + std::string(id) + "' not in profile store");
  }
  return it->second;
}

Corpus ParseCorpus(std::string_view jsonl, const StopwordList& stopwords) {
  std::vector<AlignedRecord> records;
  std::vector<Profile> profiles;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == jsonl.size()) break;
      continue;
    }
    auto fail = [&](ErrorCode code, const std::string& what) {
      return Error(code, "line " + std::to_string(line_no) + ": " + what);
    };
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw fail(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("document") || !obj["document"].is_string() ||
        !obj.contains("profile") || !obj["profile"].is_array()) {
      throw fail(ErrorCode::kParse,
                 "expected {\"id\": str, \"document\": str, \"profile\": "
                 "[[key, value], ...]}");
    }
    Profile profile;
    profile.id = obj["id"].get<std::string>();
    std::set<std::string> keys;
    for (const auto& entry : obj["profile"]) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_string()) {
        throw fail(ErrorCode::kParse, "profile entries must be [key, value]");
      }
      auto key = entry[0].get<std::string>();
      if (!keys.insert(key).second) {
        throw fail(ErrorCode::kParse, "duplicate profile key '" + key + "'");
      }
      profile.entries.emplace_back(std::move(key), entry[1].get<std::string>());
    }
    if (profile.entries.empty()) {
      throw fail(ErrorCode::kParse, "profile has no entries");
    }
    if (!seen.emplace(profile.id, line_no).second) {
      throw fail(ErrorCode::kDuplicateId,
                 "duplicate id '" + profile.id + "' (first seen on line " +
                     std::to_string(seen[profile.id]) + ")");
    }
    AlignedRecord record;
    record.id = profile.id;
    record.text = obj["document"].get<std::string>();
    try {
      record.document = Tokenize(record.text, stopwords);
    } catch (const Error& e) {
      throw fail(ErrorCode::kParse, std::string("document: ") + e.what());
    }
    record.profile_index = profiles.size();
    records.push_back(std::move(record));
    profiles.push_back(std::move(profile));
    if (end == jsonl.size()) break;
  }
  return Corpus(std::move(records), std::move(profiles));
}

Corpus LoadCorpus(const std::filesystem::path& path,
                  const StopwordList& stopwords) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open corpus file: " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseCorpus(buf.str(), stopwords);
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::size_t hash_buckets)
    : terms_(std::move(terms)), hash_buckets_(hash_buckets) {
  if (hash_buckets_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "hash bucket count must be > 0");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate vocabulary term '" + terms_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::Build(const Corpus& corpus, std::size_t hash_buckets) {
  std::set<std::string> terms;
  for (const auto& r : corpus.records()) {
    for (const auto& t : r.document.tokens) terms.insert(t.normalized);
  }
  for (const auto& d : corpus.linearized_profiles()) {
    for (const auto& t : d.tokens) terms.insert(t.normalized);
  }
  // The mask literal always maps to the mask row, never to a term row.
  terms.erase(std::string(kMaskLiteral));
  return Vocabulary(std::vector<std::string>(terms.begin(), terms.end()),
                    hash_buckets);
}

std::size_t Vocabulary::IndexOf(std::string_view normalized) const {
  if (normalized == kMaskLiteral) return mask_index();
  auto it = index_.find(std::string(normalized));
  if (it != index_.end()) return it->second;
  return terms_.size() + HashTerm(normalized) % hash_buckets_;
}

bool Vocabulary::Contains(std::string_view normalized) const {
  return index_.count(std::string(normalized)) > 0;
}

IdfTable IdfTable::Build(const std::vector<const Document*>& documents) {
  IdfTable table;
  table.document_count_ = documents.size();
  for (const Document* doc : documents) {
    std::set<std::string_view> unique;
    for (const auto& t : doc->tokens) unique.insert(t.normalized);
    for (auto term : unique) ++table.df_[std::string(term)];
  }
  return table;
}

IdfTable IdfTable::FromCorpus(const Corpus& corpus) {
  std::vector<const Document*> docs;
  for (const auto& r : corpus.records()) docs.push_back(&r.document);
  for (const auto& d : corpus.linearized_profiles()) docs.push_back(&d);
  return Build(docs);
}

std::size_t IdfTable::DocumentFrequency(std::string_view normalized) const {
  auto it = df_.find(std::string(normalized));
  return it == df_.end() ? 0 : it->second;
}

double IdfTable::Idf(std::string_view normalized) const {
  return std::log((1.0 + static_cast<double>(document_count_)) /
                  (1.0 + static_cast<double>(DocumentFrequency(normalized))));
}

MaskMode ParseMaskMode(std::string_view name) {
  if (name == "replace") return MaskMode::kReplace;
  if (name == "delete") return MaskMode::kDelete;
  if (name == "collapse") return MaskMode::kCollapse;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mask mode '" + std::string(name) + "'");
}

const char* MaskModeName(MaskMode mode) {
  switch (mode) {
    case MaskMode::kReplace:
      return "replace";
    case MaskMode::kDelete:
      return "delete";
    case MaskMode::kCollapse:
      return "collapse";
  }
  return "replace";
}

std::string ApplyMask(const Document& document, const MaskVector& mask,
                      MaskMode mode) {
  if (mask.size() != document.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask length " + std::to_string(mask.size()) +
                    " does not match document length " +
                    std::to_string(document.size()));
  }
  TextBuilder out;
  bool in_run = false;
  for (std::size_t i = 0; i < document.size(); ++i) {
    if (!mask.test(i)) {
      out.Append(document.tokens[i].surface);
      in_run = false;
      continue;
    }
    switch (mode) {
      case MaskMode::kReplace:
        out.Append(kMaskLiteral);
        break;
      case MaskMode::kDelete:
        break;
      case MaskMode::kCollapse:
        if (!in_run) out.Append(kMaskLiteral);
        break;
    }
    in_run = true;
  }
  return out.Take();
}

}  // namespace textanon
