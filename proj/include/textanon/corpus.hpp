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

// Corpus ingestion: tokenization, aligned document/profile records,
// vocabulary, stopwords, IDF statistics and mask rendering.

#ifndef TEXTANON_CORPUS_HPP_
#define TEXTANON_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace textanon {

inline constexpr std::string_view kMaskLiteral = "<mask>";
inline constexpr std::size_t kMaxSequenceLength = 128;
inline constexpr std::size_t kDefaultHashBuckets = std::size_t{1} << 18;

struct Token {
  std::string surface;
  std::string normalized;
  bool is_stopword = false;
  bool is_punctuation = false;
};

struct Document {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Document& other) const;
};

// Binary mask over document positions; 1 hides the word.
class MaskVector {
 public:
  MaskVector() = default;
  explicit MaskVector(std::size_t length) : bits_(length, 0) {}
  explicit MaskVector(std::vector<std::uint8_t> bits);

  static MaskVector Ones(std::size_t length);

  std::size_t size() const { return bits_.size(); }
  std::size_t count() const;
  bool test(std::size_t i) const { return bits_.at(i) != 0; }
  void set(std::size_t i, bool value = true) { bits_.at(i) = value ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // True when every bit set here is also set in `other`.
  bool IsSubsetOf(const MaskVector& other) const;

  bool operator==(const MaskVector& other) const = default;
  auto operator<=>(const MaskVector& other) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class StopwordList {
 public:
  // Built-in English list.
  static const StopwordList& English();
  // One word per line; blank lines and lines starting with '#' ignored.
  static StopwordList FromFile(const std::filesystem::path& path);

  explicit StopwordList(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  bool Contains(std::string_view normalized) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Lowercases ASCII letters; other bytes pass through.
std::string Normalize(std::string_view surface);

// Whitespace split with every punctuation character isolated as its own
// token. The literal "<mask>" is kept as a single token. Throws on input with
// no tokens.
Document Tokenize(std::string_view text,
                  const StopwordList& stopwords = StopwordList::English());

struct Profile {
  std::string id;
  std::vector<std::pair<std::string, std::string>> entries;
};

struct AlignedRecord {
  std::string id;
  std::string text;
  Document document;
  std::size_t profile_index = 0;
};

// "key : value | key : value ..." with trailing entries dropped until the
// sequence fits `max_length`. A single entry that alone exceeds the limit is
// cut at `max_length` tokens.
Document LinearizeProfile(const Profile& profile,
                          std::size_t max_length = kMaxSequenceLength,
                          const StopwordList& stopwords = StopwordList::English());

class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<AlignedRecord> records, std::vector<Profile> profiles);

  const std::vector<AlignedRecord>& records() const { return records_; }
  const std::vector<Profile>& profiles() const { return profiles_; }
  // Linearized profiles, same order as profiles().
  const std::vector<Document>& linearized_profiles() const {
    return linearized_;
  }

  const AlignedRecord* FindRecord(std::string_view id) const;
  // Throws kNotFound when the id is not in the profile store.
  std::size_t ProfileIndex(std::string_view id) const;

 private:
  std::vector<AlignedRecord> records_;
  std::vector<Profile> profiles_;
  std::vector<Document> linearized_;
  std::unordered_map<std::string, std::size_t> profile_index_;
  std::unordered_map<std::string, std::size_t> record_index_;
};

// JSONL: {"id": str, "document": str, "profile": [[key, value], ...]}.
// Errors carry the 1-based line number.
Corpus LoadCorpus(const std::filesystem::path& path,
                  const StopwordList& stopwords = StopwordList::English());
Corpus ParseCorpus(std::string_view jsonl,
                   const StopwordList& stopwords = StopwordList::English());

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::size_t hash_buckets);

  // Every normalized term of the corpus documents and linearized profiles,
  // sorted.
  static Vocabulary Build(const Corpus& corpus, std::size_t hash_buckets);

  std::size_t term_count() const { return terms_.size(); }
  std::size_t hash_buckets() const { return hash_buckets_; }
  std::size_t mask_index() const { return terms_.size() + hash_buckets_; }
  std::size_t pad_index() const { return mask_index() + 1; }
  std::size_t rows() const { return pad_index() + 1; }
  const std::vector<std::string>& terms() const { return terms_; }

  // Term row, or a hash bucket row for unknown terms.
  std::size_t IndexOf(std::string_view normalized) const;
  bool Contains(std::string_view normalized) const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t hash_buckets_ = 0;
};

class IdfTable {
 public:
  IdfTable() = default;
  // Counts over the given documents; each document counts a term once.
  static IdfTable Build(const std::vector<const Document*>& documents);
  // Documents and linearized profiles of the corpus.
  static IdfTable FromCorpus(const Corpus& corpus);

  std::size_t document_count() const { return document_count_; }
  std::size_t DocumentFrequency(std::string_view normalized) const;
  // ln((1 + D) / (1 + df)); unseen terms get the df = 0 value.
  double Idf(std::string_view normalized) const;
  const std::unordered_map<std::string, std::size_t>& frequencies() const {
    return df_;
  }

 private:
  std::size_t document_count_ = 0;
  std::unordered_map<std::string, std::size_t> df_;
};

enum class MaskMode { kReplace, kDelete, kCollapse };

MaskMode ParseMaskMode(std::string_view name);
const char* MaskModeName(MaskMode mode);

// Renders the document with masked words replaced, removed, or collapsed into
// one "<mask>" per run. Punctuation attaches to its neighbour.
std::string ApplyMask(const Document& document, const MaskVector& mask,
                      MaskMode mode);

}  // namespace textanon

#endif  // TEXTANON_CORPUS_HPP_
