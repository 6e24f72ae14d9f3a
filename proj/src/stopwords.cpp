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

#include <fstream>
#include <string>

#include "textanon/corpus.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

constexpr const char* kEnglishStopwords[] = {
    "a",       "about",   "above",   "after",    "again",    "against",
    "all",     "am",      "an",      "and",      "any",      "are",
    "as",      "at",      "be",      "because",  "been",     "before",
    "being",   "below",   "between", "both",     "but",      "by",
    "can",     "could",   "did",     "do",       "does",     "doing",
    "down",    "during",  "each",    "few",      "for",      "from",
    "further", "had",     "has",     "have",     "having",   "he",
    "her",     "here",    "hers",    "herself",  "him",      "himself",
    "his",     "how",     "i",       "if",       "in",       "into",
    "is",      "it",      "its",     "itself",   "just",     "me",
    "more",    "most",    "my",      "myself",   "no",       "nor",
    "not",     "now",     "of",      "off",      "on",       "once",
    "only",    "or",      "other",   "our",      "ours",     "ourselves",
    "out",     "over",    "own",     "same",     "she",      "should",
    "so",      "some",    "such",    "than",     "that",     "the",
    "their",   "theirs",  "them",    "themselves", "then",   "there",
    "these",   "they",    "this",    "those",    "through",  "to",
    "too",     "under",   "until",   "up",       "very",     "was",
    "we",      "were",    "what",    "when",     "where",    "which",
    "while",   "who",     "whom",    "why",      "will",     "with",
    "would",   "you",     "your",    "yours",    "yourself", "yourselves",
    "also",    "may",     "might",   "must",     "shall",    "upon",
    "within",  "without", "among",   "across",   "along",    "around",
    "via",     "yet",     "ever",    "every",    "either",   "neither",
    "whether", "whose",   "onto",    "unto",     "thus",     "hence",
    "s",       "t",
};

}  // namespace

const StopwordList& StopwordList::English() {
  static const StopwordList* const kList = [] {
    std::unordered_set<std::string> words;
    for (const char* w : kEnglishStopwords) words.emplace(w);
    return new StopwordList(std::move(words));
  }();
  return *kList;
}

StopwordList StopwordList::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open stopword file: " + path.string());
  }
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    words.insert(Normalize(line.substr(start)));
  }
  return StopwordList(std::move(words));
}

bool StopwordList::Contains(std::string_view normalized) const {
  return words_.find(std::string(normalized)) != words_.end();
}

}  // namespace textanon
