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

// Rule-based entity tagger used when no external tag file is supplied.

#include <string>
#include <unordered_map>

#include "textanon/deid.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

const std::unordered_map<std::string, EntityTag>& Gazetteer() {
  static const auto* const kTable = [] {
    auto* m = new std::unordered_map<std::string, EntityTag>;
    for (const char* w :
         {"london", "paris", "berlin", "madrid", "rome", "vienna", "dublin",
          "edinburgh", "glasgow", "manchester", "liverpool", "birmingham",
          "boston", "chicago", "toronto", "sydney", "melbourne", "tokyo",
          "moscow", "prague", "lisbon", "oslo", "stockholm", "helsinki",
          "copenhagen", "amsterdam", "brussels", "athens", "warsaw", "budapest",
          "england", "scotland", "wales", "ireland", "france", "germany",
          "spain", "italy", "canada", "australia", "japan", "russia", "india",
          "china", "brazil", "mexico", "sweden", "norway", "finland", "denmark",
          "poland", "austria", "portugal", "greece", "america", "europe",
          "africa", "asia", "california", "texas", "ohio", "york", "jersey"}) {
      m->emplace(w, EntityTag::kLocation);
    }
    for (const char* w :
         {"chelsea", "arsenal", "everton", "juventus", "barcelona", "ajax",
          "celtic", "rangers", "university", "college", "institute", "academy",
          "corporation", "company", "bbc", "nasa", "unesco", "parliament",
          "congress", "senate", "army", "navy"}) {
      m->emplace(w, EntityTag::kOrganization);
    }
    for (const char* w :
         {"john", "james", "robert", "michael", "william", "david", "richard",
          "thomas", "charles", "george", "mary", "patricia", "jennifer",
          "linda", "elizabeth", "barbara", "susan", "margaret", "sarah",
          "anna", "peter", "paul", "mark", "laura", "emma", "alice"}) {
      m->emplace(w, EntityTag::kPerson);
    }
    return m;
  }();
  return *kTable;
}

bool IsCapitalized(const std::string& surface) {
  return !surface.empty() && surface[0] >= 'A' && surface[0] <= 'Z';
}

bool EndsSentence(const std::string& surface) {
  return surface == "." || surface == "!" || surface == "?";
}

}  // namespace

EntityTag ParseEntityTag(std::string_view tag) {
  std::string t(tag);
  if (t.size() > 2 && (t[0] == 'B' || t[0] == 'I' || t[0] == 'E' || t[0] == 'S') &&
      t[1] == '-') {
    t = t.substr(2);
  }
  if (t == "O" || t.empty()) return EntityTag::kOutside;
  if (t == "PER") return EntityTag::kPerson;
  if (t == "ORG" || t == "OR") return EntityTag::kOrganization;
  if (t == "LOC") return EntityTag::kLocation;
  if (t == "MISC") return EntityTag::kMisc;
  throw Error(ErrorCode::kParse, "unknown entity tag '" + std::string(tag) + "'");
}

const char* EntityTagName(EntityTag tag) {
  switch (tag) {
    case EntityTag::kOutside:
      return "O";
    case EntityTag::kPerson:
      return "PER";
    case EntityTag::kOrganization:
      return "ORG";
    case EntityTag::kLocation:
      return "LOC";
    case EntityTag::kMisc:
      return "MISC";
  }
  return "O";
}

std::vector<EntityTag> RuleTagDocument(const Document& document) {
  const auto& gazetteer = Gazetteer();
  std::vector<EntityTag> tags(document.size(), EntityTag::kOutside);
  bool sentence_start = true;
  for (std::size_t n = 0; n < document.size(); ++n) {
    const Token& t = document.tokens[n];
    if (t.is_punctuation) {
      if (EndsSentence(t.surface)) sentence_start = true;
      continue;
    }
    auto hit = gazetteer.find(t.normalized);
    if (hit != gazetteer.end() && IsCapitalized(t.surface)) {
      tags[n] = hit->second;
    } else if (!sentence_start && IsCapitalized(t.surface) && t.surface != "I" &&
               !t.is_stopword) {
      tags[n] = EntityTag::kMisc;
    }
    sentence_start = false;
  }
  return tags;
}

}  // namespace textanon
