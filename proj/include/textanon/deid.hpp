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

// Mask producers: model-guided K-anonymity search (greedy and beam) and the
// unsupervised lexical, IDF and named-entity baselines.

#ifndef TEXTANON_DEID_HPP_
#define TEXTANON_DEID_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/encoder.hpp"

namespace textanon {

struct RedactionResult {
  MaskVector mask;
  std::string method;
  std::optional<std::size_t> k;  // search methods only
  std::size_t steps = 0;
  // Rank of the true profile and its probability under the guiding model
  // after masking; zero for baselines run without a model.
  std::size_t final_rank = 0;
  double final_probability = 0.0;
  bool success = false;
  // Positions in the order the greedy search masked them.
  std::vector<std::size_t> order;
};

struct SearchOptions {
  std::size_t k = 1;
  // Stopwords are skipped as candidates unless this is set.
  bool include_stopwords = false;
};

// Positions the search may mask: unmasked, non-punctuation, not a "<mask>"
// literal and, unless included, not a stopword.
std::vector<std::size_t> CandidatePositions(const Document& document,
                                            const MaskVector& mask,
                                            bool include_stopwords);

// Repeatedly masks the candidate whose masking gives the lowest p(ŷ | x, z)
// (lowest index on ties) until the true profile ranks below K. The stopping
// rule is checked before the first step, so an already anonymous document
// keeps an empty mask. Running out of candidates yields success = false.
RedactionResult GreedyDeidentify(const ReidModel& model, const Document& document,
                                 std::size_t true_index,
                                 const SearchOptions& options);

// Keeps the `width` lowest-p(ŷ) masks at each depth and returns the first kept
// state, in beam order, whose true-profile rank exceeds K. Width 1 reproduces
// GreedyDeidentify.
RedactionResult BeamDeidentify(const ReidModel& model, const Document& document,
                               std::size_t true_index, std::size_t width,
                               const SearchOptions& options);

// Masks every non-punctuation token equal (case-folded) to a token of the
// linearized profile's keys or values.
RedactionResult LexicalBaseline(const Document& document, const Profile& profile);

// Masks every non-punctuation token with idf >= threshold.
RedactionResult IdfBaseline(const Document& document, const IdfTable& idf,
                            double threshold);

// Lexical overlap first, then remaining tokens in descending idf down to the
// threshold. `removal_order`, when non-null, receives the positions added
// after the lexical pass in the order they were masked.
RedactionResult IdfTableAwareBaseline(const Document& document,
                                      const Profile& profile, const IdfTable& idf,
                                      double threshold,
                                      std::vector<std::size_t>* removal_order = nullptr);

enum class EntityTag { kOutside, kPerson, kOrganization, kLocation, kMisc };

EntityTag ParseEntityTag(std::string_view tag);
const char* EntityTagName(EntityTag tag);

// Capitalized tokens that do not open a sentence, plus gazetteer hits
// anywhere. Gazetteer class decides the tag; other capitalized tokens are MISC.
std::vector<EntityTag> RuleTagDocument(const Document& document);

// Masks every token tagged PER/ORG/LOC/MISC. Throws on length mismatch.
RedactionResult NerBaseline(const Document& document,
                            const std::vector<EntityTag>& tags);

// Adds final_rank / final_probability / success (rank > k) computed under
// `model`, re-scoring the mask from scratch.
void ScoreRedaction(const ReidModel& model, const Document& document,
                    std::size_t true_index, std::size_t k,
                    RedactionResult& result);

enum class RedactionMethod { kNnGreedy, kNnBeam, kLexical, kIdf, kIdfTable, kNer };

RedactionMethod ParseRedactionMethod(std::string_view name);
const char* RedactionMethodName(RedactionMethod method);
bool IsSearchMethod(RedactionMethod method);

struct MethodConfig {
  RedactionMethod method = RedactionMethod::kNnGreedy;
  std::size_t k = 1;
  std::size_t beam_width = 4;
  double idf_threshold = 0.0;
  bool include_stopwords = false;
};

// Dispatches one record to the configured method. Search methods need a
// guiding model, IDF methods an IdfTable; NER uses `tags` when given (keyed by
// record id) and the rule tagger otherwise.
class Redactor {
 public:
  Redactor(const Corpus& corpus, const ReidModel* guide, const IdfTable* idf,
           const std::unordered_map<std::string, std::vector<EntityTag>>* tags =
               nullptr);

  RedactionResult Redact(const AlignedRecord& record,
                         const MethodConfig& config) const;

 private:
  const Corpus& corpus_;
  const ReidModel* guide_;
  const IdfTable* idf_;
  const std::unordered_map<std::string, std::vector<EntityTag>>* tags_;
};

}  // namespace textanon

#endif  // TEXTANON_DEID_HPP_
