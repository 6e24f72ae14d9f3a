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

#include "textanon/deid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_set>

#include "textanon/error.hpp"

namespace textanon {
namespace {

void CheckTarget(const ReidModel& model, std::size_t true_index,
                 const SearchOptions& options) {
  if (true_index >= model.profile_count()) {
    throw Error(ErrorCode::kNotFound, "true profile is not in the profile store");
  }
  if (options.k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  }
}

RedactionResult Finish(std::string method, std::size_t k, MaskVector mask,
                       const Distribution& dist, std::size_t true_index,
                       bool success) {
  RedactionResult r;
  r.method = std::move(method);
  r.k = k;
  r.steps = mask.count();
  r.mask = std::move(mask);
  r.final_rank = RankOf(dist, true_index);
  r.final_probability = dist[true_index];
  r.success = success;
  return r;
}

RedactionResult BaselineResult(std::string method, MaskVector mask) {
  RedactionResult r;
  r.method = std::move(method);
  r.steps = mask.count();
  r.mask = std::move(mask);
  r.success = true;
  return r;
}

std::unordered_set<std::string> ProfileTerms(const Profile& profile) {
  std::unordered_set<std::string> terms;
  const Document lin =
      LinearizeProfile(profile, std::numeric_limits<std::size_t>::max());
  for (const auto& t : lin.tokens) {
    if (!t.is_punctuation) terms.insert(t.normalized);
  }
  return terms;
}

}  // namespace

std::vector<std::size_t> CandidatePositions(const Document& document,
                                            const MaskVector& mask,
                                            bool include_stopwords) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < document.size(); ++n) {
    const auto& t = document.tokens[n];
    if (mask.test(n) || t.is_punctuation || t.normalized == kMaskLiteral) continue;
    if (t.is_stopword && !include_stopwords) continue;
    out.push_back(n);
  }
  return out;
}

RedactionResult GreedyDeidentify(const ReidModel& model, const Document& document,
                                 std::size_t true_index,
                                 const SearchOptions& options) {
  CheckTarget(model, true_index, options);
  const auto rows = TokenRows(model.params(), document);
  MaskVector mask(document.size());
  std::vector<std::size_t> order;
  Distribution dist = model.PredictRows(rows, mask);
  if (RankOf(dist, true_index) > options.k) {
    return Finish("nn-greedy", options.k, std::move(mask), dist, true_index, true);
  }
  while (true) {
    const auto candidates =
        CandidatePositions(document, mask, options.include_stopwords);
    if (candidates.empty()) {
      auto r = Finish("nn-greedy", options.k, std::move(mask), dist, true_index,
                      false);
      r.order = std::move(order);
      return r;
    }
    std::size_t best = candidates.front();
    double best_p = std::numeric_limits<double>::infinity();
    Distribution best_dist;
    for (std::size_t j : candidates) {
      MaskVector trial = mask;
      trial.set(j);
      Distribution d = model.PredictRows(rows, trial);
      if (d[true_index] < best_p) {
        best_p = d[true_index];
        best = j;
        best_dist = std::move(d);
      }
    }
    mask.set(best);
    order.push_back(best);
    dist = std::move(best_dist);
    if (RankOf(dist, true_index) > options.k) {
      auto r = Finish("nn-greedy", options.k, std::move(mask), dist, true_index,
                      true);
      r.order = std::move(order);
      return r;
    }
  }
}

RedactionResult BeamDeidentify(const ReidModel& model, const Document& document,
                               std::size_t true_index, std::size_t width,
                               const SearchOptions& options) {
  CheckTarget(model, true_index, options);
  if (width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "beam width must be >= 1");
  }
  const std::string method = "nn-beam" + std::to_string(width);
  const auto rows = TokenRows(model.params(), document);

  struct State {
    MaskVector mask;
    Distribution dist;
  };
  std::vector<State> beam;
  beam.push_back({MaskVector(document.size()), {}});
  beam[0].dist = model.PredictRows(rows, beam[0].mask);
  if (RankOf(beam[0].dist, true_index) > options.k) {
    return Finish(method, options.k, beam[0].mask, beam[0].dist, true_index, true);
  }

  while (true) {
    struct Child {
      double p;
      std::size_t parent;
      std::size_t position;
      MaskVector mask;
      Distribution dist;
    };
    std::vector<Child> children;
    for (std::size_t b = 0; b < beam.size(); ++b) {
      for (std::size_t j : CandidatePositions(document, beam[b].mask,
                                              options.include_stopwords)) {
        MaskVector m = beam[b].mask;
        m.set(j);
        Distribution d = model.PredictRows(rows, m);
        const double p = d[true_index];
        children.push_back({p, b, j, std::move(m), std::move(d)});
      }
    }
    if (children.empty()) {
      return Finish(method, options.k, beam[0].mask, beam[0].dist, true_index,
                    false);
    }
    std::sort(children.begin(), children.end(),
              [](const Child& a, const Child& b) {
                return std::tie(a.p, a.parent, a.position) <
                       std::tie(b.p, b.parent, b.position);
              });
    std::vector<State> next;
    std::set<MaskVector> seen;
    for (auto& c : children) {
      if (next.size() == width) break;
      if (!seen.insert(c.mask).second) continue;
      next.push_back({std::move(c.mask), std::move(c.dist)});
    }
    for (const auto& s : next) {
      if (RankOf(s.dist, true_index) > options.k) {
        return Finish(method, options.k, s.mask, s.dist, true_index, true);
      }
    }
    beam = std::move(next);
  }
}

RedactionResult LexicalBaseline(const Document& document, const Profile& profile) {
  const auto terms = ProfileTerms(profile);
  MaskVector mask(document.size());
  for (std::size_t n = 0; n < document.size(); ++n) {
    const auto& t = document.tokens[n];
    if (!t.is_punctuation && terms.count(t.normalized)) mask.set(n);
  }
  return BaselineResult("lexical", std::move(mask));
}

RedactionResult IdfBaseline(const Document& document, const IdfTable& idf,
                            double threshold) {
  if (std::isnan(threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "idf threshold must not be NaN");
  }
  MaskVector mask(document.size());
  for (std::size_t n = 0; n < document.size(); ++n) {
    const auto& t = document.tokens[n];
    if (!t.is_punctuation && idf.Idf(t.normalized) >= threshold) mask.set(n);
  }
  return BaselineResult("idf", std::move(mask));
}

RedactionResult IdfTableAwareBaseline(const Document& document,
                                      const Profile& profile, const IdfTable& idf,
                                      double threshold,
                                      std::vector<std::size_t>* removal_order) {
  if (std::isnan(threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "idf threshold must not be NaN");
  }
  MaskVector mask = LexicalBaseline(document, profile).mask;
  std::vector<std::pair<double, std::size_t>> remaining;
  for (std::size_t n = 0; n < document.size(); ++n) {
    const auto& t = document.tokens[n];
    if (mask.test(n) || t.is_punctuation) continue;
    remaining.emplace_back(idf.Idf(t.normalized), n);
  }
  std::stable_sort(remaining.begin(), remaining.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  if (removal_order) removal_order->clear();
  for (const auto& [score, n] : remaining) {
    if (score < threshold) break;
    mask.set(n);
    if (removal_order) removal_order->push_back(n);
  }
  return BaselineResult("idf-table", std::move(mask));
}

RedactionResult NerBaseline(const Document& document,
                            const std::vector<EntityTag>& tags) {
  if (tags.size() != document.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "tag count " + std::to_string(tags.size()) +
                    " does not match token count " +
                    std::to_string(document.size()));
  }
  MaskVector mask(document.size());
  for (std::size_t n = 0; n < tags.size(); ++n) {
    if (tags[n] != EntityTag::kOutside) mask.set(n);
  }
  return BaselineResult("ner", std::move(mask));
}

void ScoreRedaction(const ReidModel& model, const Document& document,
                    std::size_t true_index, std::size_t k,
                    RedactionResult& result) {
  const Distribution d = model.Predict(document, result.mask);
  result.final_rank = RankOf(d, true_index);
  result.final_probability = d[true_index];
  result.success = result.final_rank > k;
}

RedactionMethod ParseRedactionMethod(std::string_view name) {
  if (name == "nn-greedy" || name == "nn" || name == "greedy") {
    return RedactionMethod::kNnGreedy;
  }
  if (name == "nn-beam" || name == "beam") return RedactionMethod::kNnBeam;
  if (name == "lexical") return RedactionMethod::kLexical;
  if (name == "idf") return RedactionMethod::kIdf;
  if (name == "idf-table" || name == "idf-table-aware") {
    return RedactionMethod::kIdfTable;
  }
  if (name == "ner") return RedactionMethod::kNer;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown redaction method '" + std::string(name) + "'");
}

const char* RedactionMethodName(RedactionMethod method) {
  switch (method) {
    case RedactionMethod::kNnGreedy:
      return "nn-greedy";
    case RedactionMethod::kNnBeam:
      return "nn-beam";
    case RedactionMethod::kLexical:
      return "lexical";
    case RedactionMethod::kIdf:
      return "idf";
    case RedactionMethod::kIdfTable:
      return "idf-table";
    case RedactionMethod::kNer:
      return "ner";
  }
  return "nn-greedy";
}

bool IsSearchMethod(RedactionMethod method) {
  return method == RedactionMethod::kNnGreedy || method == RedactionMethod::kNnBeam;
}

Redactor::Redactor(
    const Corpus& corpus, const ReidModel* guide, const IdfTable* idf,
    const std::unordered_map<std::string, std::vector<EntityTag>>* tags)
    : corpus_(corpus), guide_(guide), idf_(idf), tags_(tags) {}

RedactionResult Redactor::Redact(const AlignedRecord& record,
                                 const MethodConfig& config) const {
  const Document& doc = record.document;
  const Profile& profile = corpus_.profiles().at(record.profile_index);
  const bool search = IsSearchMethod(config.method);
  if (search && guide_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(RedactionMethodName(config.method)) +
                    " needs a guiding model");
  }
  const bool needs_idf = config.method == RedactionMethod::kIdf ||
                         config.method == RedactionMethod::kIdfTable;
  if (needs_idf && idf_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "idf methods need an IDF table");
  }
  SearchOptions options;
  options.k = config.k;
  options.include_stopwords = config.include_stopwords;

  RedactionResult result;
  switch (config.method) {
    case RedactionMethod::kNnGreedy:
      return GreedyDeidentify(*guide_, doc, record.profile_index, options);
    case RedactionMethod::kNnBeam:
      return BeamDeidentify(*guide_, doc, record.profile_index,
                            config.beam_width, options);
    case RedactionMethod::kLexical:
      result = LexicalBaseline(doc, profile);
      break;
    case RedactionMethod::kIdf:
      result = IdfBaseline(doc, *idf_, config.idf_threshold);
      break;
    case RedactionMethod::kIdfTable:
      result = IdfTableAwareBaseline(doc, profile, *idf_, config.idf_threshold);
      break;
    case RedactionMethod::kNer: {
      if (tags_ != nullptr) {
        auto it = tags_->find(record.id);
        if (it == tags_->end()) {
          throw Error(ErrorCode::kNotFound,
                      "no entity tags for record '" + record.id + "'");
        }
        result = NerBaseline(doc, it->second);
      } else {
        result = NerBaseline(doc, RuleTagDocument(doc));
      }
      break;
    }
  }
  if (guide_ != nullptr) {
    const Distribution d = guide_->Predict(doc, result.mask);
    result.final_rank = RankOf(d, record.profile_index);
    result.final_probability = d[record.profile_index];
  }
  return result;
}

}  // namespace textanon
