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

#include "textanon/reid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"
#include "textanon/error.hpp"

namespace textanon {

std::size_t Ranking::RankOf(std::size_t index) const {
  return textanon::RankOf(scores, index);
}

Ranking Reidentifier::Reidentify(const Document& document,
                                 const MaskVector& mask) const {
  if (mask.size() != document.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask length does not match document length");
  }
  Ranking r;
  r.scores = Score(document, mask);
  r.order.resize(r.scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return r.scores[a] > r.scores[b];
                   });
  return r;
}

NeuralReidentifier::NeuralReidentifier(std::string name,
                                       std::shared_ptr<const ModelParams> params,
                                       const Corpus& corpus)
    : name_(std::move(name)),
      model_(std::move(params), corpus.linearized_profiles()) {}

std::vector<double> NeuralReidentifier::Score(const Document& document,
                                              const MaskVector& mask) const {
  return model_.Predict(document, mask).probs;
}

Bm25Reidentifier::Bm25Reidentifier(std::string name,
                                   const std::vector<Document>& profiles,
                                   Bm25Params params)
    : name_(std::move(name)), params_(params) {
  if (profiles.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "BM25 needs a non-empty profile store");
  }
  if (!(params_.k1 > 0.0) || !(params_.b >= 0.0 && params_.b <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "BM25 requires k1 > 0 and b in [0, 1]");
  }
  std::vector<const Document*> docs;
  for (const auto& p : profiles) docs.push_back(&p);
  idf_ = IdfTable::Build(docs);
  std::size_t total = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    lengths_.push_back(profiles[i].size());
    total += profiles[i].size();
    std::map<std::string_view, std::size_t> tf;
    for (const auto& t : profiles[i].tokens) ++tf[t.normalized];
    for (const auto& [term, count] : tf) {
      auto it = postings_.find(term);
      if (it == postings_.end()) it = postings_.emplace(std::string(term), std::vector<Posting>{}).first;
      it->second.push_back({i, count});
    }
  }
  average_length_ = static_cast<double>(total) / static_cast<double>(profiles.size());
}

std::vector<double> Bm25Reidentifier::Score(const Document& document,
                                            const MaskVector& mask) const {
  if (mask.size() != document.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask length does not match document length");
  }
  std::set<std::string_view> query;
  for (std::size_t n = 0; n < document.size(); ++n) {
    const auto& t = document.tokens[n];
    if (mask.test(n) || t.normalized == kMaskLiteral) continue;
    query.insert(t.normalized);
  }
  std::vector<double> scores(lengths_.size(), 0.0);
  const double k1 = params_.k1;
  const double b = params_.b;
  for (auto term : query) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double idf = idf_.Idf(term);
    for (const auto& post : it->second) {
      const double tf = static_cast<double>(post.tf);
      const double norm =
          1.0 - b + b * static_cast<double>(lengths_[post.profile]) / average_length_;
      scores[post.profile] += idf * tf * (k1 + 1.0) / (tf + k1 * norm);
    }
  }
  return scores;
}

std::vector<double> Bm25Scores(const Document& document, const MaskVector& mask,
                               const std::vector<Document>& profiles,
                               Bm25Params params) {
  return Bm25Reidentifier("bm25", profiles, params).Score(document, mask);
}

EnsembleReport EnsembleEvaluate(const std::vector<const Reidentifier*>& members,
                                const std::vector<EvaluationItem>& items) {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ensemble needs at least one member");
  }
  std::set<std::string> names;
  for (const auto* m : members) {
    if (!names.insert(m->name()).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate ensemble member name '" + m->name() + "'");
    }
  }
  EnsembleReport report;
  std::map<std::string, std::size_t> member_hits;
  std::size_t hits = 0;
  for (const auto& item : items) {
    DocumentOutcome out;
    out.id = item.id;
    for (const auto* m : members) {
      if (item.true_index >= m->profile_count()) {
        throw Error(ErrorCode::kInvalidArgument, "true profile index out of range");
      }
      const auto scores = m->Score(*item.document, item.mask);
      const std::size_t rank = RankOf(scores, item.true_index);
      out.ranks[m->name()] = rank;
      if (rank == 1) {
        out.reidentified = true;
        ++member_hits[m->name()];
      }
    }
    if (out.reidentified) ++hits;
    report.per_doc.push_back(std::move(out));
  }
  const double n = static_cast<double>(items.size());
  report.rate = items.empty() ? 0.0 : 100.0 * static_cast<double>(hits) / n;
  for (const auto* m : members) {
    report.member_rates[m->name()] =
        items.empty() ? 0.0
                      : 100.0 * static_cast<double>(member_hits[m->name()]) / n;
  }
  return report;
}

std::string EnsembleReport::ToJson() const {
  nlohmann::ordered_json j;
  j["rate"] = rate;
  j["member_rates"] = member_rates;
  auto docs = nlohmann::ordered_json::array();
  for (const auto& d : per_doc) {
    nlohmann::ordered_json e;
    e["id"] = d.id;
    e["ranks"] = d.ranks;
    e["reidentified"] = d.reidentified;
    docs.push_back(std::move(e));
  }
  j["per_doc"] = std::move(docs);
  return j.dump();
}

EnsembleReport EnsembleReport::FromJson(const std::string& json) {
  EnsembleReport r;
  try {
    const auto j = nlohmann::json::parse(json);
    r.rate = j.at("rate").get<double>();
    if (j.contains("member_rates")) {
      r.member_rates = j["member_rates"].get<std::map<std::string, double>>();
    }
    for (const auto& e : j.at("per_doc")) {
      DocumentOutcome d;
      d.id = e.at("id").get<std::string>();
      d.ranks = e.at("ranks").get<std::map<std::string, std::size_t>>();
      d.reidentified = e.at("reidentified").get<bool>();
      r.per_doc.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed ensemble report: ") + e.what());
  }
  return r;
}

}  // namespace textanon
