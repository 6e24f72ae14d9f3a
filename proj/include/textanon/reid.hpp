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

// Reidentification of (possibly redacted) documents against the profile
// store, and the "any member succeeds" ensemble metric.

#ifndef TEXTANON_REID_HPP_
#define TEXTANON_REID_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/encoder.hpp"

namespace textanon {

struct Ranking {
  // Profile indices, best first; ties go to the lower index.
  std::vector<std::size_t> order;
  // Score per profile index (probabilities for the neural kind).
  std::vector<double> scores;

  // 1-based rank of profile `index`.
  std::size_t RankOf(std::size_t index) const;
};

class Reidentifier {
 public:
  virtual ~Reidentifier() = default;

  virtual const std::string& name() const = 0;
  virtual std::size_t profile_count() const = 0;
  // One score per profile; larger is more likely.
  virtual std::vector<double> Score(const Document& document,
                                    const MaskVector& mask) const = 0;

  Ranking Reidentify(const Document& document, const MaskVector& mask) const;
};

class NeuralReidentifier : public Reidentifier {
 public:
  NeuralReidentifier(std::string name, std::shared_ptr<const ModelParams> params,
                     const Corpus& corpus);

  const std::string& name() const override { return name_; }
  std::size_t profile_count() const override { return model_.profile_count(); }
  // Probabilities p(y | x, z).
  std::vector<double> Score(const Document& document,
                            const MaskVector& mask) const override;

  const ReidModel& model() const { return model_; }

 private:
  std::string name_;
  ReidModel model_;
};

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
};

// Okapi BM25 over the linearized profiles with idf ln((1 + D) / (1 + df)),
// D and df counted over the profiles. Masked positions and "<mask>" tokens are
// not query terms; each distinct query term counts once.
class Bm25Reidentifier : public Reidentifier {
 public:
  Bm25Reidentifier(std::string name, const std::vector<Document>& profiles,
                   Bm25Params params = {});

  const std::string& name() const override { return name_; }
  std::size_t profile_count() const override { return lengths_.size(); }
  std::vector<double> Score(const Document& document,
                            const MaskVector& mask) const override;

  const IdfTable& idf() const { return idf_; }
  double average_length() const { return average_length_; }

 private:
  struct Posting {
    std::size_t profile;
    std::size_t tf;
  };

  std::string name_;
  Bm25Params params_;
  IdfTable idf_;
  std::vector<std::size_t> lengths_;
  double average_length_ = 0.0;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

std::vector<double> Bm25Scores(const Document& document, const MaskVector& mask,
                               const std::vector<Document>& profiles,
                               Bm25Params params = {});

struct EvaluationItem {
  std::string id;
  const Document* document = nullptr;
  MaskVector mask;
  std::size_t true_index = 0;
};

struct DocumentOutcome {
  std::string id;
  // Member name -> 1-based rank of the true profile.
  std::map<std::string, std::size_t> ranks;
  bool reidentified = false;
};

struct EnsembleReport {
  double rate = 0.0;  // percent
  std::vector<DocumentOutcome> per_doc;
  // Member name -> percent of documents that member alone ranks first.
  std::map<std::string, double> member_rates;

  std::string ToJson() const;
  static EnsembleReport FromJson(const std::string& json);
};

// A document is reidentified when any member ranks its true profile first.
EnsembleReport EnsembleEvaluate(const std::vector<const Reidentifier*>& members,
                                const std::vector<EvaluationItem>& items);

}  // namespace textanon

#endif  // TEXTANON_REID_HPP_
