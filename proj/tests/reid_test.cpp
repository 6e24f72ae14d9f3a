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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "textanon/error.hpp"
#include "textanon/reid.hpp"

namespace textanon {
namespace {

std::vector<Document> HandProfiles() {
  return {Tokenize("alice smith farmer"), Tokenize("bob jones farmer farmer"),
          Tokenize("carol smith writer")};
}

// D = 3, avglen = 10/3, k1 = 1.5, b = 0.75.
// smith and farmer have df = 2, so idf = ln(4/3); the others have ln(2).
// Length norms: 0.25 + 0.75 * len / avglen = 0.925 (len 3) and 1.15 (len 4).
// "smith farmer" against profile 0: 2 * ln(4/3) * 2.5 / (1 + 1.5 * 0.925).
TEST(Bm25Test, HandFixture) {
  const Bm25Reidentifier bm25("bm25", HandProfiles());
  EXPECT_NEAR(bm25.average_length(), 10.0 / 3.0, 1e-15);

  const Document q1 = Tokenize("smith farmer");
  const auto s1 = bm25.Score(q1, MaskVector(q1.size()));
  const double one = std::log(4.0 / 3.0) * 2.5 / (1.0 + 1.5 * 0.925);
  const double farmer_twice = std::log(4.0 / 3.0) * 2.0 * 2.5 / (2.0 + 1.5 * 1.15);
  EXPECT_NEAR(s1[0], 2.0 * one, 1e-9);
  EXPECT_NEAR(s1[1], farmer_twice, 1e-9);
  EXPECT_NEAR(s1[2], one, 1e-9);
  EXPECT_NEAR(s1[0], 0.6024755444016352, 1e-9);
  EXPECT_NEAR(s1[1], 0.3861504328211824, 1e-9);
  EXPECT_NEAR(s1[2], 0.3012377722008176, 1e-9);

  const Document q2 = Tokenize("farmer writer carol farmer");
  const auto s2 = bm25.Score(q2, MaskVector(q2.size()));
  EXPECT_NEAR(s2[0], 0.3012377722008176, 1e-9);
  EXPECT_NEAR(s2[1], 0.3861504328211824, 1e-9);
  EXPECT_NEAR(s2[2], 1.4516171320627125, 1e-9);
  EXPECT_EQ(bm25.Score(q2, MaskVector(q2.size())), Bm25Scores(q2, MaskVector(q2.size()), HandProfiles()));
}

TEST(Bm25Test, NoOverlapScoresZero) {
  const Bm25Reidentifier bm25("bm25", HandProfiles());
  const Document q = Tokenize("zebra quokka");
  for (double s : bm25.Score(q, MaskVector(q.size()))) EXPECT_EQ(s, 0.0);
}

TEST(Bm25Test, MaskedTermsAreIgnored) {
  const Bm25Reidentifier bm25("bm25", HandProfiles());
  const Document q = Tokenize("carol <mask> writer");
  MaskVector z(q.size());
  z.set(0);
  const auto masked = bm25.Score(q, z);
  const Document w = Tokenize("writer");
  EXPECT_EQ(masked, bm25.Score(w, MaskVector(w.size())));
}

TEST(Bm25Test, DuplicateProfilesScoreEqually) {
  std::vector<Document> profiles = HandProfiles();
  profiles.push_back(profiles[2]);
  const Bm25Reidentifier bm25("bm25", profiles);
  const Document q = Tokenize("carol writer smith");
  const auto s = bm25.Score(q, MaskVector(q.size()));
  EXPECT_EQ(s[2], s[3]);
  EXPECT_GT(s[2], 0.0);
}

TEST(Bm25Test, UniqueMatchRanksFirst) {
  const Bm25Reidentifier bm25("bm25", HandProfiles());
  const Document q = Tokenize("bob went home");
  const Ranking r = bm25.Reidentify(q, MaskVector(q.size()));
  EXPECT_EQ(r.order[0], 1u);
  EXPECT_EQ(r.RankOf(1), 1u);
}

TEST(Bm25Test, NonNegativeAndZeroExactlyWithoutOverlap) {
  const Corpus c = testing::RandomCorpus(20, 6, 4);
  const Bm25Reidentifier bm25("bm25", c.linearized_profiles());
  for (const auto& r : c.records()) {
    const auto s = bm25.Score(r.document, MaskVector(r.document.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      bool overlap = false;
      for (const auto& t : r.document.tokens) {
        for (const auto& u : c.linearized_profiles()[i].tokens) {
          overlap |= t.normalized == u.normalized;
        }
      }
      EXPECT_GE(s[i], 0.0);
      // Overlap on a term present in every profile still scores 0 (idf 0).
      if (!overlap) EXPECT_EQ(s[i], 0.0);
    }
  }
}

TEST(Bm25Test, RejectsBadParameters) {
  EXPECT_THROW(Bm25Reidentifier("x", {}), Error);
  EXPECT_THROW(Bm25Reidentifier("x", HandProfiles(), Bm25Params{0.0, 0.5}), Error);
  EXPECT_THROW(Bm25Reidentifier("x", HandProfiles(), Bm25Params{1.0, 1.5}), Error);
}

class FixedScorer : public Reidentifier {
 public:
  FixedScorer(std::string name, std::vector<std::vector<double>> per_doc)
      : name_(std::move(name)), per_doc_(std::move(per_doc)) {}
  const std::string& name() const override { return name_; }
  std::size_t profile_count() const override { return per_doc_[0].size(); }
  std::vector<double> Score(const Document& document, const MaskVector&) const override {
    // The document's single token is its index into the fixture.
    return per_doc_[std::stoul(document.tokens[0].surface)];
  }

 private:
  std::string name_;
  std::vector<std::vector<double>> per_doc_;
};

class EnsembleFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    for (int i = 0; i < 3; ++i) docs_.push_back(Tokenize(std::to_string(i)));
    for (int i = 0; i < 3; ++i) {
      items_.push_back({"d" + std::to_string(i), &docs_[i], MaskVector(1), 0});
    }
  }
  std::vector<Document> docs_;
  std::vector<EvaluationItem> items_;
};

TEST_F(EnsembleFixture, AnyMemberReidentifies) {
  // Doc 0: both members rank profile 0 first. Doc 1: only `b` does.
  // Doc 2: neither does.
  const FixedScorer a("a", {{0.9, 0.1}, {0.2, 0.8}, {0.1, 0.9}});
  const FixedScorer b("b", {{0.7, 0.3}, {0.6, 0.4}, {0.3, 0.7}});
  const EnsembleReport r = EnsembleEvaluate({&a, &b}, items_);
  ASSERT_EQ(r.per_doc.size(), 3u);
  EXPECT_TRUE(r.per_doc[0].reidentified);
  EXPECT_TRUE(r.per_doc[1].reidentified);
  EXPECT_FALSE(r.per_doc[2].reidentified);
  EXPECT_EQ(r.per_doc[1].ranks.at("a"), 2u);
  EXPECT_EQ(r.per_doc[1].ranks.at("b"), 1u);
  EXPECT_NEAR(r.rate, 200.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.member_rates.at("a"), 100.0 / 3.0, 1e-12);

  // Adding a member never lowers the rate; single member rate = rank-1 rate.
  const EnsembleReport only_a = EnsembleEvaluate({&a}, items_);
  EXPECT_LE(only_a.rate, r.rate);
  for (const auto& d : only_a.per_doc) EXPECT_EQ(d.reidentified, d.ranks.at("a") == 1);
}

TEST_F(EnsembleFixture, JsonRoundTrip) {
  const FixedScorer a("a", {{0.9, 0.1}, {0.2, 0.8}, {0.5, 0.5}});
  const EnsembleReport r = EnsembleEvaluate({&a}, items_);
  const std::string json = r.ToJson();
  EXPECT_EQ(json.rfind("{\"rate\":", 0), 0u);
  const EnsembleReport back = EnsembleReport::FromJson(json);
  EXPECT_EQ(back.ToJson(), json);
  EXPECT_TRUE(back.per_doc[2].reidentified);  // tie goes to the lower index
  EXPECT_THROW(EnsembleReport::FromJson("{]"), Error);
}

TEST_F(EnsembleFixture, RejectsEmptyOrDuplicateMembers) {
  const FixedScorer a("a", {{0.9, 0.1}, {0.2, 0.8}, {0.5, 0.5}});
  EXPECT_THROW(EnsembleEvaluate({}, items_), Error);
  EXPECT_THROW(EnsembleEvaluate({&a, &a}, items_), Error);
}

TEST(NeuralReidentifierTest, RankingIsPermutationAndMaskInvariant) {
  const Corpus c = testing::RandomCorpus(8, 6, 9);
  const NeuralReidentifier n("n", testing::RandomModel(c, 8, 2), c);
  const auto& a = c.records()[0].document;
  const auto& b = c.records()[1].document;
  const Ranking ra = n.Reidentify(a, MaskVector::Ones(a.size()));
  const Ranking rb = n.Reidentify(b, MaskVector::Ones(b.size()));
  EXPECT_EQ(ra.order, rb.order);
  std::vector<std::size_t> sorted = ra.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
  for (std::size_t i = 1; i < ra.order.size(); ++i) {
    EXPECT_GE(ra.scores[ra.order[i - 1]], ra.scores[ra.order[i]]);
  }
}

}  // namespace
}  // namespace textanon
