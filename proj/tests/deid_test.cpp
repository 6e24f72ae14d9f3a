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
#include <limits>
#include <set>

#include "test_support.hpp"
#include "textanon/deid.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::set<std::size_t> Positions(const MaskVector& m) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.test(i)) out.insert(i);
  }
  return out;
}

struct Instance {
  Corpus corpus;
  std::shared_ptr<const ModelParams> params;
  std::unique_ptr<ReidModel> model;
};

Instance MakeInstance(std::size_t profiles, std::size_t words, std::uint64_t seed) {
  Instance in;
  in.corpus = testing::RandomCorpus(profiles, words, seed);
  in.params = testing::RandomModel(in.corpus, 8, seed + 100);
  in.model = std::make_unique<ReidModel>(in.params, in.corpus.linearized_profiles());
  return in;
}

std::size_t InitialRank(const Instance& in, std::size_t r) {
  const auto& doc = in.corpus.records()[r].document;
  return RankOf(in.model->Predict(doc, MaskVector(doc.size())), r);
}

TEST(GreedyTest, AlreadyAnonymousGivesEmptyMask) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance in = MakeInstance(8, 8, seed);
    for (std::size_t r = 0; r < 8; ++r) {
      const std::size_t rank = InitialRank(in, r);
      if (rank < 2) continue;
      const auto res = GreedyDeidentify(*in.model, in.corpus.records()[r].document, r,
                                        SearchOptions{rank - 1, false});
      EXPECT_TRUE(res.success);
      EXPECT_EQ(res.steps, 0u);
      EXPECT_EQ(res.mask.count(), 0u);
      EXPECT_EQ(res.final_rank, rank);
      return;
    }
  }
  FAIL() << "no instance with initial rank > 1";
}

TEST(GreedyTest, MatchesOracleStepByStep) {
  std::size_t steps = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance in = MakeInstance(10, 8, seed);
    const std::size_t r = seed % 10;
    const auto& doc = in.corpus.records()[r].document;
    const std::size_t k = std::max<std::size_t>(1, InitialRank(in, r));
    const auto res = GreedyDeidentify(*in.model, doc, r, SearchOptions{k, false});
    bool oracle_success = false;
    const auto oracle = testing::OracleGreedy(*in.params, in.corpus.linearized_profiles(),
                                              doc, r, k, &oracle_success);
    EXPECT_EQ(res.mask.bits(), oracle) << "seed " << seed;
    EXPECT_EQ(res.success, oracle_success);
    EXPECT_EQ(res.steps, res.mask.count());
    EXPECT_EQ(res.order.size(), res.steps);
    const auto agree = testing::CheckGreedySteps(
        *in.params, in.corpus.linearized_profiles(), doc, r, res.order);
    EXPECT_EQ(agree.agreed, agree.steps);
    steps += agree.steps;
  }
  EXPECT_GT(steps, 30u);
}

TEST(GreedyTest, MasksOnlyGrow) {
  const Instance in = MakeInstance(10, 10, 77);
  const auto& doc = in.corpus.records()[3].document;
  const auto res = GreedyDeidentify(*in.model, doc, 3, SearchOptions{5, false});
  std::set<std::size_t> seen;
  for (std::size_t j : res.order) EXPECT_TRUE(seen.insert(j).second);
  EXPECT_EQ(seen, Positions(res.mask));
}

TEST(GreedyTest, ExhaustionFails) {
  const Instance in = MakeInstance(6, 7, 5);
  const auto& doc = in.corpus.records()[2].document;
  // Rank can never exceed the number of profiles.
  const auto res = GreedyDeidentify(*in.model, doc, 2, SearchOptions{6, false});
  EXPECT_FALSE(res.success);
  EXPECT_EQ(res.mask.count(), CandidatePositions(doc, MaskVector(doc.size()), false).size());
  EXPECT_EQ(res.mask.count(), 7u);
}

TEST(GreedyTest, SkipsStopwordsAndPunctuation) {
  const Corpus c = testing::MakeCorpus(
      {{"a", "The amber, of birch.", {{"name", "amber"}}},
       {"b", "The cobalt, of delta.", {{"name", "cobalt"}}}});
  const auto params = testing::RandomModel(c, 8, 1);
  const ReidModel model(params, c.linearized_profiles());
  const auto& doc = c.records()[0].document;
  EXPECT_EQ(CandidatePositions(doc, MaskVector(doc.size()), false),
            (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(CandidatePositions(doc, MaskVector(doc.size()), true),
            (std::vector<std::size_t>{0, 1, 3, 4}));
  const auto res = GreedyDeidentify(model, doc, 0, SearchOptions{2, false});
  EXPECT_FALSE(res.success);
  EXPECT_EQ(Positions(res.mask), (std::set<std::size_t>{1, 4}));
  const auto all = GreedyDeidentify(model, doc, 0, SearchOptions{2, true});
  EXPECT_EQ(all.mask.count(), 4u);
}

TEST(GreedyTest, Errors) {
  const Instance in = MakeInstance(4, 5, 1);
  const auto& doc = in.corpus.records()[0].document;
  try {
    GreedyDeidentify(*in.model, doc, 9, SearchOptions{1, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_THROW(GreedyDeidentify(*in.model, doc, 0, SearchOptions{0, false}), Error);
  EXPECT_THROW(BeamDeidentify(*in.model, doc, 0, 0, SearchOptions{1, false}), Error);
}

TEST(GreedyTest, Deterministic) {
  const Instance in = MakeInstance(10, 9, 13);
  const auto& doc = in.corpus.records()[4].document;
  const auto a = GreedyDeidentify(*in.model, doc, 4, SearchOptions{3, false});
  const auto b = GreedyDeidentify(*in.model, doc, 4, SearchOptions{3, false});
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.final_probability, b.final_probability);
  EXPECT_EQ(a.order, b.order);
}

TEST(SearchAuditTest, SuccessImpliesRankAboveK) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance in = MakeInstance(10, 9, seed + 300);
    for (std::size_t k : {1u, 3u}) {
      const std::size_t r = seed % 10;
      const auto& doc = in.corpus.records()[r].document;
      for (const auto& res :
           {GreedyDeidentify(*in.model, doc, r, SearchOptions{k, false}),
            BeamDeidentify(*in.model, doc, r, 4, SearchOptions{k, false})}) {
        const auto probs = testing::OracleProbabilities(
            *in.params, in.corpus.linearized_profiles(), doc, res.mask.bits());
        const std::size_t rank = testing::OracleRank(probs, r);
        EXPECT_EQ(rank, res.final_rank);
        if (res.success) EXPECT_GT(rank, k);
        if (!res.success) EXPECT_LE(rank, k);
      }
    }
  }
}

TEST(BeamTest, WidthOneEqualsGreedy) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance in = MakeInstance(10, 9, seed + 500);
    const std::size_t r = seed % 10;
    const auto& doc = in.corpus.records()[r].document;
    for (std::size_t k : {1u, 2u, 4u}) {
      const auto g = GreedyDeidentify(*in.model, doc, r, SearchOptions{k, false});
      const auto b = BeamDeidentify(*in.model, doc, r, 1, SearchOptions{k, false});
      EXPECT_EQ(g.mask, b.mask);
      EXPECT_EQ(g.success, b.success);
      EXPECT_EQ(b.method, "nn-beam1");
    }
  }
}

TEST(BeamTest, StopsAtFirstSolvedDepth) {
  // Find an instance where a single mask suffices; width 2 must stop there.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance in = MakeInstance(6, 6, seed + 900);
    const auto& doc = in.corpus.records()[0].document;
    const std::size_t k = InitialRank(in, 0);
    bool solvable = false;
    for (std::size_t j = 0; j < doc.size() && !solvable; ++j) {
      MaskVector z(doc.size());
      z.set(j);
      solvable = RankOf(in.model->Predict(doc, z), 0) > k;
    }
    if (!solvable) continue;
    const auto b = BeamDeidentify(*in.model, doc, 0, 2, SearchOptions{k, false});
    EXPECT_TRUE(b.success);
    EXPECT_EQ(b.mask.count(), 1u);
    return;
  }
  FAIL() << "no depth-1 instance found";
}

TEST(LexicalTest, MasksProfileOverlap) {
  const Document doc = Tokenize("john smith is a farmer");
  const Profile p{"x", {{"name", "John Smith"}}};
  EXPECT_EQ(Positions(LexicalBaseline(doc, p).mask), (std::set<std::size_t>{0, 1}));
  const Profile keyed{"x", {{"farmer", "Ann"}}};
  EXPECT_EQ(Positions(LexicalBaseline(doc, keyed).mask), (std::set<std::size_t>{4}));
  const Profile none{"x", {{"job", "writer"}}};
  EXPECT_EQ(LexicalBaseline(doc, none).mask.count(), 0u);
  EXPECT_TRUE(LexicalBaseline(doc, none).success);
  EXPECT_FALSE(LexicalBaseline(doc, none).k.has_value());
}

class IdfFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = testing::RandomCorpus(30, 8, 12);
    idf_ = IdfTable::FromCorpus(corpus_);
  }
  Corpus corpus_;
  IdfTable idf_;
};

TEST_F(IdfFixture, ThresholdExtremes) {
  const Document doc = Tokenize("amber, birch. name3");
  EXPECT_EQ(IdfBaseline(doc, idf_, kInf).mask.count(), 0u);
  EXPECT_EQ(Positions(IdfBaseline(doc, idf_, 0.0).mask), (std::set<std::size_t>{0, 2, 4}));
  EXPECT_THROW(IdfBaseline(doc, idf_, std::nan("")), Error);
}

TEST_F(IdfFixture, MedianThresholdMatchesFilter) {
  std::vector<double> all;
  for (const auto& [term, df] : idf_.frequencies()) all.push_back(idf_.Idf(term));
  std::sort(all.begin(), all.end());
  const double median = all[all.size() / 2];
  for (const auto& r : corpus_.records()) {
    const auto mask = IdfBaseline(r.document, idf_, median).mask;
    for (std::size_t n = 0; n < r.document.size(); ++n) {
      const auto& t = r.document.tokens[n];
      EXPECT_EQ(mask.test(n), !t.is_punctuation && idf_.Idf(t.normalized) >= median);
    }
  }
}

TEST_F(IdfFixture, TableAwareReducesToLexicalAndNests) {
  const std::vector<double> thresholds = {kInf, 4.0, 3.0, 2.0, 1.0, 0.0};
  for (const auto& r : corpus_.records()) {
    const Profile& p = corpus_.profiles()[r.profile_index];
    EXPECT_EQ(IdfTableAwareBaseline(r.document, p, idf_, kInf).mask,
              LexicalBaseline(r.document, p).mask);
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
      const auto loose = IdfTableAwareBaseline(r.document, p, idf_, thresholds[i]).mask;
      const auto tight = IdfTableAwareBaseline(r.document, p, idf_, thresholds[i - 1]).mask;
      EXPECT_TRUE(tight.IsSubsetOf(loose));
      EXPECT_TRUE(IdfBaseline(r.document, idf_, thresholds[i - 1])
                      .mask.IsSubsetOf(IdfBaseline(r.document, idf_, thresholds[i]).mask));
    }
  }
}

TEST_F(IdfFixture, RemovalOrderSortedByIdf) {
  const Document doc = Tokenize("amber name1 birch cobalt name2 delta, amber");
  const Profile p{"x", {{"name", "cobalt"}}};
  std::vector<std::size_t> order;
  const auto res = IdfTableAwareBaseline(doc, p, idf_, 0.0, &order);
  // Everything except the lexical match (3) and the comma (6).
  EXPECT_EQ(order.size(), 6u);
  std::vector<std::size_t> want;
  for (std::size_t n = 0; n < doc.size(); ++n) {
    if (n != 3 && n != 6) want.push_back(n);
  }
  std::stable_sort(want.begin(), want.end(), [&](std::size_t a, std::size_t b) {
    return idf_.Idf(doc.tokens[a].normalized) > idf_.Idf(doc.tokens[b].normalized);
  });
  EXPECT_EQ(order, want);
  for (std::size_t i = 1; i < order.size(); ++i) {
    EXPECT_GE(idf_.Idf(doc.tokens[order[i - 1]].normalized),
              idf_.Idf(doc.tokens[order[i]].normalized));
  }
  EXPECT_EQ(res.mask.count(), 7u);
}

TEST(NerTest, TagsAndRules) {
  const Document doc = Tokenize("John Smith farms");
  const std::vector<EntityTag> tags = {EntityTag::kPerson, EntityTag::kPerson,
                                       EntityTag::kOutside};
  EXPECT_EQ(Positions(NerBaseline(doc, tags).mask), (std::set<std::size_t>{0, 1}));
  EXPECT_EQ(NerBaseline(doc, std::vector<EntityTag>(3, EntityTag::kOutside)).mask.count(),
            0u);
  EXPECT_THROW(NerBaseline(doc, std::vector<EntityTag>(2)), Error);

  const Document s = Tokenize("He played for Chelsea in London");
  EXPECT_EQ(Positions(NerBaseline(s, RuleTagDocument(s)).mask),
            (std::set<std::size_t>{3, 5}));
  EXPECT_EQ(ParseEntityTag(EntityTagName(EntityTag::kLocation)), EntityTag::kLocation);
  EXPECT_THROW(ParseEntityTag("BOGUS"), Error);
}

TEST(RedactorTest, DispatchAndScoring) {
  const Instance in = MakeInstance(10, 8, 31);
  const IdfTable idf = IdfTable::FromCorpus(in.corpus);
  const Redactor redactor(in.corpus, in.model.get(), &idf);
  const auto& rec = in.corpus.records()[2];
  MethodConfig greedy;
  greedy.k = 2;
  const auto g = redactor.Redact(rec, greedy);
  EXPECT_EQ(g.method, "nn-greedy");
  EXPECT_EQ(g.k, std::optional<std::size_t>(2));

  MethodConfig lexical;
  lexical.method = RedactionMethod::kLexical;
  const auto l = redactor.Redact(rec, lexical);
  EXPECT_EQ(l.mask, LexicalBaseline(rec.document, in.corpus.profiles()[2]).mask);
  EXPECT_GE(l.final_rank, 1u);

  const Redactor no_guide(in.corpus, nullptr, nullptr);
  EXPECT_THROW(no_guide.Redact(rec, greedy), Error);
  MethodConfig idf_method;
  idf_method.method = RedactionMethod::kIdf;
  EXPECT_THROW(no_guide.Redact(rec, idf_method), Error);

  for (auto m : {RedactionMethod::kNnGreedy, RedactionMethod::kNnBeam,
                 RedactionMethod::kLexical, RedactionMethod::kIdf,
                 RedactionMethod::kIdfTable, RedactionMethod::kNer}) {
    EXPECT_EQ(ParseRedactionMethod(RedactionMethodName(m)), m);
  }
  EXPECT_THROW(ParseRedactionMethod("paraphrase"), Error);
}

}  // namespace
}  // namespace textanon
