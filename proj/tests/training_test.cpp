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

#include <cmath>
#include <numeric>
#include <random>

#include "test_support.hpp"
#include "textanon/error.hpp"
#include "textanon/training.hpp"

namespace textanon {
namespace {

TEST(SmoothedTargetsTest, Examples) {
  const auto t = SmoothedTargets(2, 4, 0.1);
  const std::vector<double> want = {0.025, 0.025, 0.925, 0.025};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t[i], want[i], 1e-15);
  const auto one_hot = SmoothedTargets(1, 3, 0.0);
  EXPECT_EQ(one_hot, (std::vector<double>{0.0, 1.0, 0.0}));
  for (double alpha : {0.0, 0.1, 0.5, 0.9}) {
    const auto s = SmoothedTargets(0, 7, alpha);
    EXPECT_NEAR(std::accumulate(s.begin(), s.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(*std::min_element(s.begin(), s.end()), alpha / 7.0, 1e-15);
    EXPECT_NEAR(s[0], 1.0 - alpha + alpha / 7.0, 1e-15);
  }
}

TEST(CrossEntropyTest, Examples) {
  const Distribution uniform{{0.25, 0.25, 0.25, 0.25}};
  EXPECT_NEAR(CrossEntropy(uniform, SmoothedTargets(1, 4, 0.1)).value, std::log(4.0), 1e-12);
  EXPECT_NEAR(CrossEntropy(uniform, SmoothedTargets(3, 4, 0.0)).value, std::log(4.0), 1e-12);
  const Distribution hot{{0.0, 1.0, 0.0}};
  const LossValue zero = CrossEntropy(hot, SmoothedTargets(1, 3, 0.0));
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_FALSE(zero.clamped);
}

TEST(CrossEntropyTest, MatchesSummationOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(5), t(5);
    for (double& v : p) v = u(rng);
    for (double& v : t) v = u(rng);
    const double zp = std::accumulate(p.begin(), p.end(), 0.0);
    const double zt = std::accumulate(t.begin(), t.end(), 0.0);
    double want = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] /= zp;
      t[i] /= zt;
    }
    for (std::size_t i = 0; i < 5; ++i) want -= t[i] * std::log(p[i]);
    EXPECT_NEAR(CrossEntropy(Distribution{p}, t).value, want, 1e-9);
  }
}

TEST(CrossEntropyTest, ClampsZeroProbability) {
  const LossValue l = CrossEntropy(Distribution{{1.0, 0.0}}, SmoothedTargets(1, 2, 0.1));
  EXPECT_TRUE(l.clamped);
  EXPECT_TRUE(std::isfinite(l.value));
  EXPECT_NEAR(l.value, -0.95 * std::log(kProbabilityFloor), 1e-9);
}

TEST(CrossEntropyTest, BoundedBelowByTargetEntropy) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 2.0);
  const auto t = SmoothedTargets(2, 6, 0.1);
  double entropy = 0.0;
  for (double v : t) entropy -= v * std::log(v);
  EXPECT_NEAR(CrossEntropy(Distribution{t}, t).value, entropy, 1e-12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(6);
    for (double& v : s) v = n(rng);
    EXPECT_GT(CrossEntropy(Softmax(s), t).value, entropy);
  }
}

TEST(SampleMaskTest, EdgeCounts) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(SampleMaskOfSize(rng, 9, 0, MaskPrior::kUniformCount).count(), 0u);
  EXPECT_EQ(SampleMaskOfSize(rng, 9, 9, MaskPrior::kUniformCount),
            MaskVector::Ones(9));
  EXPECT_EQ(SampleMask(rng, 9, MaskPrior::kOff).count(), 0u);
  const std::vector<double> w = {0.0, 0.0, 5.0, 1.0};
  const MaskVector one = SampleMaskOfSize(rng, 4, 1, MaskPrior::kIdfWeighted, w);
  EXPECT_EQ(one.count(), 1u);
  EXPECT_FALSE(one.test(0));
  EXPECT_FALSE(one.test(1));
  EXPECT_EQ(SampleMaskOfSize(rng, 4, 4, MaskPrior::kIdfWeighted, w).count(), 4u);
}

TEST(SampleMaskTest, MeanFractionIsHalf) {
  std::mt19937_64 rng(42);
  double total = 0.0;
  for (int i = 0; i < 10000; ++i) {
    total += static_cast<double>(SampleMask(rng, 20, MaskPrior::kUniformCount).count()) / 20.0;
  }
  EXPECT_NEAR(total / 10000.0, 0.5, 0.02);
}

TEST(SampleMaskTest, CountIsUniform) {
  // Chi-square over 11 bins (10 degrees of freedom); critical value at
  // p = 0.01 is 23.209.
  std::mt19937_64 rng(7);
  std::vector<double> bins(11, 0.0);
  for (int i = 0; i < 10000; ++i) {
    bins[SampleMask(rng, 10, MaskPrior::kUniformCount).count()] += 1.0;
  }
  const double expected = 10000.0 / 11.0;
  double chi2 = 0.0;
  for (double b : bins) chi2 += (b - expected) * (b - expected) / expected;
  EXPECT_LT(chi2, 23.209);
}

TEST(SampleMaskTest, IdfWeightingPrefersHeavyPositions) {
  std::mt19937_64 rng(3);
  const std::vector<double> w = {0.1, 0.1, 0.1, 5.0};
  int heavy = 0;
  for (int i = 0; i < 2000; ++i) {
    heavy += SampleMaskOfSize(rng, 4, 1, MaskPrior::kIdfWeighted, w).test(3);
  }
  EXPECT_GT(heavy, 1800);
}

TEST(GradientTest, DocumentSideMatchesFiniteDifferences) {
  for (const auto& b : testing::CheckGradients(testing::MakeGradientToy(8, 5, 10, 1),
                                               EncoderSide::kDocument)) {
    EXPECT_LT(b.max_relative_error, 1e-3) << b.block;
    EXPECT_GT(b.checked, 0u);
  }
}

TEST(GradientTest, ProfileSideMatchesFiniteDifferences) {
  for (const auto& b : testing::CheckGradients(testing::MakeGradientToy(8, 5, 10, 2),
                                               EncoderSide::kProfile)) {
    EXPECT_LT(b.max_relative_error, 1e-3) << b.block;
  }
}

TEST(GradStepTest, ZeroLearningRateLeavesParams) {
  auto toy = testing::MakeGradientToy(8, 5, 10, 3);
  const ModelParams before = toy.params;
  const ProfileMatrix g = BuildProfileMatrix(toy.params, toy.profile_docs);
  const StepResult r = GradStep(toy.params, toy.batch, toy.profile_rows, g,
                                EncoderSide::kDocument, 0.0, 5.0);
  EXPECT_GT(r.loss, 0.0);
  EXPECT_EQ(toy.params.embeddings, before.embeddings);
  EXPECT_EQ(toy.params.doc_projection, before.doc_projection);
}

TEST(GradStepTest, ClipsGlobalNorm) {
  auto toy = testing::MakeGradientToy(8, 5, 10, 4);
  const ProfileMatrix g = BuildProfileMatrix(toy.params, toy.profile_docs);
  const double clip = 1e-3;
  const StepResult r = GradStep(toy.params, toy.batch, toy.profile_rows, g,
                                EncoderSide::kDocument, 0.1, clip);
  ASSERT_GT(r.grad_norm, clip);
  EXPECT_LE(r.clipped_norm, clip + 1e-6);

  // The applied SGD update has norm lr * clip.
  auto fresh = testing::MakeGradientToy(8, 5, 10, 4);
  const ModelParams before = fresh.params;
  GradStep(fresh.params, fresh.batch, fresh.profile_rows, g, EncoderSide::kDocument,
           1.0, clip);
  double sq = 0.0;
  for (std::size_t i = 0; i < before.embeddings.size(); ++i) {
    const double d = static_cast<double>(fresh.params.embeddings[i]) - before.embeddings[i];
    sq += d * d;
  }
  for (std::size_t i = 0; i < before.doc_projection.size(); ++i) {
    const double d =
        static_cast<double>(fresh.params.doc_projection[i]) - before.doc_projection[i];
    sq += d * d;
  }
  EXPECT_NEAR(std::sqrt(sq), clip, 1e-5);
}

double RunSteps(Optimizer optimizer, double lr, int steps) {
  auto toy = testing::MakeGradientToy(8, 5, 10, 5);
  for (auto& ex : toy.batch) ex.mask = MaskVector(ex.rows.size());
  AdamState adam;
  double first = 0.0;
  double last = 0.0;
  for (int s = 0; s < steps; ++s) {
    const ProfileMatrix g = BuildProfileMatrix(toy.params, toy.profile_docs);
    const StepResult r =
        GradStep(toy.params, toy.batch, toy.profile_rows, g, EncoderSide::kDocument, lr,
                 5.0, optimizer == Optimizer::kAdam ? &adam : nullptr);
    if (s == 0) first = r.loss;
    last = r.loss;
  }
  EXPECT_LT(last, first);
  return last / first;
}

TEST(GradStepTest, SgdAndAdamReduceLoss) {
  EXPECT_LT(RunSteps(Optimizer::kSgd, 0.5, 50), 1.0);
  EXPECT_LT(RunSteps(Optimizer::kAdam, 0.05, 50), 1.0);
}

TEST(ScheduleTest, WarmupThenDecay) {
  TrainConfig c;
  c.epochs = 10;
  c.warmup_epochs = 2;
  c.learning_rate = 1.0;
  c.final_lr_fraction = 0.1;
  EXPECT_NEAR(ScheduledLearningRate(c, 0, 5), 0.1, 1e-12);
  EXPECT_NEAR(ScheduledLearningRate(c, 9, 5), 1.0, 1e-12);
  EXPECT_NEAR(ScheduledLearningRate(c, 10, 5), 1.0, 1e-12);
  EXPECT_NEAR(ScheduledLearningRate(c, 49, 5), 0.1, 1e-12);
  for (std::size_t s = 11; s < 50; ++s) {
    EXPECT_LT(ScheduledLearningRate(c, s, 5), ScheduledLearningRate(c, s - 1, 5));
  }
}

TEST(PhaseTest, ProfileBudget) {
  TrainConfig c;
  c.profile_epochs = 5;
  std::size_t profile = 0;
  for (std::size_t e = 0; e < 60; ++e) {
    if (PhaseForEpoch(e, c) == EncoderSide::kProfile) {
      ++profile;
      EXPECT_EQ(e % 2, 1u);
      EXPECT_LT(e, 10u);
    }
  }
  EXPECT_EQ(profile, 5u);
  EXPECT_EQ(PhaseForEpoch(0, c), EncoderSide::kDocument);
}

TEST(ConfigTest, Validation) {
  auto bad = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    try {
      c.Validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidArgument;
    }
    return false;
  };
  EXPECT_TRUE(bad([](TrainConfig& c) { c.epochs = 0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.clip_norm = 0.0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.label_smoothing = 1.0; }));
  EXPECT_TRUE(bad([](TrainConfig& c) { c.embedding_dim = 0; }));
  EXPECT_NO_THROW(TrainConfig{}.Validate());
  EXPECT_EQ(ParseOptimizer("adam"), Optimizer::kAdam);
  EXPECT_EQ(ParseOptimizer(OptimizerName(Optimizer::kSgd)), Optimizer::kSgd);
  EXPECT_EQ(ParseMaskPrior(MaskPriorName(MaskPrior::kIdfWeighted)), MaskPrior::kIdfWeighted);
  EXPECT_THROW(ParseOptimizer("rmsprop"), Error);
}

TrainConfig ToyConfig(std::size_t epochs) {
  TrainConfig c;
  c.epochs = epochs;
  c.hash_buckets = 16;
  c.embedding_dim = 16;
  c.batch_size = 4;
  c.heldout_fraction = 0.0;
  return c;
}

TEST(TrainTest, SingleEpochBuildsProfileMatrixOnce) {
  const Corpus c = testing::RandomCorpus(10, 6, 1);
  const TrainResult r = Train(c, ToyConfig(1));
  EXPECT_EQ(r.profile_matrix_builds, 1u);
  ASSERT_EQ(r.log.size(), 1u);
  EXPECT_EQ(r.log[0].phase, EncoderSide::kDocument);
}

TEST(TrainTest, ToyCorpusReachesFullAccuracy) {
  const Corpus c = testing::RandomCorpus(10, 6, 2);
  const TrainResult r = Train(c, ToyConfig(30));
  EXPECT_EQ(r.profile_matrix_builds, 25u);  // 30 epochs minus 5 profile epochs
  const ReidModel model(std::make_shared<const ModelParams>(r.params),
                        c.linearized_profiles());
  for (const auto& rec : c.records()) {
    const Distribution d = model.Predict(rec.document, MaskVector(rec.document.size()));
    EXPECT_EQ(RankOf(d, rec.profile_index), 1u) << rec.id;
  }
  EXPECT_LT(r.log.back().mean_loss, r.log.front().mean_loss);
}

TEST(TrainTest, ProfileMatrixMatchesParamsAfterTraining) {
  const Corpus c = testing::RandomCorpus(10, 6, 3);
  const TrainResult r = Train(c, ToyConfig(4));
  const ProfileMatrix g = BuildProfileMatrix(r.params, c.linearized_profiles());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const auto want = EncodeProfile(r.params, c.profiles()[i]);
    for (std::size_t k = 0; k < g.dim(); ++k) EXPECT_EQ(g.row(i)[k], want[k]);
  }
}

TEST(TrainTest, DeterministicCheckpoints) {
  const Corpus c = testing::RandomCorpus(12, 6, 4);
  TrainConfig cfg = ToyConfig(6);
  cfg.heldout_fraction = 0.2;
  const TrainResult a = Train(c, cfg);
  const TrainResult b = Train(c, cfg);
  EXPECT_EQ(SerializeCheckpoint(a.params), SerializeCheckpoint(b.params));
  ASSERT_TRUE(a.best.has_value());
  EXPECT_EQ(SerializeCheckpoint(*a.best), SerializeCheckpoint(*b.best));
  EXPECT_EQ(FormatTrainingLog(a.log), FormatTrainingLog(b.log));
  EXPECT_EQ(a.heldout_records, (std::vector<std::size_t>{10, 11}));
  cfg.seed = 1;
  EXPECT_NE(SerializeCheckpoint(Train(c, cfg).params), SerializeCheckpoint(a.params));
}

TEST(TrainTest, LogFormat) {
  const Corpus c = testing::RandomCorpus(10, 6, 5);
  const TrainResult r = Train(c, ToyConfig(2));
  const std::string csv = FormatTrainingLog(r.log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "epoch,phase,mean_loss,heldout_acc_0,heldout_acc_30,lr");
  EXPECT_NE(csv.find("\n1,profile,"), std::string::npos);
}

TEST(TrainTest, NeedsTwoProfiles) {
  const Corpus c = testing::RandomCorpus(1, 6, 6);
  EXPECT_THROW(Train(c, ToyConfig(1)), Error);
}

}  // namespace
}  // namespace textanon
