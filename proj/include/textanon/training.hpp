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

// Training of the bi-encoder with random-mask word dropout, label smoothing
// and coordinate ascent between the document and profile encoders.
//
// The embedding table is shared by both encoders. A document-encoder step
// updates the table and the document projection against a fixed profile
// matrix; a profile-encoder step updates the table and the profile projection
// with the document embeddings held fixed and the profile matrix recomputed
// from the live parameters.

#ifndef TEXTANON_TRAINING_HPP_
#define TEXTANON_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/encoder.hpp"

namespace textanon {

enum class MaskPrior { kUniformCount, kIdfWeighted, kOff };

MaskPrior ParseMaskPrior(std::string_view name);
const char* MaskPriorName(MaskPrior prior);

enum class EncoderSide { kDocument, kProfile };

enum class Optimizer { kSgd, kAdam };

Optimizer ParseOptimizer(std::string_view name);
const char* OptimizerName(Optimizer optimizer);

const char* EncoderSideName(EncoderSide side);

struct TrainConfig {
  std::size_t epochs = 60;
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 0.05;
  double clip_norm = 5.0;
  double label_smoothing = 0.1;
  MaskPrior mask_prior = MaskPrior::kUniformCount;
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::uint64_t seed = 0;
  // Profile-encoder epochs run on odd epoch indices until this many are spent.
  std::size_t profile_epochs = 5;
  std::size_t warmup_epochs = 2;
  // Learning rate decays linearly to learning_rate * final_lr_fraction.
  double final_lr_fraction = 0.1;
  std::size_t batch_size = 32;
  std::size_t hash_buckets = kDefaultHashBuckets;
  // Trailing fraction of the records kept out of training for monitoring.
  double heldout_fraction = 0.05;
  double heldout_mask_fraction = 0.3;

  // Throws kInvalidArgument on out-of-range values.
  void Validate() const;
};

// Which encoder trains in epoch `epoch` (0-based).
EncoderSide PhaseForEpoch(std::size_t epoch, const TrainConfig& config);

// Draws l ~ Uniform{0..N} and then l distinct positions. Under kIdfWeighted
// positions are drawn without replacement with probability proportional to
// `idf_weights`; under kOff the mask is empty.
MaskVector SampleMask(std::mt19937_64& rng, std::size_t length, MaskPrior prior,
                      std::span<const double> idf_weights = {});
// Same, with the mask size fixed to `count`.
MaskVector SampleMaskOfSize(std::mt19937_64& rng, std::size_t length,
                            std::size_t count, MaskPrior prior,
                            std::span<const double> idf_weights = {});

// (1 - α) · one_hot(true_index) + α · uniform.
std::vector<double> SmoothedTargets(std::size_t true_index,
                                    std::size_t num_classes, double alpha);

inline constexpr double kProbabilityFloor = 1e-12;

struct LossValue {
  double value = 0.0;
  // Set when a supported target index had probability below the floor.
  bool clamped = false;
};

// H(target, distribution) = -Σ target_i · ln p_i.
LossValue CrossEntropy(const Distribution& distribution,
                       std::span<const double> target);

struct TrainingExample {
  std::vector<std::uint32_t> rows;
  MaskVector mask;
  std::size_t target = 0;
  // Unmasked document embedding used by profile-encoder steps; computed from
  // the current parameters when empty.
  Embedding frozen;
};

// Sparse over embedding rows, dense over the projections. A projection
// gradient is empty when its encoder was not selected.
struct Gradients {
  std::map<std::uint32_t, std::vector<double>> embedding_rows;
  std::vector<double> doc_projection;
  std::vector<double> profile_projection;

  double SquaredNorm() const;
  void Scale(double factor);
};

struct BatchLoss {
  double loss = 0.0;
  bool clamped = false;
};

// Mean smoothed cross-entropy over the batch and, when `grads` is non-null,
// its analytic gradient with respect to the selected encoder.
//
// kDocument: documents are encoded under their masks and scored against the
// fixed `profile_matrix`.
// kProfile: documents are encoded unmasked and held fixed; the profile matrix
// is recomputed from `profile_rows` under the current parameters.
BatchLoss BatchObjective(const ModelParams& params,
                         std::span<const TrainingExample> batch,
                         const std::vector<std::vector<std::uint32_t>>& profile_rows,
                         const ProfileMatrix& profile_matrix, EncoderSide side,
                         Gradients* grads);

struct StepResult {
  double loss = 0.0;
  double grad_norm = 0.0;     // before clipping
  double clipped_norm = 0.0;  // after clipping
  bool clamped = false;
};

// One clipped SGD update. Throws kNumeric when the loss is not finite.
// Adam moments. Embedding rows keep moments only once touched and are
// updated only when they receive gradient (lazy Adam).
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::map<std::uint32_t, std::vector<double>> row_m;
  std::map<std::uint32_t, std::vector<double>> row_v;
  std::vector<double> doc_m, doc_v, profile_m, profile_v;
};

// Plain SGD when `adam` is null.
StepResult GradStep(ModelParams& params, std::span<const TrainingExample> batch,
                    const std::vector<std::vector<std::uint32_t>>& profile_rows,
                    const ProfileMatrix& profile_matrix, EncoderSide side,
                    double learning_rate, double clip_norm,
                    AdamState* adam = nullptr);

struct EpochLog {
  std::size_t epoch = 0;
  EncoderSide phase = EncoderSide::kDocument;
  double mean_loss = 0.0;
  double heldout_acc_0 = 0.0;
  double heldout_acc_30 = 0.0;
  double learning_rate = 0.0;
};

struct TrainResult {
  ModelParams params;
  // Parameters at the best held-out masked accuracy; empty when nothing was
  // held out.
  std::optional<ModelParams> best;
  std::vector<EpochLog> log;
  std::vector<std::size_t> heldout_records;
  // Profile-matrix rebuilds performed for document-encoder epochs.
  std::size_t profile_matrix_builds = 0;
};

// Learning rate at global step `step`: linear warmup from 0, then linear decay.
double ScheduledLearningRate(const TrainConfig& config, std::size_t step,
                             std::size_t steps_per_epoch);

// Requires at least two profiles.
TrainResult Train(const Corpus& corpus, const TrainConfig& config);

// Columns: epoch,phase,mean_loss,heldout_acc_0,heldout_acc_30,lr.
void WriteTrainingLog(const std::vector<EpochLog>& log,
                      const std::filesystem::path& path);
std::string FormatTrainingLog(const std::vector<EpochLog>& log);

}  // namespace textanon

#endif  // TEXTANON_TRAINING_HPP_
