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

#include "textanon/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "textanon/error.hpp"

namespace textanon {
namespace {

void AddScaled(std::vector<double>& dst, std::span<const double> src,
               double scale) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] += scale * src[i];
}

std::vector<double>& SparseRow(Gradients& g, std::uint32_t row,
                               std::size_t width) {
  auto it = g.embedding_rows.find(row);
  if (it == g.embedding_rows.end()) {
    it = g.embedding_rows.emplace(row, std::vector<double>(width, 0.0)).first;
  }
  return it->second;
}

// dm[j] = Σ_k P[j, k] · dout[k].
std::vector<double> BackProject(const std::vector<float>& projection,
                                std::size_t input_dim, std::size_t output_dim,
                                std::span<const double> dout) {
  std::vector<double> dm(input_dim, 0.0);
  for (std::size_t j = 0; j < input_dim; ++j) {
    const float* row = projection.data() + j * output_dim;
    double acc = 0.0;
    for (std::size_t k = 0; k < output_dim; ++k) acc += row[k] * dout[k];
    dm[j] = acc;
  }
  return dm;
}

// dP[j, k] += m[j] · dout[k].
void AccumulateOuter(std::vector<double>& dp, std::span<const double> m,
                     std::span<const double> dout) {
  const std::size_t out = dout.size();
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0.0) continue;
    double* row = dp.data() + j * out;
    for (std::size_t k = 0; k < out; ++k) row[k] += m[j] * dout[k];
  }
}

void ScatterToRows(Gradients& g, std::span<const std::uint32_t> rows,
                   const MaskVector* mask, std::uint32_t mask_row,
                   std::span<const double> dmean) {
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const std::uint32_t r = (mask && mask->test(n)) ? mask_row : rows[n];
    AddScaled(SparseRow(g, r, dmean.size()), dmean, inv);
  }
}

void ApplyUpdate(std::vector<float>& dst, const std::vector<double>& grad,
                 double lr) {
  for (std::size_t i = 0; i < grad.size(); ++i) {
    dst[i] = static_cast<float>(static_cast<double>(dst[i]) - lr * grad[i]);
  }
}

// One Adam update of `dst` in place; m and v are grown to size on first use.
void AdamUpdate(std::span<float> dst, std::span<const double> grad,
                std::vector<double>& m, std::vector<double>& v,
                const AdamState& state, double lr) {
  if (m.size() != grad.size()) {
    m.assign(grad.size(), 0.0);
    v.assign(grad.size(), 0.0);
  }
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
    v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double step = lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + state.epsilon);
    dst[i] = static_cast<float>(static_cast<double>(dst[i]) - step);
  }
}

double Accuracy(const ModelParams& params,
                const std::vector<Document>& linearized,
                const std::vector<TrainingExample>& examples, bool masked) {
  if (examples.empty()) return std::nan("");
  const ProfileMatrix g = BuildProfileMatrix(params, linearized);
  std::size_t hits = 0;
  for (const auto& ex : examples) {
    const MaskVector none(ex.rows.size());
    const auto dist = ScoreAndNormalize(
        EncodeDocumentRows(params, ex.rows, masked ? ex.mask : none), g);
    if (RankOf(dist, ex.target) == 1) ++hits;
  }
  return 100.0 * static_cast<double>(hits) /
         static_cast<double>(examples.size());
}

}  // namespace

MaskPrior ParseMaskPrior(std::string_view name) {
  if (name == "uniform") return MaskPrior::kUniformCount;
  if (name == "idf") return MaskPrior::kIdfWeighted;
  if (name == "off") return MaskPrior::kOff;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mask prior '" + std::string(name) + "'");
}

const char* MaskPriorName(MaskPrior prior) {
  switch (prior) {
    case MaskPrior::kUniformCount:
      return "uniform";
    case MaskPrior::kIdfWeighted:
      return "idf";
    case MaskPrior::kOff:
      return "off";
  }
  return "uniform";
}

Optimizer ParseOptimizer(std::string_view name) {
  if (name == "sgd") return Optimizer::kSgd;
  if (name == "adam") return Optimizer::kAdam;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown optimizer '" + std::string(name) + "'");
}

const char* OptimizerName(Optimizer optimizer) {
  return optimizer == Optimizer::kSgd ? "sgd" : "adam";
}

const char* EncoderSideName(EncoderSide side) {
  return side == EncoderSide::kDocument ? "doc" : "profile";
}

void TrainConfig::Validate() const {
  auto bad = [](const std::string& what) {
    return Error(ErrorCode::kInvalidArgument, what);
  };
  if (epochs < 1) throw bad("epochs must be >= 1");
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw bad("gradient clip norm must be > 0");
  }
  if (!(label_smoothing >= 0.0 && label_smoothing < 1.0)) {
    throw bad("label smoothing must lie in [0, 1)");
  }
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw bad("learning rate must be >= 0");
  }
  if (embedding_dim < 1) throw bad("embedding dim must be >= 1");
  if (batch_size < 1) throw bad("batch size must be >= 1");
  if (hash_buckets < 1) throw bad("hash bucket count must be >= 1");
  if (!(heldout_fraction >= 0.0 && heldout_fraction < 1.0)) {
    throw bad("held-out fraction must lie in [0, 1)");
  }
  if (!(heldout_mask_fraction >= 0.0 && heldout_mask_fraction <= 1.0)) {
    throw bad("held-out mask fraction must lie in [0, 1]");
  }
  if (!(final_lr_fraction >= 0.0 && final_lr_fraction <= 1.0)) {
    throw bad("final learning-rate fraction must lie in [0, 1]");
  }
}

EncoderSide PhaseForEpoch(std::size_t epoch, const TrainConfig& config) {
  if (epoch % 2 == 1 && (epoch + 1) / 2 <= config.profile_epochs) {
    return EncoderSide::kProfile;
  }
  return EncoderSide::kDocument;
}

MaskVector SampleMaskOfSize(std::mt19937_64& rng, std::size_t length,
                            std::size_t count, MaskPrior prior,
                            std::span<const double> idf_weights) {
  MaskVector mask(length);
  if (prior == MaskPrior::kOff) return mask;
  count = std::min(count, length);
  if (prior == MaskPrior::kIdfWeighted) {
    if (idf_weights.size() != length) {
      throw Error(ErrorCode::kInvalidArgument,
                  "idf weights must match the document length");
    }
    std::vector<double> w(idf_weights.begin(), idf_weights.end());
    for (std::size_t drawn = 0; drawn < count; ++drawn) {
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      if (total <= 0.0) {
        // Only zero-weight positions remain; draw among them uniformly.
        for (std::size_t i = 0; i < length; ++i) w[i] = mask.test(i) ? 0.0 : 1.0;
      }
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      const std::size_t i = pick(rng);
      mask.set(i);
      w[i] = 0.0;
    }
    return mask;
  }
  // Partial Fisher-Yates over positions.
  std::vector<std::size_t> positions(length);
  std::iota(positions.begin(), positions.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, length - 1);
    std::swap(positions[i], positions[pick(rng)]);
    mask.set(positions[i]);
  }
  return mask;
}

MaskVector SampleMask(std::mt19937_64& rng, std::size_t length, MaskPrior prior,
                      std::span<const double> idf_weights) {
  if (prior == MaskPrior::kOff) return MaskVector(length);
  std::uniform_int_distribution<std::size_t> size(0, length);
  return SampleMaskOfSize(rng, length, size(rng), prior, idf_weights);
}

std::vector<double> SmoothedTargets(std::size_t true_index,
                                    std::size_t num_classes, double alpha) {
  if (num_classes < 1 || true_index >= num_classes) {
    throw Error(ErrorCode::kInvalidArgument, "target index out of range");
  }
  std::vector<double> t(num_classes, alpha / static_cast<double>(num_classes));
  t[true_index] += 1.0 - alpha;
  return t;
}

LossValue CrossEntropy(const Distribution& distribution,
                       std::span<const double> target) {
  if (distribution.size() != target.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "distribution and target lengths differ");
  }
  LossValue out;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0.0) continue;
    double p = distribution[i];
    if (p < kProbabilityFloor) {
      p = kProbabilityFloor;
      out.clamped = true;
    }
    out.value -= target[i] * std::log(p);
  }
  return out;
}

double Gradients::SquaredNorm() const {
  double s = 0.0;
  for (const auto& [row, g] : embedding_rows) {
    for (double v : g) s += v * v;
  }
  for (double v : doc_projection) s += v * v;
  for (double v : profile_projection) s += v * v;
  return s;
}

void Gradients::Scale(double factor) {
  for (auto& [row, g] : embedding_rows) {
    for (double& v : g) v *= factor;
  }
  for (double& v : doc_projection) v *= factor;
  for (double& v : profile_projection) v *= factor;
}

BatchLoss BatchObjective(const ModelParams& params,
                         std::span<const TrainingExample> batch,
                         const std::vector<std::vector<std::uint32_t>>& profile_rows,
                         const ProfileMatrix& profile_matrix, EncoderSide side,
                         Gradients* grads) {
  BatchLoss out;
  if (batch.empty()) return out;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const auto mask_row = static_cast<std::uint32_t>(params.vocab.mask_index());
  if (grads) *grads = Gradients{};

  if (side == EncoderSide::kDocument) {
    if (profile_matrix.dim() != params.dim || profile_matrix.rows() < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "document-encoder step needs a fixed profile matrix");
    }
    if (grads) grads->doc_projection.assign(params.input_dim * params.dim, 0.0);
    const std::size_t classes = profile_matrix.rows();
    for (const auto& ex : batch) {
      const Embedding mean = MeanEmbedding(params, ex.rows, &ex.mask);
      const Embedding f =
          Project(params.doc_projection, params.input_dim, params.dim, mean);
      const Distribution p = ScoreAndNormalize(f, profile_matrix);
      const auto t = SmoothedTargets(ex.target, classes, params.label_smoothing);
      const LossValue l = CrossEntropy(p, t);
      out.loss += l.value * inv_batch;
      out.clamped |= l.clamped;
      if (!grads) continue;
      std::vector<double> df(params.dim, 0.0);
      for (std::size_t i = 0; i < classes; ++i) {
        const double ds = (p[i] - t[i]) * inv_batch;
        if (ds != 0.0) AddScaled(df, profile_matrix.row(i), ds);
      }
      AccumulateOuter(grads->doc_projection, mean, df);
      const auto dmean =
          BackProject(params.doc_projection, params.input_dim, params.dim, df);
      ScatterToRows(*grads, ex.rows, &ex.mask, mask_row, dmean);
    }
    return out;
  }

  // Profile encoder: live profile matrix, fixed unmasked document embeddings.
  const std::size_t classes = profile_rows.size();
  if (classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "profile-encoder step needs profiles");
  }
  std::vector<Embedding> profile_means(classes);
  ProfileMatrix g(classes, params.dim);
  for (std::size_t i = 0; i < classes; ++i) {
    profile_means[i] = MeanEmbedding(params, profile_rows[i], nullptr);
    const auto gi = Project(params.profile_projection, params.input_dim,
                            params.dim, profile_means[i]);
    std::copy(gi.begin(), gi.end(), g.row(i).begin());
  }
  ProfileMatrix dg(classes, params.dim);
  for (const auto& ex : batch) {
    const Embedding f =
        !ex.frozen.empty()
            ? ex.frozen
            : Project(params.doc_projection, params.input_dim, params.dim,
                      MeanEmbedding(params, ex.rows, nullptr));
    const Distribution p = ScoreAndNormalize(f, g);
    const auto t = SmoothedTargets(ex.target, classes, params.label_smoothing);
    const LossValue l = CrossEntropy(p, t);
    out.loss += l.value * inv_batch;
    out.clamped |= l.clamped;
    if (!grads) continue;
    for (std::size_t i = 0; i < classes; ++i) {
      const double ds = (p[i] - t[i]) * inv_batch;
      auto row = dg.row(i);
      for (std::size_t k = 0; k < params.dim; ++k) row[k] += ds * f[k];
    }
  }
  if (!grads) return out;
  grads->profile_projection.assign(params.input_dim * params.dim, 0.0);
  for (std::size_t i = 0; i < classes; ++i) {
    AccumulateOuter(grads->profile_projection, profile_means[i], dg.row(i));
    const auto dmean = BackProject(params.profile_projection, params.input_dim,
                                   params.dim, dg.row(i));
    ScatterToRows(*grads, profile_rows[i], nullptr, mask_row, dmean);
  }
  return out;
}

StepResult GradStep(ModelParams& params, std::span<const TrainingExample> batch,
                    const std::vector<std::vector<std::uint32_t>>& profile_rows,
                    const ProfileMatrix& profile_matrix, EncoderSide side,
                    double learning_rate, double clip_norm, AdamState* adam) {
  Gradients grads;
  const BatchLoss bl =
      BatchObjective(params, batch, profile_rows, profile_matrix, side, &grads);
  if (!std::isfinite(bl.loss)) {
    throw Error(ErrorCode::kNumeric,
                std::string("non-finite loss in ") + EncoderSideName(side) +
                    "-encoder step (batch of " + std::to_string(batch.size()) +
                    ", lr " + std::to_string(learning_rate) + ")");
  }
  StepResult r;
  r.loss = bl.loss;
  r.clamped = bl.clamped;
  r.grad_norm = std::sqrt(grads.SquaredNorm());
  if (!std::isfinite(r.grad_norm)) {
    throw Error(ErrorCode::kNumeric, "non-finite gradient norm");
  }
  if (r.grad_norm > clip_norm) grads.Scale(clip_norm / r.grad_norm);
  r.clipped_norm = std::min(r.grad_norm, clip_norm);
  if (learning_rate == 0.0) return r;

  if (adam != nullptr) {
    ++adam->step;
    for (const auto& [row, g] : grads.embedding_rows) {
      AdamUpdate(params.EmbeddingRow(row), g, adam->row_m[row], adam->row_v[row],
                 *adam, learning_rate);
    }
    if (!grads.doc_projection.empty()) {
      AdamUpdate(params.doc_projection, grads.doc_projection, adam->doc_m,
                 adam->doc_v, *adam, learning_rate);
    }
    if (!grads.profile_projection.empty()) {
      AdamUpdate(params.profile_projection, grads.profile_projection,
                 adam->profile_m, adam->profile_v, *adam, learning_rate);
    }
    return r;
  }
  for (const auto& [row, g] : grads.embedding_rows) {
    auto dst = params.EmbeddingRow(row);
    for (std::size_t i = 0; i < g.size(); ++i) {
      dst[i] = static_cast<float>(static_cast<double>(dst[i]) - learning_rate * g[i]);
    }
  }
  ApplyUpdate(params.doc_projection, grads.doc_projection, learning_rate);
  ApplyUpdate(params.profile_projection, grads.profile_projection, learning_rate);
  return r;
}

double ScheduledLearningRate(const TrainConfig& config, std::size_t step,
                             std::size_t steps_per_epoch) {
  const std::size_t total = config.epochs * steps_per_epoch;
  const std::size_t warmup =
      std::min(config.warmup_epochs * steps_per_epoch, total);
  const double base = config.learning_rate;
  if (step < warmup) {
    return base * static_cast<double>(step + 1) / static_cast<double>(warmup);
  }
  const std::size_t decay_steps = total - warmup;
  if (decay_steps <= 1) return base;
  const double progress = static_cast<double>(step - warmup) /
                          static_cast<double>(decay_steps - 1);
  return base * (1.0 - (1.0 - config.final_lr_fraction) * std::min(progress, 1.0));
}

TrainResult Train(const Corpus& corpus, const TrainConfig& config) {
  config.Validate();
  if (corpus.profiles().size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "training needs at least 2 profiles");
  }
  const auto& records = corpus.records();
  const std::size_t heldout_count = static_cast<std::size_t>(
      std::floor(config.heldout_fraction * static_cast<double>(records.size())));
  const std::size_t train_count = records.size() - heldout_count;
  if (train_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "no training records remain");
  }

  TrainResult result;
  ModelShape shape;
  shape.embedding_dim = config.embedding_dim;
  shape.label_smoothing = config.label_smoothing;
  result.params = ModelParams::Initialize(
      Vocabulary::Build(corpus, config.hash_buckets), shape,
      config.seed ^ 0x9E3779B97F4A7C15ULL);
  ModelParams& params = result.params;

  std::vector<std::vector<std::uint32_t>> profile_rows;
  profile_rows.reserve(corpus.profiles().size());
  for (const auto& d : corpus.linearized_profiles()) {
    profile_rows.push_back(TokenRows(params, d));
  }

  std::vector<std::vector<std::uint32_t>> record_rows;
  std::vector<std::vector<double>> idf_weights;
  std::optional<IdfTable> idf;
  if (config.mask_prior == MaskPrior::kIdfWeighted) idf = IdfTable::FromCorpus(corpus);
  for (const auto& r : records) {
    record_rows.push_back(TokenRows(params, r.document));
    if (idf) {
      std::vector<double> w;
      for (const auto& t : r.document.tokens) w.push_back(idf->Idf(t.normalized));
      idf_weights.push_back(std::move(w));
    }
  }

  std::vector<TrainingExample> heldout;
  {
    std::mt19937_64 eval_rng(config.seed + 1);
    for (std::size_t i = train_count; i < records.size(); ++i) {
      result.heldout_records.push_back(i);
      TrainingExample ex;
      ex.rows = record_rows[i];
      ex.target = records[i].profile_index;
      const auto n = ex.rows.size();
      const auto count = static_cast<std::size_t>(
          std::lround(config.heldout_mask_fraction * static_cast<double>(n)));
      ex.mask = SampleMaskOfSize(eval_rng, n, count, MaskPrior::kUniformCount);
      heldout.push_back(std::move(ex));
    }
  }

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_count);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t steps_per_epoch =
      (train_count + config.batch_size - 1) / config.batch_size;
  std::size_t step = 0;
  double best_acc = -1.0;
  const ProfileMatrix no_matrix;
  AdamState adam;
  AdamState* optimizer_state =
      config.optimizer == Optimizer::kAdam ? &adam : nullptr;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const EncoderSide side = PhaseForEpoch(epoch, config);
    std::shuffle(order.begin(), order.end(), rng);
    ProfileMatrix fixed;
    if (side == EncoderSide::kDocument) {
      fixed = BuildProfileMatrix(params, corpus.linearized_profiles());
      ++result.profile_matrix_builds;
    }
    double loss_sum = 0.0;
    double lr = 0.0;
    std::vector<TrainingExample> batch;
    for (std::size_t start = 0; start < train_count; start += config.batch_size) {
      batch.clear();
      const std::size_t end = std::min(start + config.batch_size, train_count);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        TrainingExample ex;
        ex.rows = record_rows[i];
        ex.target = records[i].profile_index;
        if (side == EncoderSide::kDocument) {
          ex.mask = SampleMask(rng, ex.rows.size(), config.mask_prior,
                               idf ? std::span<const double>(idf_weights[i])
                                   : std::span<const double>());
        } else {
          ex.mask = MaskVector(ex.rows.size());
        }
        batch.push_back(std::move(ex));
      }
      lr = ScheduledLearningRate(config, step++, steps_per_epoch);
      const StepResult r =
          GradStep(params, batch, profile_rows,
                   side == EncoderSide::kDocument ? fixed : no_matrix, side, lr,
                   config.clip_norm, optimizer_state);
      loss_sum += r.loss * static_cast<double>(batch.size());
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.phase = side;
    entry.mean_loss = loss_sum / static_cast<double>(train_count);
    entry.learning_rate = lr;
    entry.heldout_acc_0 =
        Accuracy(params, corpus.linearized_profiles(), heldout, false);
    entry.heldout_acc_30 =
        Accuracy(params, corpus.linearized_profiles(), heldout, true);
    result.log.push_back(entry);
    if (!heldout.empty() && entry.heldout_acc_30 > best_acc) {
      best_acc = entry.heldout_acc_30;
      result.best = params;
    }
  }
  params.Validate();
  return result;
}

std::string FormatTrainingLog(const std::vector<EpochLog>& log) {
  std::string out = "epoch,phase,mean_loss,heldout_acc_0,heldout_acc_30,lr\n";
  char line[256];
  for (const auto& e : log) {
    std::snprintf(line, sizeof(line), "%zu,%s,%.6f,%.4f,%.4f,%.8g\n", e.epoch,
                  EncoderSideName(e.phase), e.mean_loss, e.heldout_acc_0,
                  e.heldout_acc_30, e.learning_rate);
    out += line;
  }
  return out;
}

void WriteTrainingLog(const std::vector<EpochLog>& log,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write training log: " + path.string());
  }
  out << FormatTrainingLog(log);
}

}  // namespace textanon
