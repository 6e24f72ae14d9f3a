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

#include "textanon/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "textanon/error.hpp"

namespace textanon {

ModelParams ModelParams::Initialize(Vocabulary vocab, const ModelShape& shape,
                                    std::uint64_t seed) {
  if (shape.embedding_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
  }
  if (!(shape.label_smoothing >= 0.0 && shape.label_smoothing < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "label smoothing must lie in [0, 1)");
  }
  ModelParams p;
  p.vocab = std::move(vocab);
  p.dim = shape.embedding_dim;
  p.input_dim = shape.input_dim == 0 ? shape.embedding_dim : shape.input_dim;
  p.label_smoothing = shape.label_smoothing;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> word(0.0, 1.0 / std::sqrt(p.input_dim));
  p.embeddings.resize(p.vocab.rows() * p.input_dim);
  for (auto& v : p.embeddings) v = static_cast<float>(word(rng));
  std::fill(p.EmbeddingRow(p.vocab.pad_index()).begin(),
            p.EmbeddingRow(p.vocab.pad_index()).end(), 0.0f);

  std::normal_distribution<double> jitter(0.0, 0.01);
  auto init_projection = [&](std::vector<float>& m) {
    m.resize(p.input_dim * p.dim);
    for (std::size_t i = 0; i < p.input_dim; ++i) {
      for (std::size_t k = 0; k < p.dim; ++k) {
        m[i * p.dim + k] =
            static_cast<float>((i == k ? 1.0 : 0.0) + jitter(rng));
      }
    }
  };
  init_projection(p.doc_projection);
  init_projection(p.profile_projection);
  return p;
}

void ModelParams::Validate() const {
  if (dim == 0 || input_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "model dimensions must be >= 1");
  }
  if (embeddings.size() != vocab.rows() * input_dim ||
      doc_projection.size() != input_dim * dim ||
      profile_projection.size() != input_dim * dim) {
    throw Error(ErrorCode::kInvalidArgument, "model array sizes inconsistent");
  }
  if (!(label_smoothing >= 0.0 && label_smoothing < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "label smoothing must lie in [0, 1)");
  }
  auto finite = [](const std::vector<float>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](float x) { return std::isfinite(x); });
  };
  if (!finite(embeddings) || !finite(doc_projection) ||
      !finite(profile_projection)) {
    throw Error(ErrorCode::kNumeric, "model parameters contain non-finite values");
  }
}

std::vector<std::uint32_t> TokenRows(const ModelParams& params,
                                     const Document& document) {
  std::vector<std::uint32_t> rows;
  rows.reserve(document.size());
  for (const auto& t : document.tokens) {
    rows.push_back(static_cast<std::uint32_t>(params.vocab.IndexOf(t.normalized)));
  }
  return rows;
}

Embedding MeanEmbedding(const ModelParams& params,
                        std::span<const std::uint32_t> rows,
                        const MaskVector* mask) {
  Embedding mean(params.input_dim, 0.0);
  if (rows.empty()) return mean;
  const std::size_t mask_row = params.vocab.mask_index();
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const std::size_t r = (mask && mask->test(n)) ? mask_row : rows[n];
    auto e = params.EmbeddingRow(r);
    for (std::size_t i = 0; i < params.input_dim; ++i) mean[i] += e[i];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (auto& v : mean) v *= inv;
  return mean;
}

Embedding Project(std::span<const float> projection, std::size_t input_dim,
                  std::size_t output_dim, std::span<const double> in) {
  Embedding out(output_dim, 0.0);
  for (std::size_t i = 0; i < input_dim; ++i) {
    const double x = in[i];
    if (x == 0.0) continue;
    const float* row = projection.data() + i * output_dim;
    for (std::size_t k = 0; k < output_dim; ++k) out[k] += x * row[k];
  }
  return out;
}

Embedding EncodeDocumentRows(const ModelParams& params,
                             std::span<const std::uint32_t> rows,
                             const MaskVector& mask) {
  if (mask.size() != rows.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask length " + std::to_string(mask.size()) +
                    " does not match document length " +
                    std::to_string(rows.size()));
  }
  Embedding mean = MeanEmbedding(params, rows, &mask);
  return Project(params.doc_projection, params.input_dim, params.dim, mean);
}

Embedding EncodeDocument(const ModelParams& params, const Document& document,
                         const MaskVector& mask) {
  return EncodeDocumentRows(params, TokenRows(params, document), mask);
}

Embedding EncodeLinearizedProfile(const ModelParams& params,
                                  const Document& linearized) {
  if (linearized.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty profile");
  }
  auto rows = TokenRows(params, linearized);
  Embedding mean = MeanEmbedding(params, rows, nullptr);
  return Project(params.profile_projection, params.input_dim, params.dim, mean);
}

Embedding EncodeProfile(const ModelParams& params, const Profile& profile) {
  return EncodeLinearizedProfile(params, LinearizeProfile(profile));
}

ProfileMatrix BuildProfileMatrix(const ModelParams& params,
                                 const std::vector<Document>& linearized) {
  ProfileMatrix g(linearized.size(), params.dim);
  for (std::size_t i = 0; i < linearized.size(); ++i) {
    auto emb = EncodeLinearizedProfile(params, linearized[i]);
    std::copy(emb.begin(), emb.end(), g.row(i).begin());
  }
  return g;
}

ProfileMatrix BuildProfileMatrix(const ModelParams& params,
                                 const std::vector<Profile>& profiles) {
  std::vector<Document> linearized;
  linearized.reserve(profiles.size());
  for (const auto& p : profiles) linearized.push_back(LinearizeProfile(p));
  return BuildProfileMatrix(params, linearized);
}

std::vector<double> Scores(std::span<const double> doc_embedding,
                           const ProfileMatrix& profiles) {
  if (doc_embedding.size() != profiles.dim()) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding width does not match profile matrix");
  }
  std::vector<double> s(profiles.rows());
  for (std::size_t i = 0; i < profiles.rows(); ++i) {
    auto g = profiles.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) acc += doc_embedding[k] * g[k];
    s[i] = acc;
  }
  return s;
}

Distribution Softmax(std::span<const double> scores) {
  Distribution d;
  d.probs.resize(scores.size());
  if (scores.empty()) return d;
  const double max = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    d.probs[i] = std::exp(scores[i] - max);
    total += d.probs[i];
  }
  for (auto& p : d.probs) p /= total;
  return d;
}

Distribution ScoreAndNormalize(std::span<const double> doc_embedding,
                               const ProfileMatrix& profiles) {
  return Softmax(Scores(doc_embedding, profiles));
}

std::size_t RankOf(std::span<const double> values, std::size_t true_index) {
  if (true_index >= values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "true index out of range");
  }
  const double v = values[true_index];
  std::size_t rank = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > v || (values[i] == v && i < true_index)) ++rank;
  }
  return rank;
}

ReidModel::ReidModel(std::shared_ptr<const ModelParams> params,
                     const std::vector<Document>& linearized_profiles)
    : params_(std::move(params)),
      profiles_(BuildProfileMatrix(*params_, linearized_profiles)) {}

Distribution ReidModel::Predict(const Document& document,
                                const MaskVector& mask) const {
  return ScoreAndNormalize(EncodeDocument(*params_, document, mask), profiles_);
}

Distribution ReidModel::PredictRows(std::span<const std::uint32_t> rows,
                                    const MaskVector& mask) const {
  return ScoreAndNormalize(EncodeDocumentRows(*params_, rows, mask), profiles_);
}

}  // namespace textanon
