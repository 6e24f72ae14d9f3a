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

// Bi-encoder reidentification model.
//
// A document x under mask z is encoded as f(x, z) = Pdᵀ · mean_n e(x_n, z_n)
// where e is the word embedding of x_n, or the mask-symbol embedding when
// z_n = 1. A profile y is encoded as g(y) = Ppᵀ · mean of the embeddings of
// its linearized tokens. Profiles are stacked into G and the model predicts
// p(y | x, z) = softmax(f(x, z)ᵀ G).

#ifndef TEXTANON_ENCODER_HPP_
#define TEXTANON_ENCODER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textanon/corpus.hpp"

namespace textanon {

inline constexpr std::string_view kCheckpointVersion = "textanon-biencoder-1";
inline constexpr std::size_t kDefaultEmbeddingDim = 64;

struct ModelShape {
  std::size_t embedding_dim = kDefaultEmbeddingDim;  // d
  // Width of the word embeddings before projection; 0 means "same as d".
  std::size_t input_dim = 0;
  double label_smoothing = 0.1;
};

struct ModelParams {
  Vocabulary vocab;
  std::size_t input_dim = 0;  // d_in
  std::size_t dim = 0;        // d
  double label_smoothing = 0.0;
  std::string version{kCheckpointVersion};

  // vocab.rows() x input_dim, row-major. Row vocab.mask_index() holds the
  // mask symbol and row vocab.pad_index() is reserved padding.
  std::vector<float> embeddings;
  // input_dim x dim, row-major.
  std::vector<float> doc_projection;
  std::vector<float> profile_projection;

  // Word embeddings ~ N(0, 1/d_in); both projections start at the
  // rectangular identity plus N(0, 0.01²) noise.
  static ModelParams Initialize(Vocabulary vocab, const ModelShape& shape,
                                std::uint64_t seed);

  std::span<const float> EmbeddingRow(std::size_t row) const {
    return {embeddings.data() + row * input_dim, input_dim};
  }
  std::span<float> EmbeddingRow(std::size_t row) {
    return {embeddings.data() + row * input_dim, input_dim};
  }

  // Throws kNumeric on NaN/inf or kInvalidArgument on inconsistent sizes.
  void Validate() const;
};

// Embedding-table rows for each token.
std::vector<std::uint32_t> TokenRows(const ModelParams& params,
                                     const Document& document);

using Embedding = std::vector<double>;

// Mean of the embedding rows, with masked positions replaced by the mask row.
Embedding MeanEmbedding(const ModelParams& params,
                        std::span<const std::uint32_t> rows,
                        const MaskVector* mask);
// out[k] = Σ_i in[i] · projection[i, k].
Embedding Project(std::span<const float> projection, std::size_t input_dim,
                  std::size_t output_dim, std::span<const double> in);

Embedding EncodeDocument(const ModelParams& params, const Document& document,
                         const MaskVector& mask);
Embedding EncodeDocumentRows(const ModelParams& params,
                             std::span<const std::uint32_t> rows,
                             const MaskVector& mask);
Embedding EncodeProfile(const ModelParams& params, const Profile& profile);
Embedding EncodeLinearizedProfile(const ModelParams& params,
                                  const Document& linearized);

class ProfileMatrix {
 public:
  ProfileMatrix() = default;
  ProfileMatrix(std::size_t rows, std::size_t dim)
      : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

ProfileMatrix BuildProfileMatrix(const ModelParams& params,
                                 const std::vector<Profile>& profiles);
ProfileMatrix BuildProfileMatrix(const ModelParams& params,
                                 const std::vector<Document>& linearized);

struct Distribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

std::vector<double> Scores(std::span<const double> doc_embedding,
                           const ProfileMatrix& profiles);
// Max-subtracted softmax.
Distribution Softmax(std::span<const double> scores);
Distribution ScoreAndNormalize(std::span<const double> doc_embedding,
                               const ProfileMatrix& profiles);

// 1 + #{i : p_i > p_true} + #{i < true : p_i == p_true}.
std::size_t RankOf(std::span<const double> values, std::size_t true_index);
inline std::size_t RankOf(const Distribution& d, std::size_t true_index) {
  return RankOf(d.probs, true_index);
}

// Trained parameters bundled with the profile matrix they score against.
class ReidModel {
 public:
  ReidModel(std::shared_ptr<const ModelParams> params,
            const std::vector<Document>& linearized_profiles);

  const ModelParams& params() const { return *params_; }
  const ProfileMatrix& profile_matrix() const { return profiles_; }
  std::size_t profile_count() const { return profiles_.rows(); }

  Distribution Predict(const Document& document, const MaskVector& mask) const;
  Distribution PredictRows(std::span<const std::uint32_t> rows,
                           const MaskVector& mask) const;

 private:
  std::shared_ptr<const ModelParams> params_;
  ProfileMatrix profiles_;
};

// JSON header line, then raw little-endian float32 arrays.
void SaveCheckpoint(const ModelParams& params, const std::filesystem::path& path);
std::string SerializeCheckpoint(const ModelParams& params);
ModelParams LoadCheckpoint(const std::filesystem::path& path);
ModelParams DeserializeCheckpoint(std::string_view bytes);

}  // namespace textanon

#endif  // TEXTANON_ENCODER_HPP_
