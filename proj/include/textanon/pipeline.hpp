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

// End-to-end runs over corpus files: the layer shared by the C API and the
// command-line tool. Options arrive as JSON objects whose keys mirror the CLI
// flags (underscores instead of dashes); unknown keys are rejected.

#ifndef TEXTANON_PIPELINE_HPP_
#define TEXTANON_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/deid.hpp"
#include "textanon/encoder.hpp"
#include "textanon/metrics.hpp"
#include "textanon/records_io.hpp"
#include "textanon/reid.hpp"
#include "textanon/training.hpp"

namespace textanon {

// {"records", "profiles", "vocabulary_size", "idf_documents", "tokens",
//  "mean_document_length", "mean_profile_length", "idf_min", "idf_max",
//  "idf_mean"}
std::string CorpusStatsJson(const Corpus& corpus);

// Keys: epochs, lr, clip_norm, alpha, mask_prior, embed_dim, seed,
// profile_epochs, warmup_epochs, batch_size, hash_buckets, heldout_fraction.
TrainConfig ParseTrainConfig(std::string_view json);

// Trains, then writes the final parameters to `checkpoint`, the best held-out
// parameters to `checkpoint` + ".best" (when a held-out split exists) and the
// per-epoch log to `log` (skipped when empty).
TrainResult TrainAndSave(const Corpus& corpus, const TrainConfig& config,
                         const std::filesystem::path& checkpoint,
                         const std::filesystem::path& log);

struct RedactionRun {
  MethodConfig method;
  MaskMode mode = MaskMode::kReplace;
  std::size_t offset = 0;
  std::size_t limit = std::numeric_limits<std::size_t>::max();
};

// Keys: method, k, beam_width, idf_threshold, include_stopwords, mask_mode,
// offset, limit.
RedactionRun ParseRedactionRun(std::string_view json);

// Indices of records [offset, offset + limit) clipped to the corpus.
std::vector<std::size_t> SelectRecords(const Corpus& corpus, std::size_t offset,
                                       std::size_t limit);

struct RedactionOutput {
  std::string redacted_jsonl;
  std::string sidecar_jsonl;
  std::vector<RedactionResult> results;
};

// `guide` may be null for baselines; `tags` overrides the rule tagger.
RedactionOutput RunRedaction(
    const Corpus& corpus, std::shared_ptr<const ModelParams> guide,
    const RedactionRun& run,
    const std::unordered_map<std::string, std::vector<EntityTag>>* tags =
        nullptr);

// Neural members named after the checkpoint file name, plus "bm25".
std::vector<std::unique_ptr<Reidentifier>> BuildEnsemble(
    const Corpus& corpus, const std::vector<std::filesystem::path>& checkpoints,
    bool bm25);

std::vector<const Reidentifier*> MemberPointers(
    const std::vector<std::unique_ptr<Reidentifier>>& members);

// EnsembleReport JSON extended with
// "utility": {"percent_masked", "information_loss", "documents"}.
// Records are matched to the corpus by id and masks must fit the documents.
std::string EvaluateRedacted(const Corpus& corpus,
                             const std::vector<RedactedRecord>& redacted,
                             const std::vector<const Reidentifier*>& members);

struct SweepRun {
  RedactionRun run;
  std::vector<double> controls;
};

// Keys of ParseRedactionRun plus "controls": [numbers].
SweepRun ParseSweepRun(std::string_view json);

// Pareto CSV. `guide_name` is checked against the member names.
std::string RunSweep(const Corpus& corpus, std::shared_ptr<const ModelParams> guide,
                     const std::string& guide_name, const SweepRun& sweep,
                     const std::vector<const Reidentifier*>& members);

}  // namespace textanon

#endif  // TEXTANON_PIPELINE_HPP_
