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

#include "textanon/textanon.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "textanon/error.hpp"
#include "textanon/pipeline.hpp"
#include "textanon/synthetic.hpp"

struct ta_corpus {
  textanon::Corpus corpus;
};

struct ta_model {
  std::shared_ptr<const textanon::ModelParams> params;
};

namespace {

thread_local std::string last_error;

ta_status StatusFor(textanon::ErrorCode code) {
  using textanon::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return TA_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return TA_ERR_IO;
    case ErrorCode::kParse: return TA_ERR_PARSE;
    case ErrorCode::kDuplicateId: return TA_ERR_DUPLICATE_ID;
    case ErrorCode::kNotFound: return TA_ERR_NOT_FOUND;
    case ErrorCode::kVersionMismatch: return TA_ERR_VERSION_MISMATCH;
    case ErrorCode::kNumeric: return TA_ERR_NUMERIC;
    case ErrorCode::kInternal: return TA_ERR_INTERNAL;
  }
  return TA_ERR_INTERNAL;
}

template <typename Fn>
ta_status Guard(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return TA_OK;
  } catch (const textanon::Error& e) {
    last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return TA_ERR_INTERNAL;
}

void Require(bool ok, const char* what) {
  if (!ok) {
    throw textanon::Error(textanon::ErrorCode::kInvalidArgument,
                          std::string(what) + " must not be NULL");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string_view OrEmpty(const char* s) { return s == nullptr ? "" : s; }

std::vector<std::filesystem::path> Paths(const char* const* items, size_t count) {
  std::vector<std::filesystem::path> out;
  for (size_t i = 0; i < count; ++i) {
    Require(items[i] != nullptr, "checkpoint path");
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* ta_version(void) { return "0.1.0"; }

const char* ta_status_name(ta_status status) {
  switch (status) {
    case TA_OK: return "ok";
    case TA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TA_ERR_IO: return "io_error";
    case TA_ERR_PARSE: return "parse_error";
    case TA_ERR_DUPLICATE_ID: return "duplicate_id";
    case TA_ERR_NOT_FOUND: return "not_found";
    case TA_ERR_VERSION_MISMATCH: return "version_mismatch";
    case TA_ERR_NUMERIC: return "numeric_error";
    case TA_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* ta_last_error(void) { return last_error.c_str(); }

void ta_string_free(char* s) { std::free(s); }

ta_status ta_corpus_load(const char* path, const char* stopwords_path,
                         ta_corpus** out) {
  return Guard([&] {
    Require(path != nullptr, "path");
    Require(out != nullptr, "out");
    const textanon::StopwordList stopwords =
        stopwords_path == nullptr ? textanon::StopwordList::English()
                                  : textanon::StopwordList::FromFile(stopwords_path);
    *out = new ta_corpus{textanon::LoadCorpus(path, stopwords)};
  });
}

ta_status ta_corpus_parse(const char* jsonl, size_t length, ta_corpus** out) {
  return Guard([&] {
    Require(jsonl != nullptr || length == 0, "jsonl");
    Require(out != nullptr, "out");
    *out = new ta_corpus{
        textanon::ParseCorpus(std::string_view(jsonl == nullptr ? "" : jsonl, length))};
  });
}

void ta_corpus_free(ta_corpus* corpus) { delete corpus; }

size_t ta_corpus_size(const ta_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.records().size();
}

ta_status ta_corpus_stats_json(const ta_corpus* corpus, char** out) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(out != nullptr, "out");
    *out = CopyString(textanon::CorpusStatsJson(corpus->corpus));
  });
}

ta_status ta_train(const ta_corpus* corpus, const char* config_json,
                   const char* checkpoint_path, const char* log_path,
                   ta_model** out) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(checkpoint_path != nullptr, "checkpoint_path");
    const textanon::TrainConfig config =
        textanon::ParseTrainConfig(OrEmpty(config_json));
    textanon::TrainResult result = textanon::TrainAndSave(
        corpus->corpus, config, checkpoint_path,
        log_path == nullptr ? std::filesystem::path() : std::filesystem::path(log_path));
    if (out != nullptr) {
      *out = new ta_model{
          std::make_shared<const textanon::ModelParams>(std::move(result.params))};
    }
  });
}

ta_status ta_model_load(const char* path, ta_model** out) {
  return Guard([&] {
    Require(path != nullptr, "path");
    Require(out != nullptr, "out");
    *out = new ta_model{
        std::make_shared<const textanon::ModelParams>(textanon::LoadCheckpoint(path))};
  });
}

ta_status ta_model_save(const ta_model* model, const char* path) {
  return Guard([&] {
    Require(model != nullptr, "model");
    Require(path != nullptr, "path");
    textanon::SaveCheckpoint(*model->params, path);
  });
}

void ta_model_free(ta_model* model) { delete model; }

ta_status ta_model_reidentify(const ta_model* model, const ta_corpus* corpus,
                              const char* record_id, const uint8_t* mask,
                              size_t mask_length, size_t* rank,
                              double* probability) {
  return Guard([&] {
    Require(model != nullptr, "model");
    Require(corpus != nullptr, "corpus");
    Require(record_id != nullptr, "record_id");
    const textanon::AlignedRecord* record = corpus->corpus.FindRecord(record_id);
    if (record == nullptr) {
      throw textanon::Error(textanon::ErrorCode::kNotFound,
                            std::string("no record '") + record_id + "'");
    }
    textanon::MaskVector z(record->document.size());
    if (mask != nullptr) {
      if (mask_length != z.size()) {
        throw textanon::Error(textanon::ErrorCode::kInvalidArgument,
                              "mask length does not match document length");
      }
      for (size_t i = 0; i < mask_length; ++i) {
        if (mask[i] != 0) z.set(i);
      }
    }
    const textanon::ReidModel reid(model->params,
                                   corpus->corpus.linearized_profiles());
    const textanon::Distribution d = reid.Predict(record->document, z);
    if (rank != nullptr) *rank = textanon::RankOf(d, record->profile_index);
    if (probability != nullptr) *probability = d[record->profile_index];
  });
}

ta_status ta_redact(const ta_corpus* corpus, const ta_model* guide,
                    const char* options_json, const char* tags_path,
                    const char* out_path, const char* sidecar_path) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(out_path != nullptr, "out_path");
    const textanon::RedactionRun run =
        textanon::ParseRedactionRun(OrEmpty(options_json));
    std::unordered_map<std::string, std::vector<textanon::EntityTag>> tags;
    if (tags_path != nullptr) tags = textanon::LoadTagFile(tags_path);
    const textanon::RedactionOutput output = textanon::RunRedaction(
        corpus->corpus, guide == nullptr ? nullptr : guide->params, run,
        tags_path == nullptr ? nullptr : &tags);
    textanon::WriteFile(out_path, output.redacted_jsonl);
    if (sidecar_path != nullptr) textanon::WriteFile(sidecar_path, output.sidecar_jsonl);
  });
}

ta_status ta_evaluate(const ta_corpus* corpus, const char* redacted_path,
                      const char* const* checkpoints, size_t checkpoint_count,
                      int use_bm25, char** report_json) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(redacted_path != nullptr, "redacted_path");
    Require(report_json != nullptr, "report_json");
    Require(checkpoints != nullptr || checkpoint_count == 0, "checkpoints");
    const auto members = textanon::BuildEnsemble(
        corpus->corpus, Paths(checkpoints, checkpoint_count), use_bm25 != 0);
    const auto redacted = textanon::LoadRedactedCorpus(redacted_path);
    *report_json = CopyString(textanon::EvaluateRedacted(
        corpus->corpus, redacted, textanon::MemberPointers(members)));
  });
}

ta_status ta_sweep(const ta_corpus* corpus, const ta_model* guide,
                   const char* guide_name, const char* options_json,
                   const char* const* checkpoints, size_t checkpoint_count,
                   int use_bm25, const char* out_path) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(out_path != nullptr, "out_path");
    Require(checkpoints != nullptr || checkpoint_count == 0, "checkpoints");
    const textanon::SweepRun sweep = textanon::ParseSweepRun(OrEmpty(options_json));
    const auto members = textanon::BuildEnsemble(
        corpus->corpus, Paths(checkpoints, checkpoint_count), use_bm25 != 0);
    const std::string csv = textanon::RunSweep(
        corpus->corpus, guide == nullptr ? nullptr : guide->params,
        std::string(OrEmpty(guide_name)), sweep, textanon::MemberPointers(members));
    textanon::WriteFile(out_path, csv);
  });
}

ta_status ta_generate_corpus(size_t records, uint64_t seed, const char* out_path) {
  return Guard([&] {
    Require(out_path != nullptr, "out_path");
    textanon::SyntheticOptions options;
    options.records = records;
    options.seed = seed;
    textanon::WriteFile(out_path, textanon::GenerateSyntheticCorpus(options));
  });
}

}  // extern "C"
