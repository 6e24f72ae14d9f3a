/*
 * Copyright 2026 The Textanon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the textanon shared library.
 *
 * Every fallible call returns a ta_status. On failure a description is kept
 * per thread and can be read with ta_last_error() until the next call on the
 * same thread. Strings returned through char** belong to the caller and are
 * released with ta_string_free(). Option arguments are JSON objects; NULL or
 * "" means all defaults.
 */

#ifndef TEXTANON_TEXTANON_H_
#define TEXTANON_TEXTANON_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TA_API __declspec(dllexport)
#elif defined(TEXTANON_BUILDING_LIBRARY)
#define TA_API __attribute__((visibility("default")))
#else
#define TA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ta_status {
  TA_OK = 0,
  TA_ERR_INVALID_ARGUMENT = 1,
  TA_ERR_IO = 2,
  TA_ERR_PARSE = 3,
  TA_ERR_DUPLICATE_ID = 4,
  TA_ERR_NOT_FOUND = 5,
  TA_ERR_VERSION_MISMATCH = 6,
  TA_ERR_NUMERIC = 7,
  TA_ERR_INTERNAL = 8
} ta_status;

typedef struct ta_corpus ta_corpus;
typedef struct ta_model ta_model;

TA_API const char* ta_version(void);
TA_API const char* ta_status_name(ta_status status);
/* Message of the last failure on this thread, "" if none. */
TA_API const char* ta_last_error(void);
TA_API void ta_string_free(char* s);

/* stopwords_path may be NULL for the built-in English list. */
TA_API ta_status ta_corpus_load(const char* path, const char* stopwords_path,
                                ta_corpus** out);
TA_API ta_status ta_corpus_parse(const char* jsonl, size_t length,
                                 ta_corpus** out);
TA_API void ta_corpus_free(ta_corpus* corpus);
TA_API size_t ta_corpus_size(const ta_corpus* corpus);
TA_API ta_status ta_corpus_stats_json(const ta_corpus* corpus, char** out);

/* Writes the checkpoint, "<checkpoint>.best" and the log CSV (log_path may
 * be NULL). out may be NULL; otherwise it receives the final model. */
TA_API ta_status ta_train(const ta_corpus* corpus, const char* config_json,
                          const char* checkpoint_path, const char* log_path,
                          ta_model** out);

TA_API ta_status ta_model_load(const char* path, ta_model** out);
TA_API ta_status ta_model_save(const ta_model* model, const char* path);
TA_API void ta_model_free(ta_model* model);

/* Rank (1-based) and probability of the record's own profile when the
 * positions with mask[i] != 0 are hidden. mask may be NULL for no masking. */
TA_API ta_status ta_model_reidentify(const ta_model* model,
                                     const ta_corpus* corpus,
                                     const char* record_id,
                                     const uint8_t* mask, size_t mask_length,
                                     size_t* rank, double* probability);

/* Redacts records with a search method (guide required) or a baseline
 * (guide may be NULL). tags_path may be NULL to use the rule tagger for
 * "ner". sidecar_path may be NULL. */
TA_API ta_status ta_redact(const ta_corpus* corpus, const ta_model* guide,
                           const char* options_json, const char* tags_path,
                           const char* out_path, const char* sidecar_path);

/* Ensemble of the given checkpoints plus BM25 when use_bm25 != 0. */
TA_API ta_status ta_evaluate(const ta_corpus* corpus, const char* redacted_path,
                             const char* const* checkpoints,
                             size_t checkpoint_count, int use_bm25,
                             char** report_json);

/* Pareto CSV over options_json "controls". guide_name names the guiding
 * checkpoint file so it can be kept out of the ensemble; may be NULL. */
TA_API ta_status ta_sweep(const ta_corpus* corpus, const ta_model* guide,
                          const char* guide_name, const char* options_json,
                          const char* const* checkpoints,
                          size_t checkpoint_count, int use_bm25,
                          const char* out_path);

/* Synthetic biography corpus in the corpus JSONL format. */
TA_API ta_status ta_generate_corpus(size_t records, uint64_t seed,
                                    const char* out_path);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* TEXTANON_TEXTANON_H_ */
