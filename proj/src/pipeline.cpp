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

#include "textanon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "textanon/error.hpp"

namespace textanon {
namespace {

using json = nlohmann::json;

json ParseObject(std::string_view text, const std::set<std::string>& allowed) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("options: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "options must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown option '" + key + "'");
    }
  }
  return j;
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  try {
    out = j[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("option '") + key + "' has the wrong type");
  }
}

// Non-negative integers, rejecting negatives and fractions.
void ReadCount(const json& j, const char* key, std::size_t& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  const json& v = j[key];
  if (v.is_number_unsigned()) {
    out = v.get<std::size_t>();
    return;
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d == std::floor(d)) {
      out = static_cast<std::size_t>(d);
      return;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string("option '") + key + "' must be a non-negative integer");
}

const std::set<std::string>& RedactionKeys() {
  static const std::set<std::string> keys = {
      "method",    "k",         "beam_width", "idf_threshold", "include_stopwords",
      "mask_mode", "offset",    "limit"};
  return keys;
}

RedactionRun RedactionRunFromJson(const json& j) {
  RedactionRun run;
  std::string method = RedactionMethodName(run.method.method);
  Read(j, "method", method);
  run.method.method = ParseRedactionMethod(method);
  ReadCount(j, "k", run.method.k);
  ReadCount(j, "beam_width", run.method.beam_width);
  Read(j, "idf_threshold", run.method.idf_threshold);
  Read(j, "include_stopwords", run.method.include_stopwords);
  std::string mode = MaskModeName(run.mode);
  Read(j, "mask_mode", mode);
  run.mode = ParseMaskMode(mode);
  ReadCount(j, "offset", run.offset);
  ReadCount(j, "limit", run.limit);
  if (IsSearchMethod(run.method.method) && run.method.k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  if (run.method.method == RedactionMethod::kNnBeam && run.method.beam_width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "beam_width must be at least 1");
  }
  if (!std::isfinite(run.method.idf_threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "idf_threshold must be finite");
  }
  return run;
}

}  // namespace

std::string CorpusStatsJson(const Corpus& corpus) {
  const IdfTable idf = IdfTable::FromCorpus(corpus);
  const Vocabulary vocab = Vocabulary::Build(corpus, 1);
  std::size_t doc_tokens = 0;
  for (const auto& r : corpus.records()) doc_tokens += r.document.size();
  std::size_t profile_tokens = 0;
  for (const auto& p : corpus.linearized_profiles()) profile_tokens += p.size();

  double idf_min = 0.0;
  double idf_max = 0.0;
  double idf_sum = 0.0;
  bool first = true;
  for (const auto& [term, df] : idf.frequencies()) {
    const double v = idf.Idf(term);
    idf_min = first ? v : std::min(idf_min, v);
    idf_max = first ? v : std::max(idf_max, v);
    idf_sum += v;
    first = false;
  }
  const auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  nlohmann::ordered_json j;
  j["records"] = corpus.records().size();
  j["profiles"] = corpus.profiles().size();
  j["vocabulary_size"] = vocab.term_count();
  j["idf_documents"] = idf.document_count();
  j["tokens"] = doc_tokens;
  j["mean_document_length"] = ratio(doc_tokens, corpus.records().size());
  j["mean_profile_length"] =
      ratio(profile_tokens, corpus.linearized_profiles().size());
  j["idf_min"] = idf_min;
  j["idf_max"] = idf_max;
  j["idf_mean"] = idf.frequencies().empty()
                      ? 0.0
                      : idf_sum / static_cast<double>(idf.frequencies().size());
  return j.dump();
}

TrainConfig ParseTrainConfig(std::string_view text) {
  const json j = ParseObject(
      text, {"epochs", "optimizer", "lr", "clip_norm", "alpha", "mask_prior", "embed_dim", "seed",
             "profile_epochs", "warmup_epochs", "batch_size", "hash_buckets",
             "heldout_fraction"});
  TrainConfig c;
  ReadCount(j, "epochs", c.epochs);
  std::string optimizer = OptimizerName(c.optimizer);
  Read(j, "optimizer", optimizer);
  c.optimizer = ParseOptimizer(optimizer);
  Read(j, "lr", c.learning_rate);
  Read(j, "clip_norm", c.clip_norm);
  Read(j, "alpha", c.label_smoothing);
  std::string prior = MaskPriorName(c.mask_prior);
  Read(j, "mask_prior", prior);
  c.mask_prior = ParseMaskPrior(prior);
  ReadCount(j, "embed_dim", c.embedding_dim);
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_unsigned()) {
      throw Error(ErrorCode::kInvalidArgument, "seed must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  ReadCount(j, "profile_epochs", c.profile_epochs);
  ReadCount(j, "warmup_epochs", c.warmup_epochs);
  ReadCount(j, "batch_size", c.batch_size);
  ReadCount(j, "hash_buckets", c.hash_buckets);
  Read(j, "heldout_fraction", c.heldout_fraction);
  c.Validate();
  return c;
}

TrainResult TrainAndSave(const Corpus& corpus, const TrainConfig& config,
                         const std::filesystem::path& checkpoint,
                         const std::filesystem::path& log) {
  TrainResult result = Train(corpus, config);
  SaveCheckpoint(result.params, checkpoint);
  if (result.best) {
    std::filesystem::path best = checkpoint;
    best += ".best";
    SaveCheckpoint(*result.best, best);
  }
  if (!log.empty()) WriteTrainingLog(result.log, log);
  return result;
}

RedactionRun ParseRedactionRun(std::string_view text) {
  return RedactionRunFromJson(ParseObject(text, RedactionKeys()));
}

std::vector<std::size_t> SelectRecords(const Corpus& corpus, std::size_t offset,
                                       std::size_t limit) {
  std::vector<std::size_t> out;
  const std::size_t n = corpus.records().size();
  for (std::size_t i = offset; i < n && out.size() < limit; ++i) out.push_back(i);
  return out;
}

RedactionOutput RunRedaction(
    const Corpus& corpus, std::shared_ptr<const ModelParams> guide,
    const RedactionRun& run,
    const std::unordered_map<std::string, std::vector<EntityTag>>* tags) {
  std::unique_ptr<ReidModel> model;
  if (guide) model = std::make_unique<ReidModel>(guide, corpus.linearized_profiles());
  const IdfTable idf = IdfTable::FromCorpus(corpus);
  const Redactor redactor(corpus, model.get(), &idf, tags);
  RedactionOutput out;
  for (std::size_t index : SelectRecords(corpus, run.offset, run.limit)) {
    const AlignedRecord& record = corpus.records()[index];
    RedactionResult r = redactor.Redact(record, run.method);
    out.redacted_jsonl += RedactedRecordLine(
        corpus.profiles()[record.profile_index], record, r, run.mode);
    out.redacted_jsonl += '\n';
    out.sidecar_jsonl += SidecarLine(record.id, r);
    out.sidecar_jsonl += '\n';
    out.results.push_back(std::move(r));
  }
  return out;
}

std::vector<std::unique_ptr<Reidentifier>> BuildEnsemble(
    const Corpus& corpus, const std::vector<std::filesystem::path>& checkpoints,
    bool bm25) {
  std::vector<std::unique_ptr<Reidentifier>> members;
  for (const auto& path : checkpoints) {
    auto params = std::make_shared<const ModelParams>(LoadCheckpoint(path));
    members.push_back(std::make_unique<NeuralReidentifier>(
        path.filename().string(), std::move(params), corpus));
  }
  if (bm25) {
    members.push_back(
        std::make_unique<Bm25Reidentifier>("bm25", corpus.linearized_profiles()));
  }
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "the ensemble needs at least one member");
  }
  return members;
}

std::vector<const Reidentifier*> MemberPointers(
    const std::vector<std::unique_ptr<Reidentifier>>& members) {
  std::vector<const Reidentifier*> out;
  for (const auto& m : members) out.push_back(m.get());
  return out;
}

std::string EvaluateRedacted(const Corpus& corpus,
                             const std::vector<RedactedRecord>& redacted,
                             const std::vector<const Reidentifier*>& members) {
  std::vector<EvaluationItem> items;
  double pct = 0.0;
  double loss = 0.0;
  for (const auto& r : redacted) {
    const AlignedRecord* record = corpus.FindRecord(r.id);
    if (record == nullptr) {
      throw Error(ErrorCode::kNotFound, "redacted record '" + r.id + "' not in corpus");
    }
    if (r.mask.size() != record->document.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mask of record '" + r.id + "' does not fit its document");
    }
    const UtilityReport u = MeasureUtility(record->document, r.mask);
    pct += u.percent_masked;
    loss += u.information_loss;
    items.push_back({record->id, &record->document, r.mask, record->profile_index});
  }
  const EnsembleReport report = EnsembleEvaluate(members, items);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(report.ToJson());
  const double n = redacted.empty() ? 1.0 : static_cast<double>(redacted.size());
  j["utility"] = {{"percent_masked", pct / n},
                  {"information_loss", loss / n},
                  {"documents", redacted.size()}};
  return j.dump();
}

SweepRun ParseSweepRun(std::string_view text) {
  std::set<std::string> keys = RedactionKeys();
  keys.insert("controls");
  json j = ParseObject(text, keys);
  SweepRun sweep;
  if (j.contains("controls")) {
    Read(j, "controls", sweep.controls);
    j.erase("controls");
  }
  sweep.run = RedactionRunFromJson(j);
  return sweep;
}

std::string RunSweep(const Corpus& corpus, std::shared_ptr<const ModelParams> guide,
                     const std::string& guide_name, const SweepRun& sweep,
                     const std::vector<const Reidentifier*>& members) {
  std::unique_ptr<ReidModel> model;
  if (guide) model = std::make_unique<ReidModel>(guide, corpus.linearized_profiles());
  const IdfTable idf = IdfTable::FromCorpus(corpus);
  const Redactor redactor(corpus, model.get(), &idf);
  SweepSpec spec;
  spec.base = sweep.run.method;
  spec.controls = sweep.controls;
  spec.guide_name = guide_name;
  if (spec.controls.empty()) {
    // Methods without a control still produce one row.
    const auto m = spec.base.method;
    spec.controls.push_back(IsSearchMethod(m) ? static_cast<double>(spec.base.k)
                                              : spec.base.idf_threshold);
  }
  const auto records = SelectRecords(corpus, sweep.run.offset, sweep.run.limit);
  return FormatSweepCsv(ParetoSweep(spec, corpus, records, redactor, members));
}

}  // namespace textanon
