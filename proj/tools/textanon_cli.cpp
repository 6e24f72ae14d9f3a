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

// textanon: train reidentification models, redact corpora, and evaluate
// redactions. Failures print one JSON object on stderr and exit nonzero.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "textanon/textanon.h"

namespace {

using json = nlohmann::json;

constexpr int kExitUsage = 2;

int ExitCodeFor(ta_status status) {
  switch (status) {
    case TA_OK: return 0;
    case TA_ERR_IO: return 3;
    case TA_ERR_PARSE: return 4;
    case TA_ERR_VERSION_MISMATCH: return 5;
    case TA_ERR_INVALID_ARGUMENT: return 6;
    case TA_ERR_NUMERIC: return 7;
    case TA_ERR_NOT_FOUND: return 8;
    case TA_ERR_DUPLICATE_ID: return 9;
    case TA_ERR_INTERNAL: return 1;
  }
  return 1;
}

int ReportError(const std::string& code, int exit_code, const std::string& message) {
  json err;
  err["error"] = {{"code", code}, {"exit", exit_code}, {"message", message}};
  std::cerr << err.dump() << std::endl;
  return exit_code;
}

// Thrown out of command handlers to unwind with a library status.
struct StatusError {
  ta_status status;
  std::string message;
};

void Check(ta_status status) {
  if (status != TA_OK) throw StatusError{status, ta_last_error()};
}

struct Options {
  std::string config;
  std::string corpus;
  std::string stopwords;
  std::string model;
  std::string out;
  std::string sidecar;
  std::string log;
  std::string redacted;
  std::string tags;
  std::vector<std::string> members;
  bool bm25 = true;

  // Training.
  std::size_t epochs = 60;
  std::string optimizer = "adam";
  double lr = 0.05;
  double alpha = 0.1;
  std::size_t embed_dim = 64;
  std::string mask_prior = "uniform";
  std::uint64_t seed = 0;
  std::size_t hash_buckets = 1u << 18;
  double heldout_fraction = 0.05;
  std::size_t batch_size = 32;
  std::size_t profile_epochs = 5;

  // Redaction.
  std::string method;
  std::size_t k = 1;
  std::size_t beam_width = 0;
  double idf_threshold = 0.0;
  std::string mask_mode = "replace";
  bool include_stopwords = false;
  std::size_t offset = 0;
  std::size_t limit = 0;  // 0 = all
  std::vector<double> controls;

  // Generation.
  std::size_t records = 1000;
};

// Fills options that were not given on the command line from the JSON
// config. Keys use either dashes or underscores.
void ApplyConfig(CLI::App* command, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw StatusError{TA_ERR_IO, "cannot open config " + path};
  }
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    throw StatusError{TA_ERR_PARSE, std::string("config: ") + e.what()};
  }
  if (!config.is_object()) {
    throw StatusError{TA_ERR_PARSE, "config must be a JSON object"};
  }
  std::vector<std::string> used;
  for (CLI::Option* opt : command->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    std::string underscored = name;
    for (char& c : underscored) {
      if (c == '-') c = '_';
    }
    const json* value = nullptr;
    for (const std::string& key : {name, underscored}) {
      if (config.contains(key)) {
        value = &config[key];
        used.push_back(key);
      }
    }
    if (value == nullptr || opt->count() > 0) continue;
    const auto as_text = [](const json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (value->is_array()) {
      for (const auto& item : *value) opt->add_result(as_text(item));
    } else {
      opt->add_result(as_text(*value));
    }
    opt->run_callback();
  }
  for (const auto& [key, v] : config.items()) {
    if (std::find(used.begin(), used.end(), key) == used.end()) {
      throw StatusError{TA_ERR_INVALID_ARGUMENT,
                        "config key '" + key + "' is not an option of '" +
                            command->get_name() + "'"};
    }
  }
}

std::string RedactionJson(const Options& o, const std::string& method) {
  json j;
  j["method"] = method;
  j["k"] = o.k;
  if (o.beam_width > 0) j["beam_width"] = o.beam_width;
  j["idf_threshold"] = o.idf_threshold;
  j["include_stopwords"] = o.include_stopwords;
  j["mask_mode"] = o.mask_mode;
  j["offset"] = o.offset;
  if (o.limit > 0) j["limit"] = o.limit;
  return j.dump();
}

struct CorpusHandle {
  ta_corpus* ptr = nullptr;
  ~CorpusHandle() { ta_corpus_free(ptr); }
};

struct ModelHandle {
  ta_model* ptr = nullptr;
  ~ModelHandle() { ta_model_free(ptr); }
};

void LoadCorpus(const Options& o, CorpusHandle& handle) {
  Check(ta_corpus_load(o.corpus.c_str(),
                       o.stopwords.empty() ? nullptr : o.stopwords.c_str(),
                       &handle.ptr));
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StatusError{TA_ERR_IO, "cannot write " + path};
  out << text << '\n';
}

std::string Basename(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::vector<const char*> CStrings(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  for (const auto& s : items) out.push_back(s.c_str());
  return out;
}

void RunStats(const Options& o) {
  CorpusHandle corpus;
  LoadCorpus(o, corpus);
  char* stats = nullptr;
  Check(ta_corpus_stats_json(corpus.ptr, &stats));
  const std::string text = stats;
  ta_string_free(stats);
  WriteOutput(o.out, text);
}

void RunGenerate(const Options& o) {
  Check(ta_generate_corpus(o.records, o.seed, o.out.c_str()));
}

void RunTrain(const Options& o) {
  CorpusHandle corpus;
  LoadCorpus(o, corpus);
  json config;
  config["epochs"] = o.epochs;
  config["optimizer"] = o.optimizer;
  config["lr"] = o.lr;
  config["alpha"] = o.alpha;
  config["embed_dim"] = o.embed_dim;
  config["mask_prior"] = o.mask_prior;
  config["seed"] = o.seed;
  config["hash_buckets"] = o.hash_buckets;
  config["heldout_fraction"] = o.heldout_fraction;
  config["batch_size"] = o.batch_size;
  config["profile_epochs"] = o.profile_epochs;
  Check(ta_train(corpus.ptr, config.dump().c_str(), o.out.c_str(),
                 o.log.empty() ? nullptr : o.log.c_str(), nullptr));
}

void RunRedact(const Options& o, const std::string& method, bool needs_model) {
  CorpusHandle corpus;
  LoadCorpus(o, corpus);
  ModelHandle model;
  if (!o.model.empty()) {
    Check(ta_model_load(o.model.c_str(), &model.ptr));
  } else if (needs_model) {
    throw StatusError{TA_ERR_INVALID_ARGUMENT, "--model is required"};
  }
  Check(ta_redact(corpus.ptr, model.ptr, RedactionJson(o, method).c_str(),
                  o.tags.empty() ? nullptr : o.tags.c_str(), o.out.c_str(),
                  o.sidecar.empty() ? nullptr : o.sidecar.c_str()));
}

void RunEvaluate(const Options& o) {
  CorpusHandle corpus;
  LoadCorpus(o, corpus);
  const auto members = CStrings(o.members);
  char* report = nullptr;
  Check(ta_evaluate(corpus.ptr, o.redacted.c_str(), members.data(), members.size(),
                    o.bm25 ? 1 : 0, &report));
  const std::string text = report;
  ta_string_free(report);
  WriteOutput(o.out, text);
}

void RunSweep(const Options& o, const std::string& method) {
  CorpusHandle corpus;
  LoadCorpus(o, corpus);
  ModelHandle model;
  if (!o.model.empty()) Check(ta_model_load(o.model.c_str(), &model.ptr));
  json options = json::parse(RedactionJson(o, method));
  options["controls"] = o.controls;
  const auto members = CStrings(o.members);
  const std::string guide = o.model.empty() ? "" : Basename(o.model);
  Check(ta_sweep(corpus.ptr, model.ptr, guide.c_str(), options.dump().c_str(),
                 members.data(), members.size(), o.bm25 ? 1 : 0, o.out.c_str()));
}

void AddCorpus(CLI::App* cmd, Options& o) {
  cmd->add_option("--corpus", o.corpus, "Corpus JSONL");
  cmd->add_option("--stopwords", o.stopwords, "Stopword file, one word per line");
}

void AddRedaction(CLI::App* cmd, Options& o) {
  cmd->add_option("--k", o.k, "Anonymity level K");
  cmd->add_option("--beam-width", o.beam_width, "Beam width (beam search)");
  cmd->add_option("--idf-threshold", o.idf_threshold, "IDF threshold");
  cmd->add_option("--mask-mode", o.mask_mode, "replace, delete or collapse");
  cmd->add_flag("--include-stopwords", o.include_stopwords,
                "Let search methods mask stopwords");
  cmd->add_option("--offset", o.offset, "First record to process");
  cmd->add_option("--limit", o.limit, "Number of records (0 = all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text deidentification with K-anonymity search"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "Corpus, vocabulary and IDF summary");
  AddCorpus(stats, o);
  stats->add_option("--out", o.out, "Output JSON (default stdout)");

  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus");
  generate->add_option("--records", o.records, "Number of records");
  generate->add_option("--seed", o.seed, "Random seed");
  generate->add_option("--out", o.out, "Output JSONL");

  auto* train = app.add_subcommand("train", "Train a reidentification model");
  AddCorpus(train, o);
  train->add_option("--out", o.out, "Checkpoint path");
  train->add_option("--log", o.log, "Training log CSV");
  train->add_option("--epochs", o.epochs, "Epochs");
  train->add_option("--optimizer", o.optimizer, "adam or sgd");
  train->add_option("--lr", o.lr, "Peak learning rate");
  train->add_option("--alpha", o.alpha, "Label smoothing");
  train->add_option("--embed-dim", o.embed_dim, "Embedding dimension");
  train->add_option("--mask-prior", o.mask_prior, "uniform, idf or off");
  train->add_option("--seed", o.seed, "Random seed");
  train->add_option("--hash-buckets", o.hash_buckets, "Hash buckets for unknown words");
  train->add_option("--heldout-fraction", o.heldout_fraction,
                    "Trailing fraction of records held out");
  train->add_option("--batch-size", o.batch_size, "Batch size");
  train->add_option("--profile-epochs", o.profile_epochs,
                    "Number of profile-encoder epochs");

  auto* deid = app.add_subcommand("deidentify", "Model-guided K-anonymity search");
  AddCorpus(deid, o);
  AddRedaction(deid, o);
  deid->add_option("--model", o.model, "Guiding checkpoint");
  deid->add_option("--out", o.out, "Redacted JSONL");
  deid->add_option("--sidecar", o.sidecar, "Per-document result JSONL");

  auto* baseline = app.add_subcommand("baseline", "Heuristic redaction baseline");
  AddCorpus(baseline, o);
  AddRedaction(baseline, o);
  baseline->add_option("--method", o.method, "lexical, idf, idf-table or ner");
  baseline->add_option("--tags", o.tags, "Entity tag JSONL for ner");
  baseline->add_option("--model", o.model, "Optional checkpoint to score results");
  baseline->add_option("--out", o.out, "Redacted JSONL");
  baseline->add_option("--sidecar", o.sidecar, "Per-document result JSONL");

  auto* evaluate = app.add_subcommand("evaluate", "Ensemble reidentification and utility");
  AddCorpus(evaluate, o);
  evaluate->add_option("--redacted", o.redacted, "Redacted JSONL");
  evaluate->add_option("--member", o.members, "Ensemble checkpoint (repeatable)");
  evaluate->add_option("--bm25", o.bm25, "Include BM25 in the ensemble (true/false)");
  evaluate->add_option("--out", o.out, "Report JSON (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Privacy/utility curve over a control");
  AddCorpus(sweep, o);
  AddRedaction(sweep, o);
  sweep->add_option("--method", o.method,
                    "nn-greedy, nn-beam, lexical, idf, idf-table or ner");
  sweep->add_option("--model", o.model, "Guiding checkpoint");
  sweep->add_option("--controls", o.controls, "K values or IDF thresholds")
      ->delimiter(',');
  sweep->add_option("--member", o.members, "Ensemble checkpoint (repeatable)");
  sweep->add_option("--bm25", o.bm25, "Include BM25 in the ensemble (true/false)");
  sweep->add_option("--out", o.out, "Pareto CSV");

  for (auto* cmd : app.get_subcommands({})) {
    cmd->add_option("--config", o.config, "JSON file of option values");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage", kExitUsage, e.what());
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!o.config.empty()) ApplyConfig(cmd, o.config);
    const std::string name = cmd->get_name();
    const auto require = [&](const std::string& value, const char* flag) {
      if (value.empty()) {
        throw StatusError{TA_ERR_INVALID_ARGUMENT, std::string(flag) + " is required"};
      }
    };
    if (name != "generate") require(o.corpus, "--corpus");
    if (name == "stats") {
      RunStats(o);
    } else if (name == "generate") {
      require(o.out, "--out");
      RunGenerate(o);
    } else if (name == "train") {
      require(o.out, "--out");
      RunTrain(o);
    } else if (name == "deidentify") {
      require(o.out, "--out");
      RunRedact(o, o.beam_width > 0 ? "nn-beam" : "nn-greedy", true);
    } else if (name == "baseline") {
      require(o.out, "--out");
      require(o.method, "--method");
      if (o.method == "nn-greedy" || o.method == "nn-beam") {
        throw StatusError{TA_ERR_INVALID_ARGUMENT,
                          "use 'deidentify' for model-guided methods"};
      }
      RunRedact(o, o.method, false);
    } else if (name == "evaluate") {
      require(o.redacted, "--redacted");
      RunEvaluate(o);
    } else if (name == "sweep") {
      require(o.out, "--out");
      std::string method = o.method;
      if (method.empty()) method = o.beam_width > 0 ? "nn-beam" : "nn-greedy";
      RunSweep(o, method);
    }
  } catch (const StatusError& e) {
    return ReportError(ta_status_name(e.status), ExitCodeFor(e.status), e.message);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage", kExitUsage, e.what());
  } catch (const std::exception& e) {
    return ReportError("internal_error", 1, e.what());
  }
  return 0;
}
