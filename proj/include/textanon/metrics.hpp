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

#ifndef TEXTANON_METRICS_HPP_
#define TEXTANON_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/deid.hpp"
#include "textanon/reid.hpp"

namespace textanon {

struct UtilityReport {
  double percent_masked = 0.0;
  double information_loss = 0.0;
};

// 100 · |z| / N, every token counted.
double PercentMasked(const MaskVector& mask, const Document& document);

// Raw DEFLATE (level 6) byte length.
std::size_t CompressedSize(std::string_view text);

// clamp(100 · (1 − C(redacted) / C(original)), 0, 100) where the original is
// the document rendered unmasked and the redacted text drops masked words.
double InformationLoss(const Document& document, const MaskVector& mask);

UtilityReport MeasureUtility(const Document& document, const MaskVector& mask);

struct ParetoPoint {
  std::string method;
  double control = 0.0;
  double reid_rate = 0.0;
  double pct_masked = 0.0;
  double info_loss = 0.0;
  double success_rate = 0.0;
};

struct SweepSpec {
  MethodConfig base;
  // K for search methods, the idf threshold for idf methods; baselines without
  // a control take a single placeholder value.
  std::vector<double> controls;
  // Ensemble members with this name are rejected so the guiding model never
  // grades its own redactions. Empty disables the check.
  std::string guide_name;
};

// One point per control value: redact every selected record, evaluate with
// the ensemble, and average the utility metrics over all records. Search
// failures still count toward the means; success_rate reports them.
std::vector<ParetoPoint> ParetoSweep(const SweepSpec& spec, const Corpus& corpus,
                                     std::span<const std::size_t> records,
                                     const Redactor& redactor,
                                     const std::vector<const Reidentifier*>& ensemble);

// Columns: method,control,reid_rate,pct_masked,info_loss,success_rate.
std::string FormatSweepCsv(const std::vector<ParetoPoint>& points);

}  // namespace textanon

#endif  // TEXTANON_METRICS_HPP_
