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

#include "textanon/metrics.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "textanon/error.hpp"

namespace textanon {

double PercentMasked(const MaskVector& mask, const Document& document) {
  if (mask.size() != document.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask length does not match document length");
  }
  if (document.size() == 0) return 0.0;
  return 100.0 * static_cast<double>(mask.count()) /
         static_cast<double>(document.size());
}

std::size_t CompressedSize(std::string_view text) {
  z_stream zs{};
  // Negative window bits: raw DEFLATE without the zlib wrapper.
  if (deflateInit2(&zs, 6, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::kInternal, "deflateInit2 failed");
  }
  std::vector<unsigned char> out(deflateBound(&zs, text.size()) + 16);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(text.data()));
  zs.avail_in = static_cast<uInt>(text.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const std::size_t size = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) {
    throw Error(ErrorCode::kInternal, "deflate did not finish");
  }
  return size;
}

double InformationLoss(const Document& document, const MaskVector& mask) {
  const std::string original =
      ApplyMask(document, MaskVector(document.size()), MaskMode::kDelete);
  const std::string redacted = ApplyMask(document, mask, MaskMode::kDelete);
  if (redacted == original) return 0.0;
  const double c_original = static_cast<double>(CompressedSize(original));
  const double c_redacted = static_cast<double>(CompressedSize(redacted));
  return std::clamp(100.0 * (1.0 - c_redacted / c_original), 0.0, 100.0);
}

UtilityReport MeasureUtility(const Document& document, const MaskVector& mask) {
  return {PercentMasked(mask, document), InformationLoss(document, mask)};
}

std::vector<ParetoPoint> ParetoSweep(const SweepSpec& spec, const Corpus& corpus,
                                     std::span<const std::size_t> records,
                                     const Redactor& redactor,
                                     const std::vector<const Reidentifier*>& ensemble) {
  if (spec.controls.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one control value");
  }
  if (!spec.guide_name.empty()) {
    for (const auto* m : ensemble) {
      if (m->name() == spec.guide_name) {
        throw Error(ErrorCode::kInvalidArgument,
                    "guiding model '" + spec.guide_name +
                        "' must not be an ensemble member");
      }
    }
  }
  const bool search = IsSearchMethod(spec.base.method);
  std::vector<ParetoPoint> points;
  for (double control : spec.controls) {
    MethodConfig config = spec.base;
    if (search) {
      if (!(control >= 1.0) || control != std::floor(control)) {
        throw Error(ErrorCode::kInvalidArgument, "K must be a positive integer");
      }
      config.k = static_cast<std::size_t>(control);
    } else {
      config.idf_threshold = control;
    }
    std::vector<RedactionResult> results;
    std::vector<EvaluationItem> items;
    double pct = 0.0;
    double loss = 0.0;
    std::size_t successes = 0;
    for (std::size_t index : records) {
      const AlignedRecord& record = corpus.records().at(index);
      RedactionResult r = redactor.Redact(record, config);
      const UtilityReport u = MeasureUtility(record.document, r.mask);
      pct += u.percent_masked;
      loss += u.information_loss;
      if (r.success) ++successes;
      items.push_back({record.id, &record.document, r.mask, record.profile_index});
    }
    const EnsembleReport report = EnsembleEvaluate(ensemble, items);
    const double n = records.empty() ? 1.0 : static_cast<double>(records.size());
    ParetoPoint p;
    p.method = search && config.method == RedactionMethod::kNnBeam
                   ? "nn-beam" + std::to_string(config.beam_width)
                   : RedactionMethodName(config.method);
    p.control = control;
    p.reid_rate = report.rate;
    p.pct_masked = pct / n;
    p.info_loss = loss / n;
    p.success_rate = 100.0 * static_cast<double>(successes) / n;
    points.push_back(std::move(p));
  }
  return points;
}

std::string FormatSweepCsv(const std::vector<ParetoPoint>& points) {
  std::string out = "method,control,reid_rate,pct_masked,info_loss,success_rate\n";
  char line[256];
  for (const auto& p : points) {
    std::snprintf(line, sizeof(line), "%s,%.6g,%.4f,%.4f,%.4f,%.4f\n",
                  p.method.c_str(), p.control, p.reid_rate, p.pct_masked,
                  p.info_loss, p.success_rate);
    out += line;
  }
  return out;
}

}  // namespace textanon
