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

// Generator for biography-style aligned records. Every person gets a unique
// surname that appears in both the profile and the document, so the corpus
// is separable; the remaining facts are shared across many people and only
// identify in combination. Documents also carry quasi-identifiers that are
// not in the profile (employer, a second city, years, children).

#ifndef TEXTANON_SYNTHETIC_HPP_
#define TEXTANON_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

namespace textanon {

struct SyntheticOptions {
  std::size_t records = 1000;
  std::uint64_t seed = 0;
};

// JSONL in the corpus format, one record per line, ids "p0000", "p0001", ...
std::string GenerateSyntheticCorpus(const SyntheticOptions& options);

}  // namespace textanon

#endif  // TEXTANON_SYNTHETIC_HPP_
