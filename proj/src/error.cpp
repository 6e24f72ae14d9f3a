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

#include "textanon/error.hpp"

namespace textanon {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kDuplicateId:
      return "duplicate_id";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kVersionMismatch:
      return "version_mismatch";
    case ErrorCode::kNumeric:
      return "numeric_error";
    case ErrorCode::kInternal:
      return "internal_error";
  }
  return "internal_error";
}

}  // namespace textanon
