// Copyright 2026 The Morp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "morp/error.h"

#include <utility>

namespace morp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kContract: return "contract_violation";
    case ErrorCode::kDegenerateInterval: return "degenerate_interval";
    case ErrorCode::kFormat: return "format_error";
    case ErrorCode::kTruncation: return "truncation_error";
    case ErrorCode::kDataQuality: return "data_quality_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kRange: return "range_error";
    case ErrorCode::kReferential: return "referential_error";
    case ErrorCode::kVersion: return "version_error";
    case ErrorCode::kNoCandidates: return "no_candidates";
    case ErrorCode::kPredictor: return "predictor_error";
    case ErrorCode::kSpec: return "spec_error";
    case ErrorCode::kConfig: return "config_error";
  }
  return "unknown_error";
}

Error::Error(ErrorCode code, const std::string& message, std::string context)
    : std::runtime_error(message), code_(code), context_(std::move(context)) {}

}  // namespace morp
