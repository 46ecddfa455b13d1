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

#ifndef MORP_ERROR_H_
#define MORP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace morp {

enum class ErrorCode {
  kContract,
  kDegenerateInterval,
  kFormat,
  kTruncation,
  kDataQuality,
  kIo,
  kRange,
  kReferential,
  kVersion,
  kNoCandidates,
  kPredictor,
  kSpec,
  kConfig,
};

// Stable snake_case name used in machine-readable error output.
std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library. `context` names the offending
// entity (a path, an annotation id, an epoch) and may be empty.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {});

  ErrorCode code() const { return code_; }
  const std::string& context() const { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace morp

#endif  // MORP_ERROR_H_
