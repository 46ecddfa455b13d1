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

#ifndef MORP_TOOLS_CLI_H_
#define MORP_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <string_view>

namespace morp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModuleError = 1;
inline constexpr int kExitUsageError = 2;

// Runs one `morp` invocation. Results go to `out`; failures are reported on
// `err` as a single JSON object {code, message, context}.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string ErrorJson(std::string_view code, std::string_view message, std::string_view context);

}  // namespace morp::cli

#endif  // MORP_TOOLS_CLI_H_
