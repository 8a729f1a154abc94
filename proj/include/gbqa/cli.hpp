/*
 * Copyright 2026 The GBQA Measures Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>

namespace gbqa {

// Exit codes returned by run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // bad input, usage errors
inline constexpr int kExitInternal = 2;

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "GBQA_OUTPUT_DIR";

// Data goes to `out` (or the requested files), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace gbqa
