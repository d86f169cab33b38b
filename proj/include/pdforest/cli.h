/*
 * Copyright 2026 The pdforest Authors.
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

// Command-line front end. Exit codes: 0 success, 1 failure, 2 usage error,
// 3 verification mismatch, 4 path longer than the mask capacity.

#ifndef PDFOREST_CLI_H_
#define PDFOREST_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace pdforest {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitCapacity = 4;

// `args[0]` is the program name. Results go to the --out file or to `out`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace pdforest

#endif  // PDFOREST_CLI_H_
