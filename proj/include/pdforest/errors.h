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

#ifndef PDFOREST_ERRORS_H_
#define PDFOREST_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pdforest {

enum class ErrorKind {
  kParse,            // Malformed model dump or CSV.
  kSchema,           // Well-formed input that violates the documented schema.
  kInput,            // Data that does not fit the model (missing/NaN cells).
  kCapacity,         // Merged path longer than the configured mask width.
  kDegenerateModel,  // Zero or missing covers where covers are required.
  kNumeric,          // Non-finite value produced by a metric.
  kContract,         // Caller violated a documented precondition.
};

const char* ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// command line front-end can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pdforest

#endif  // PDFOREST_ERRORS_H_
