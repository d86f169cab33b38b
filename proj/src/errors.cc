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

#include "pdforest/errors.h"

namespace pdforest {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kSchema:
      return "schema error";
    case ErrorKind::kInput:
      return "input error";
    case ErrorKind::kCapacity:
      return "capacity error";
    case ErrorKind::kDegenerateModel:
      return "degenerate model";
    case ErrorKind::kNumeric:
      return "numeric error";
    case ErrorKind::kContract:
      return "contract violation";
  }
  return "error";
}

}  // namespace pdforest
