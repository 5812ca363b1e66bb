/*
 * Copyright 2026 The oodx Authors.
 *
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

#ifndef OODX_ERROR_H_
#define OODX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace oodx {

enum class ErrorCode {
  kInvalidInput,
  kPrecondition,
  kInfeasibleGraph,
  kSizeLimit,
  kInvalidK,
  kDegenerateInput,
  kManifestMismatch,
  kParse,
  kConfig,
  kDegenerateLabels,
  kUndefinedMetric,
  kInvalidCount,
  kEmptySelection,
  kIo,
  kInvalidKind,
  kNotFound,
  kConflict,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// the CLI and HTTP layers can map it to an exit status or response code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oodx

#endif  // OODX_ERROR_H_
