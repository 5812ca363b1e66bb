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

#include "oodx/error.h"

namespace oodx {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kInfeasibleGraph: return "infeasible_graph";
    case ErrorCode::kSizeLimit: return "size_limit";
    case ErrorCode::kInvalidK: return "invalid_k";
    case ErrorCode::kDegenerateInput: return "degenerate_input";
    case ErrorCode::kManifestMismatch: return "manifest_mismatch";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kDegenerateLabels: return "degenerate_labels";
    case ErrorCode::kUndefinedMetric: return "undefined_metric";
    case ErrorCode::kInvalidCount: return "invalid_count";
    case ErrorCode::kEmptySelection: return "empty_selection";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInvalidKind: return "invalid_kind";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace oodx
