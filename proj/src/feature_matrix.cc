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


#include "oodx/feature_matrix.h"

#include <utility>

#include "oodx/error.h"

namespace oodx {

FeatureMatrix::FeatureMatrix(std::string name, int rows, int cols,
                             std::vector<double> data)
    : name(std::move(name)), rows(rows), cols(cols), data(std::move(data)) {
  if (rows < 0 || cols < 0 ||
      this->data.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::kInvalidInput,
                "feature matrix '" + this->name + "' has inconsistent shape");
  }
}

FeatureMatrix FeatureMatrix::SelectRows(std::span<const int> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * cols);
  for (int r : indices) {
    const auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return FeatureMatrix(name, static_cast<int>(indices.size()), cols, std::move(out));
}

}  // namespace oodx
