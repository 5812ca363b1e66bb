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


#ifndef OODX_FEATURE_MATRIX_H_
#define OODX_FEATURE_MATRIX_H_

#include <span>
#include <string>
#include <vector>

namespace oodx {

// Row-major N x D matrix of sample features for one named feature set.
struct FeatureMatrix {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::string name, int rows, int cols, std::vector<double> data);

  double operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols,
            static_cast<std::size_t>(cols)};
  }
  FeatureMatrix SelectRows(std::span<const int> indices) const;
};

}  // namespace oodx

#endif  // OODX_FEATURE_MATRIX_H_
