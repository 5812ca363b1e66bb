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

#ifndef OODX_CSV_H_
#define OODX_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oodx::csv {

// Minimal comma-separated tables: no quoting, one header line, trailing
// blank lines ignored. Enough for the numeric files this project exchanges.
struct Table {
  std::filesystem::path source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; kParse if absent.
  int Column(std::string_view name) const;
};

// kIo if the file cannot be opened; kParse on ragged rows.
Table Read(const std::filesystem::path& path);

// kParse with file/row/column context on malformed numbers.
double ParseDouble(std::string_view cell, const Table& table, int row, int col);
long long ParseInt(std::string_view cell, const Table& table, int row, int col);

// Shortest representation that round-trips exactly.
std::string FormatDouble(double value);

// Writes atomically enough for our purposes: truncate and rewrite. kIo on
// failure.
void WriteText(const std::filesystem::path& path, const std::string& text);

}  // namespace oodx::csv

#endif  // OODX_CSV_H_
