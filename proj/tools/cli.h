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


#ifndef OODX_TOOLS_CLI_H_
#define OODX_TOOLS_CLI_H_

#include <ostream>

namespace oodx::cli {

// Runs one command line. Returns the process exit status; failures print a
// single "oodx: error: ..." line on `err`.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oodx::cli

#endif  // OODX_TOOLS_CLI_H_
