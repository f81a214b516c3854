// Copyright 2026 The slidesep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The slidesep command line, callable in-process. main() is a thin wrapper.

#ifndef SLIDESEP_TOOLS_CLI_HPP_
#define SLIDESEP_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace slidesep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

// args excludes the program name, e.g. {"synth", "--n", "5", "--seed", "7", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slidesep::cli

#endif  // SLIDESEP_TOOLS_CLI_HPP_
