// Copyright 2026 The QHL Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qhl {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitValid = 0,
    kExitInvalid = 1,
    kExitParseError = 2,
    kExitRuntimeError = 3,
    kExitDepthBounded = 4,
};

/// Runs the tool on arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qhl
