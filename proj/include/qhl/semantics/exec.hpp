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

#include <cstdint>

#include "qhl/cqstate/cqstate.hpp"
#include "qhl/syntax/ast.hpp"

namespace qhl {

struct ExecConfig {
    long max_while_iters = 10000;
    double mass_epsilon = 1e-12;  // a loop stops once its guard mass drops below this
    double prune_epsilon = 1e-12; // smaller masses and branch probabilities are dropped
};

struct ExecResult {
    MixedCqState out;
    double residual_mass = 0.0; // mass still inside some loop guard at cutoff
    long iterations_used = 0;   // loop body executions, summed over all loops
};

ExecResult exec(const CmdPtr& c, const MixedCqState& in, const ExecConfig& cfg = {});
ExecResult exec_pure(const CmdPtr& c, const PureCqState& in, const ExecConfig& cfg = {});

} // namespace qhl
