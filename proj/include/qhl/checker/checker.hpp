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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhl/assertions/eval.hpp"
#include "qhl/checker/suite.hpp"
#include "qhl/semantics/exec.hpp"
#include "qhl/wpcalc/transform.hpp"

namespace qhl {

/// {pre} prog {post} of either sort.
struct Triple {
    std::string name;
    CmdPtr prog;
    TriplePair conds;
};

struct NamedInterp {
    std::string name;
    Interpretation interp;
};

struct CheckConfig {
    SatConfig sat;
    ExecConfig exec;
    DepthConfig depth;
    double residual_tol = 1e-9; // more mass left in a loop makes a check depth-bounded
};

enum class Status { kValidOnSuite, kInvalid, kDepthBounded };

const char* to_string(Status s);

struct Counterexample {
    std::size_t state_index = 0;
    std::string state_name;
    std::string interp_name;
    std::string method; // "semantic" or "wp"
    MixedCqState input;
    MixedCqState output;
    std::vector<PureCqState> failing_supports; // output supports (semantic) or input supports (wp)
    std::vector<std::pair<std::string, double>> observed;
};

struct StateLog {
    std::size_t state_index = 0;
    std::string state_name;
    std::string interp_name;
    bool pre_holds = false;
    std::optional<bool> semantic; // post on the executed output
    std::optional<bool> wp;       // transformed postcondition on the input
    double residual_mass = 0.0;
};

struct Verdict {
    Status status = Status::kValidOnSuite;
    std::string method;
    std::optional<Counterexample> counterexample;
    std::vector<StateLog> log;
    Labels labels;
    bool checked_on_suite = false; // consequence side conditions were evaluated, not proved
    std::size_t states_checked = 0; // suite states whose precondition held
    std::size_t disagreements = 0;  // states where wp and execution differ
    std::vector<std::string> diagnostics;

    bool valid() const { return status == Status::kValidOnSuite; }
};

/// Executes the program from every suite state satisfying the precondition
/// and evaluates the postcondition on the output.
Verdict check_semantic(const Triple& t, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                       const CheckConfig& cfg = {});

/// Evaluates wp of the postcondition on every suite state satisfying the
/// precondition and cross-checks each state against execution.
Verdict check_wp(const Triple& t, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                 const CheckConfig& cfg = {});

/// Interpretations of a spec file with quantifier ranges from its logvars;
/// a single empty interpretation when none is declared.
std::vector<NamedInterp> interpretations(const SpecFile& spec);

/// Qubit count of the suite's states, 0 when empty.
int suite_qubits(const StateSuite& suite);

} // namespace qhl
