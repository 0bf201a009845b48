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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qhl/error.hpp"
#include "qhl/syntax/ast.hpp"

namespace qhl {

/// Everything a fragment of program or assertion text may refer to.
struct Declarations {
    int num_qubits = 0;
    std::vector<std::string> vars;             // program variables, in order
    std::map<std::string, IntRange> logvars;    // logical variables with quantifier ranges
    std::map<std::string, GatePtr> gates;       // user matrices and oracles
    std::map<std::string, ProjectorPtr> projectors;
    std::map<std::string, AssertPtr> assertions; // referenced as @name
    std::map<std::string, RealPtr> terms;
    std::map<std::string, FormulaPtr> formulas;
    std::map<std::string, CmdPtr> programs;

    bool is_var(const std::string& name) const;
    /// Builtin or declared gate, nullptr when unknown.
    GatePtr gate(const std::string& name) const;
};

struct StateDecl {
    std::string name;
    std::map<std::string, std::int64_t> store; // unlisted variables are 0
    Eigen::VectorXcd amplitudes;
    SourcePos pos;
};

struct MixtureDecl {
    std::string name;
    std::vector<std::pair<double, std::string>> parts;
    SourcePos pos;
};

struct InterpDecl {
    std::string name;
    std::map<std::string, std::int64_t> ints;
    std::map<std::string, double> reals;
    SourcePos pos;
};

/// Either sort of pre/post pair. Exactly one of the two pairs is set.
struct TriplePair {
    bool probabilistic = false;
    AssertPtr dpre, dpost;
    FormulaPtr ppre, ppost;
};

struct TripleDecl {
    std::string name;
    std::string program;
    CmdPtr command;
    TriplePair conds;
    SourcePos pos;
};

struct ProofStep {
    std::string label;
    std::string rule;
    std::vector<std::string> premises;
    CmdPtr command;
    TriplePair conds;
    SourcePos pos;
};

struct ProofDecl {
    std::string name;
    std::string triple; // optional: the triple the last step must conclude
    std::vector<ProofStep> steps;
    SourcePos pos;
};

struct SpecFile {
    Declarations decls;
    std::vector<StateDecl> states;
    std::vector<MixtureDecl> mixtures;
    std::vector<InterpDecl> interps;
    std::vector<std::string> program_order;
    std::vector<TripleDecl> triples;
    std::vector<ProofDecl> proofs;

    const TripleDecl* find_triple(const std::string& name) const;
    const ProofDecl* find_proof(const std::string& name) const;
    const StateDecl* find_state(const std::string& name) const;
    const MixtureDecl* find_mixture(const std::string& name) const;
};

/// Parses a whole spec file. Throws ParseError with line and column.
SpecFile parse_spec(std::string_view text);

// Fragment parsers resolve names against decls. The whole text must be
// consumed.
CmdPtr parse_command(std::string_view text, const Declarations& decls);
AssertPtr parse_assertion(std::string_view text, const Declarations& decls);
RealPtr parse_real(std::string_view text, const Declarations& decls);
FormulaPtr parse_formula(std::string_view text, const Declarations& decls);

} // namespace qhl
