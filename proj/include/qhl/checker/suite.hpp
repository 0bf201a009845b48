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
#include <string>
#include <vector>

#include "qhl/cqstate/cqstate.hpp"
#include "qhl/syntax/ast.hpp"
#include "qhl/syntax/parser.hpp"

namespace qhl {

struct SuiteParams {
    std::size_t count = 50;
    std::uint64_t seed = 42;
    int num_qubits = 1;
    std::vector<std::string> vars;
    IntRange values{0, 3}; // classical values are drawn uniformly from here
};

struct SuiteEntry {
    std::string name;
    MixedCqState state;
};

/// Input states for a check; pure states appear as point distributions.
struct StateSuite {
    std::vector<SuiteEntry> entries;

    void add(std::string name, MixedCqState state) { entries.push_back({std::move(name), std::move(state)}); }
    void append(const StateSuite& other);
    std::size_t size() const { return entries.size(); }
};

/// Haar-uniform amplitudes and uniform classical values, deterministic in
/// the seed.
std::vector<PureCqState> sample_pure_states(const SuiteParams& p);

/// Random convex combinations of 1 to 4 pure states, total mass 1.
std::vector<MixedCqState> sample_mixed_states(const SuiteParams& p);

/// Pure suite (point distributions) or mixed suite, named random#i.
StateSuite sample_states(const SuiteParams& p, bool mixed);

/// Random states satisfying the precondition of a triple. Candidates are
/// projected onto the qubit and variable literals on the conjunctive spine
/// of the precondition, then filtered by evaluation; the result may hold
/// fewer than p.count states when the precondition is rarely satisfiable.
StateSuite sample_satisfying(const TriplePair& conds, const SuiteParams& p, const Interpretation& interp = {},
                             bool mixed = false);

/// Explicit states and mixtures of a spec file.
StateSuite declared_states(const SpecFile& spec);

} // namespace qhl
