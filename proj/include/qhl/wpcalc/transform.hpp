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

#include <cstddef>

#include "qhl/syntax/ast.hpp"

namespace qhl {

enum class MeasurePreterm {
    kLinear,  // ([P0]phi[X/0] => P0_j) + ([P1]phi[X/1] => P1_j)
    kProduct, // (true => P0_j) * P([P0]phi[X/0]) + (true => P1_j) * P([P1]phi[X/1])
};

struct DepthConfig {
    int wp_while_depth = 64;  // K: members psi_0..psi_K of the bounded conjunction for while
    int pt_while_terms = 64;  // N: terms of the outer while series in preterms
    int pt_split_depth = 2;   // exit-time classes wp(0..S) used inside each while preterm
    std::size_t node_budget = 2'000'000;
    MeasurePreterm measure_form = MeasurePreterm::kLinear;
    int num_qubits = 0;       // size of projectors created by the transformers
};

/// Weakest precondition of a deterministic assertion.
AssertPtr wp_det(const CmdPtr& c, const AssertPtr& phi, const DepthConfig& d = {});

/// r/B: r evaluated on the part of a state where B holds.
RealPtr cond_term(const RealPtr& r, const AssertPtr& b);

/// Weakest preterm. Throws TransformError when a conjugated projector fails
/// re-validation or the term outgrows the node budget.
RealPtr preterm(const CmdPtr& c, const RealPtr& r, const DepthConfig& d = {});

/// Weakest precondition of a probabilistic formula.
FormulaPtr wp_prob(const CmdPtr& c, const FormulaPtr& f, const DepthConfig& d = {});

/// d with num_qubits filled in from c and the terms of f when it is 0.
DepthConfig infer_qubits(const DepthConfig& d, const CmdPtr& c, const FormulaPtr& f);

/// U^dagger Q U for U applied to the listed qubits of an m-qubit space.
ProjectorPtr conjugate_unitary(const ProjectorPtr& q, const Gate& g, const std::vector<int>& qubits);

/// P^i_j Q P^i_j. Masks stay masks.
ProjectorPtr conjugate_measure(const ProjectorPtr& q, int j, int i);

/// Diagonal projector onto basis states whose qubit j is i.
ProjectorPtr qubit_projector(int num_qubits, int j, int i);

} // namespace qhl
