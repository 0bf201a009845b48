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

#include <array>
#include <vector>

#include "qhl/cqstate/linalg.hpp"
#include "qhl/syntax/ast.hpp"

namespace qhl {

/// Amplitude vector over m qubits. Qubit 1 is the most significant bit of
/// the basis index.
using Amplitudes = Eigen::VectorXcd;

/// log2 of the vector length; throws RuntimeError unless a power of two.
int num_qubits_of(const Amplitudes& v);

/// Bit position of qubit j (1-based) inside a basis index over m qubits.
inline int bit_position(int m, int j) { return m - j; }

/// U on the listed qubits, identity elsewhere. The first listed qubit is the
/// most significant bit of U's local index. Works by index striding.
Amplitudes apply_gate(const Amplitudes& v, const Matrix& u, const std::vector<int>& qubits);

/// Unnormalized (P^i_j (x) I) v.
Amplitudes project_qubit(const Amplitudes& v, int j, int i);

struct MeasureBranch {
    double prob = 0.0;
    bool present = false; // false when prob <= threshold
    Amplitudes state;     // normalized, valid only when present
};

/// Born-rule split of v on qubit j into outcomes 0 and 1.
std::array<MeasureBranch, 2> measure_qubit(const Amplitudes& v, int j, double threshold = 1e-12);

/// <v|Q|v>, clamped to [0, 1]. Throws RuntimeError on a dimension mismatch.
double expect_projector(const Amplitudes& v, const Projector& q);

/// Tr(P^i Tr_{-j}(v v^dagger)).
double reduced_proj_prob(const Amplitudes& v, int j, int i);

} // namespace qhl
