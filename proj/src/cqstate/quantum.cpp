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

#include "qhl/cqstate/quantum.hpp"

#include <algorithm>
#include <string>

#include "qhl/error.hpp"

namespace qhl {

int num_qubits_of(const Amplitudes& v) {
    int bits = 0;
    if (!is_power_of_two(static_cast<std::size_t>(v.size()), bits))
        throw RuntimeError("state vector length " + std::to_string(v.size()) + " is not a power of two");
    return bits;
}

Amplitudes apply_gate(const Amplitudes& v, const Matrix& u, const std::vector<int>& qubits) {
    const int m = num_qubits_of(v);
    const int k = static_cast<int>(qubits.size());
    if (u.rows() != (Eigen::Index{1} << k))
        throw RuntimeError("gate dimension does not match " + std::to_string(k) + " target qubit(s)");
    std::vector<std::size_t> offsets(std::size_t{1} << k, 0);
    std::size_t target_mask = 0;
    for (int b = 0; b < k; ++b) {
        const int q = qubits[static_cast<std::size_t>(b)];
        if (q < 1 || q > m)
            throw RuntimeError("qubit " + std::to_string(q) + " out of range 1.." + std::to_string(m));
        target_mask |= std::size_t{1} << bit_position(m, q);
    }
    for (std::size_t l = 0; l < offsets.size(); ++l) {
        std::size_t off = 0;
        for (int b = 0; b < k; ++b)
            if ((l >> (k - 1 - b)) & 1U)
                off |= std::size_t{1} << bit_position(m, qubits[static_cast<std::size_t>(b)]);
        offsets[l] = off;
    }

    Amplitudes out(v.size());
    Eigen::VectorXcd local(static_cast<Eigen::Index>(offsets.size()));
    const auto dim = static_cast<std::size_t>(v.size());
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_mask)
            continue;
        for (std::size_t l = 0; l < offsets.size(); ++l)
            local(static_cast<Eigen::Index>(l)) = v(static_cast<Eigen::Index>(base | offsets[l]));
        const Eigen::VectorXcd mapped = u * local;
        for (std::size_t l = 0; l < offsets.size(); ++l)
            out(static_cast<Eigen::Index>(base | offsets[l])) = mapped(static_cast<Eigen::Index>(l));
    }
    return out;
}

Amplitudes project_qubit(const Amplitudes& v, int j, int i) {
    const int m = num_qubits_of(v);
    if (j < 1 || j > m)
        throw RuntimeError("qubit " + std::to_string(j) + " out of range 1.." + std::to_string(m));
    const int pos = bit_position(m, j);
    Amplitudes out = v;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (static_cast<int>((static_cast<std::size_t>(k) >> pos) & 1U) != i)
            out(k) = 0.0;
    return out;
}

double reduced_proj_prob(const Amplitudes& v, int j, int i) {
    const int m = num_qubits_of(v);
    if (j < 1 || j > m)
        throw RuntimeError("qubit " + std::to_string(j) + " out of range 1.." + std::to_string(m));
    const int pos = bit_position(m, j);
    double p = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (static_cast<int>((static_cast<std::size_t>(k) >> pos) & 1U) == i)
            p += std::norm(v(k));
    return std::clamp(p / v.squaredNorm(), 0.0, 1.0);
}

std::array<MeasureBranch, 2> measure_qubit(const Amplitudes& v, int j, double threshold) {
    std::array<MeasureBranch, 2> out;
    // Relative to the stored norm, which rounding may move off 1 by ~1e-12.
    const double total = v.squaredNorm();
    for (int i = 0; i < 2; ++i) {
        Amplitudes proj = project_qubit(v, j, i);
        const double n = proj.squaredNorm();
        const double p = n / total;
        out[static_cast<std::size_t>(i)].prob = p;
        if (p > threshold) {
            out[static_cast<std::size_t>(i)].present = true;
            out[static_cast<std::size_t>(i)].state = proj / std::sqrt(n);
        }
    }
    return out;
}

double expect_projector(const Amplitudes& v, const Projector& q) {
    const int m = num_qubits_of(v);
    if (q.num_qubits != m)
        throw RuntimeError("projector acts on " + std::to_string(q.num_qubits) + " qubits, state has " +
                           std::to_string(m));
    double e = 0.0;
    if (q.kind == Projector::Kind::kMask) {
        for (Eigen::Index k = 0; k < v.size(); ++k)
            if (q.matches(static_cast<std::size_t>(k)))
                e += std::norm(v(k));
    } else {
        e = v.dot(q.dense * v).real();
    }
    return std::clamp(e / v.squaredNorm(), 0.0, 1.0);
}

} // namespace qhl
