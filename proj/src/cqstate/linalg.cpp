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

#include "qhl/cqstate/linalg.hpp"

namespace qhl {

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            best = std::max(best, std::abs(m(r, c)));
    return best;
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols() || u.rows() == 0)
        return false;
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    return max_abs(u.adjoint() * u - id) < tol;
}

bool is_projector(const Matrix& q, double tol) {
    if (q.rows() != q.cols() || q.rows() == 0)
        return false;
    return max_abs(q - q.adjoint()) < tol && max_abs(q * q - q) < tol;
}

bool is_effect(const Matrix& e, double tol) {
    if (e.rows() != e.cols() || e.rows() == 0 || max_abs(e - e.adjoint()) >= tol)
        return false;
    const Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return ev.minCoeff() >= -tol && ev.maxCoeff() <= 1.0 + tol;
}

bool is_power_of_two(std::size_t n, int& bits) {
    if (n < 2 || (n & (n - 1)) != 0)
        return false;
    bits = 0;
    while ((std::size_t{1} << bits) < n)
        ++bits;
    return true;
}

} // namespace qhl
