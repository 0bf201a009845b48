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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qhl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Largest absolute entry, the ‖·‖∞ used by all validity checks.
double max_abs(const Matrix& m);

/// ‖U†U − I‖∞ < tol.
bool is_unitary(const Matrix& u, double tol = 1e-9);

/// Hermitian and idempotent within tol.
bool is_projector(const Matrix& q, double tol = 1e-9);

/// Hermitian within tol with every eigenvalue in [-tol, 1 + tol].
bool is_effect(const Matrix& e, double tol = 1e-9);

/// True when n is a positive power of two; writes log2(n) to bits.
bool is_power_of_two(std::size_t n, int& bits);

} // namespace qhl
