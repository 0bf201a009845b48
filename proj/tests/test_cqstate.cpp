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

#include <doctest.h>

#include <random>

#include "qhl/cqstate/cqstate.hpp"
#include "qhl/cqstate/quantum.hpp"
#include "qhl/error.hpp"
#include "qhl/syntax/ast.hpp"
#include "support/random_ast.hpp"

using namespace qhl;

namespace {

// Test oracle: the full operator as Perm^T (U (x) I) Perm, where Perm moves
// the listed qubits to the front in order.
Matrix full_operator(const Matrix& u, const std::vector<int>& qubits, int m) {
    const Eigen::Index dim = Eigen::Index{1} << m;
    std::vector<int> order = qubits;
    for (int j = 1; j <= m; ++j)
        if (std::find(qubits.begin(), qubits.end(), j) == qubits.end())
            order.push_back(j);
    Matrix perm = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        Eigen::Index nb = 0;
        for (int k = 0; k < m; ++k) {
            const int bit = static_cast<int>((b >> (m - order[static_cast<std::size_t>(k)])) & 1);
            nb |= static_cast<Eigen::Index>(bit) << (m - 1 - k);
        }
        perm(nb, b) = 1.0;
    }
    const Eigen::Index rest = dim / u.rows();
    Matrix big = Matrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            big.block(r * rest, c * rest, rest, rest) = u(r, c) * Matrix::Identity(rest, rest);
    return perm.transpose() * big * perm;
}

Amplitudes haar(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Amplitudes v(Eigen::Index{1} << m);
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = Complex(g(rng), g(rng));
    return v / v.norm();
}

} // namespace

TEST_CASE("gate application agrees with the dense operator") {
    std::mt19937_64 rng(3);
    testing::RandomAst gen(5, 3);
    for (int i = 0; i < 300; ++i) {
        std::vector<int> qs;
        const GatePtr g = gen.gate(qs);
        const Amplitudes v = haar(3, rng);
        const Amplitudes got = apply_gate(v, g->matrix, qs);
        const Amplitudes want = full_operator(g->matrix, qs, 3) * v;
        CHECK((got - want).norm() < 1e-12);
    }
    const Amplitudes v = haar(3, rng);
    const GatePtr ccx = builtin_gate("CCX");
    CHECK((apply_gate(v, ccx->matrix, {3, 1, 2}) - full_operator(ccx->matrix, {3, 1, 2}, 3) * v).norm() < 1e-12);
}

TEST_CASE("qubit 1 is the most significant bit") {
    Amplitudes v = Amplitudes::Zero(4);
    v(0) = 1.0;
    const Amplitudes x1 = apply_gate(v, builtin_gate("X")->matrix, {1});
    CHECK(std::abs(x1(2)) == doctest::Approx(1.0)); // |10>
    const Amplitudes cx = apply_gate(x1, builtin_gate("CX")->matrix, {1, 2});
    CHECK(std::abs(cx(3)) == doctest::Approx(1.0)); // |11>
}

TEST_CASE("measurement follows the Born rule") {
    Amplitudes plus(2);
    plus << std::sqrt(0.5), std::sqrt(0.5);
    const auto br = measure_qubit(plus, 1);
    CHECK(br[0].prob == doctest::Approx(0.5));
    CHECK(br[1].prob == doctest::Approx(0.5));
    CHECK(std::abs(br[1].state(1)) == doctest::Approx(1.0));

    Amplitudes zero = Amplitudes::Zero(2);
    zero(0) = 1.0;
    const auto det = measure_qubit(zero, 1);
    CHECK(det[0].present);
    CHECK_FALSE(det[1].present);
}

TEST_CASE("projector expectations and reduced probabilities") {
    std::mt19937_64 rng(9);
    const Amplitudes v = haar(2, rng);
    const auto q = Projector::mask("", 2, {"0*"});
    CHECK(expect_projector(v, *q) == doctest::Approx(reduced_proj_prob(v, 1, 0)));
    const auto all = Projector::mask("", 2, {"**"});
    CHECK(expect_projector(v, *all) == doctest::Approx(1.0));
    CHECK_THROWS_AS(expect_projector(haar(3, rng), *q), RuntimeError);
}

TEST_CASE("canonical form removes global phase and is idempotent") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        PureCqState s{{{"X", 1}}, haar(2, rng)};
        const PureCqState c = canonicalize(s);
        CHECK(canonicalize(c).quantum == c.quantum);
        PureCqState rotated = s;
        rotated.quantum *= std::polar(1.0, 0.7 * i);
        CHECK(canonicalize(rotated).quantum.isApprox(c.quantum, 1e-10));
        CHECK(same_state(s, rotated));
        CHECK(c.quantum.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(canonicalize(PureCqState{{}, Amplitudes::Zero(2)}), RuntimeError);
}

TEST_CASE("mixed states merge equal supports") {
    Amplitudes v = Amplitudes::Zero(2);
    v(0) = 1.0;
    MixedCqState m;
    m.add({{{"X", 0}}, v}, 0.25);
    m.add({{{"X", 0}}, Complex(0, 1) * v}, 0.25);
    m.add({{{"X", 1}}, v}, 0.5);
    CHECK(m.size() == 2);
    CHECK(m.mass() == doctest::Approx(1.0));
    CHECK(m.mass_of({{{"X", 0}}, v}) == doctest::Approx(0.5));

    const MixedCqState r = restrict(m, Assertion::relation(RelOp::kEq, Arith::prog_var("X"), Arith::constant(1)));
    CHECK(r.mass() == doctest::Approx(0.5));
    CHECK(max_mass_difference(m, m) == 0.0);
    CHECK(max_mass_difference(m, r) == doctest::Approx(0.5));
}

TEST_CASE("integer arithmetic detects overflow and unbound names") {
    const Store s{{"X", std::numeric_limits<std::int64_t>::max()}};
    CHECK_THROWS_AS(eval_arith(Arith::binary(ArithOp::kAdd, Arith::prog_var("X"), Arith::constant(1)), s),
                    RuntimeError);
    CHECK_THROWS_AS(eval_arith(Arith::prog_var("Y"), s), RuntimeError);
    CHECK_THROWS_AS(eval_arith(Arith::log_var("x"), s), RuntimeError);
    CHECK(eval_arith(Arith::binary(ArithOp::kMul, Arith::constant(-3), Arith::constant(4)), s) == -12);
}
