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

#include "qhl/semantics/exec.hpp"
#include "qhl/syntax/parser.hpp"
#include "support/random_ast.hpp"

using namespace qhl;

namespace {

Declarations decls(int m) {
    Declarations d;
    d.num_qubits = m;
    d.vars = {"X", "Y"};
    return d;
}

PureCqState basis(int m, std::size_t index, std::int64_t x = 0) {
    PureCqState s;
    s.classical = {{"X", x}, {"Y", 0}};
    s.quantum = Amplitudes::Zero(Eigen::Index{1} << m);
    s.quantum(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
}

ExecResult run(const std::string& prog, const PureCqState& in, int m = 1, const ExecConfig& cfg = {}) {
    return exec_pure(parse_command(prog, decls(m)), in, cfg);
}

} // namespace

TEST_CASE("skip and assignment") {
    const PureCqState s = basis(1, 0, 4);
    const ExecResult r = run("skip", s);
    CHECK(max_mass_difference(r.out, point_dist(s)) == 0.0);
    const ExecResult a = run("X <- X * 2 - 1", s);
    CHECK(a.out.mass_of(basis(1, 0, 7)) == doctest::Approx(1.0));
}

TEST_CASE("random assignment splits the mass") {
    const ExecResult r = run("Y <-$ {0.3: 1, 0.7: 2}", basis(1, 0));
    PureCqState one = basis(1, 0);
    one.classical["Y"] = 1;
    PureCqState two = one;
    two.classical["Y"] = 2;
    CHECK(r.out.mass_of(one) == doctest::Approx(0.3));
    CHECK(r.out.mass_of(two) == doctest::Approx(0.7));
}

TEST_CASE("measurement stores the outcome and collapses the state") {
    const ExecResult r = run("H[q1]; X <<= q1", basis(1, 0));
    CHECK(r.out.size() == 2);
    CHECK(r.out.mass_of(basis(1, 0, 0)) == doctest::Approx(0.5));
    CHECK(r.out.mass_of(basis(1, 1, 1)) == doctest::Approx(0.5));
}

TEST_CASE("conditionals follow the classical guard per support") {
    const ExecResult r = run("H[q1]; X <<= q1; if X = 1 then X[q1] else skip", basis(1, 0));
    CHECK(r.out.mass_of(basis(1, 0, 0)) == doctest::Approx(0.5));
    CHECK(r.out.mass_of(basis(1, 0, 1)) == doctest::Approx(0.5));
}

TEST_CASE("countdown loop runs its body X times") {
    for (int x = 0; x <= 5; ++x) {
        const ExecResult r = run("while X > 0 do (X <- X - 1; H[q1])", basis(1, 0, x));
        CHECK(r.iterations_used == x);
        CHECK(r.residual_mass == 0.0);
        const ExecResult unrolled = exec_pure(repeat(parse_command("H[q1]", decls(1)), x), basis(1, 0, 0));
        CHECK(max_mass_difference(r.out, unrolled.out) < 1e-9);
    }
}

TEST_CASE("almost surely terminating loop converges") {
    const ExecResult r = run("while X = 0 do X <-$ {0.5: 0, 0.5: 1}", basis(1, 0, 0));
    CHECK(r.residual_mass < 1e-9);
    CHECK(r.out.mass_of(basis(1, 0, 1)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("divergent loop leaves its mass as residual") {
    ExecConfig cfg;
    cfg.max_while_iters = 50;
    const ExecResult r = run("while true do skip", basis(1, 0), 1, cfg);
    CHECK(r.out.empty());
    CHECK(r.residual_mass == doctest::Approx(1.0));
    CHECK(r.iterations_used == 50);
}

TEST_CASE("execution is linear in the input distribution") {
    testing::RandomAst gen(21, 2);
    for (int i = 0; i < 200; ++i) {
        const CmdPtr c = gen.command(5);
        const MixedCqState in = gen.mixed_state();
        const MixedCqState whole = exec(c, in).out;
        MixedCqState parts;
        for (const auto& [s, mass] : in.entries())
            parts.add_all(exec_pure(c, s).out, mass);
        CHECK(max_mass_difference(whole, parts) < 1e-9);
        CHECK(whole.mass() == doctest::Approx(in.mass()).epsilon(1e-9));
    }
}
