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

#include "qhl/assertions/eval.hpp"
#include "qhl/error.hpp"
#include "qhl/semantics/exec.hpp"
#include "qhl/syntax/parser.hpp"
#include "qhl/syntax/printer.hpp"
#include "qhl/wpcalc/transform.hpp"
#include "support/random_ast.hpp"

using namespace qhl;

namespace {

Declarations decls(int m = 1) {
    Declarations d;
    d.num_qubits = m;
    d.vars = {"X", "Y"};
    return d;
}

CmdPtr cmd(const std::string& s, int m = 1) { return parse_command(s, decls(m)); }
AssertPtr as(const std::string& s, int m = 1) { return parse_assertion(s, decls(m)); }
RealPtr re(const std::string& s, int m = 1) { return parse_real(s, decls(m)); }

DepthConfig depth(int m) {
    DepthConfig d;
    d.num_qubits = m;
    return d;
}

} // namespace

TEST_CASE("wp examples") {
    CHECK(pretty(wp_det(cmd("skip"), as("X = 1"))) == "X = 1");
    CHECK(pretty(wp_det(cmd("X <- 3"), as("X = 3"))) == "3 = 3");
    CHECK(pretty(wp_det(cmd("H[q1]"), as("P0(1)"))) == "[H[q1]] P0(1)");
    CHECK(pretty(wp_det(cmd("X <<= q1"), as("X = 0"))) ==
          "([Proj 1,0] (0 = 0) || P1(1)) && ([Proj 1,1] (1 = 0) || P0(1))");
    CHECK(pretty(wp_det(cmd("X <-$ {0.5: 1, 0.5: 2}"), as("X > 0"))) == "1 > 0 && 2 > 0");
    CHECK(pretty(wp_det(cmd("if X = 0 then skip else X <- 0"), as("X = 0"))) ==
          "X = 0 && X = 0 || !(X = 0) && 0 = 0");
}

TEST_CASE("wp of a measurement is equivalent to P0 of the measured qubit") {
    const AssertPtr w = wp_det(cmd("X <<= q1"), as("X = 0"));
    testing::RandomAst gen(4, 1);
    for (int i = 0; i < 200; ++i) {
        PureCqState s = gen.pure_state();
        if (i % 2)
            s.quantum = Amplitudes::Unit(2, i % 4 == 1 ? 0 : 1);
        CHECK(sat_pure(w, s) == sat_pure(as("P0(1)"), s));
    }
}

TEST_CASE("wp of a countdown loop matches execution") {
    const CmdPtr c = cmd("while X > 0 do (X <- X - 1; H[q1])");
    const AssertPtr post = as("P0(1)");
    const AssertPtr w = wp_det(c, post, depth(1));
    testing::RandomAst gen(8, 1);
    for (int x = 0; x <= 5; ++x) {
        for (int i = 0; i < 10; ++i) {
            PureCqState s = gen.pure_state();
            if (i < 2)
                s.quantum = Amplitudes::Unit(2, i);
            s.classical["X"] = x;
            CHECK(sat_pure(w, s) == sat_mixed(post, exec_pure(c, s).out));
        }
    }
}

TEST_CASE("conditional terms") {
    const AssertPtr b = as("X > 0");
    CHECK(pretty(cond_term(re("0.5"), b)) == "0.5");
    CHECK(pretty(cond_term(re("P[ X = 1 ]"), b)) == "P[ X = 1 && X > 0 ]");
    CHECK(pretty(cond_term(re("(P0(1) => mask{0})"), b)) == "(P0(1) && X > 0 => mask{0})");
    CHECK(pretty(cond_term(re("P[ true ] + $p"), b)) == "P[ true && X > 0 ] + $p");
}

TEST_CASE("preterm examples") {
    CHECK(pretty(preterm(cmd("skip"), re("P[ X = 1 ]"))) == "P[ X = 1 ]");
    CHECK(pretty(preterm(cmd("X <- 1"), re("P[ X = 1 ]"))) == "P[ 1 = 1 ]");
    CHECK(pretty(preterm(cmd("X <-$ {0.3: 1, 0.7: 2}"), re("P[ X = 1 ]"))) ==
          "0.3 * P[ 1 = 1 && !(2 = 1) ] + 0.7 * P[ !(1 = 1) && 2 = 1 ] + 1 * P[ 1 = 1 && 2 = 1 ]");

    const RealPtr h = preterm(cmd("H[q1]"), re("(true => P0(1))"));
    REQUIRE(h->kind == RealExpr::Kind::kCqCond);
    CHECK(pretty(h->assertion) == "[H[q1]] true");
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs(h->projector->to_dense() - plus) < 1e-12);

    CHECK(pretty(preterm(cmd("X <<= q1"), re("P[ X = 0 ]"), depth(1))) ==
          "([Proj 1,0] (0 = 0) => mask{0}) + ([Proj 1,1] (1 = 0) => mask{1})");
    DepthConfig product = depth(1);
    product.measure_form = MeasurePreterm::kProduct;
    CHECK(pretty(preterm(cmd("X <<= q1"), re("P[ X = 0 ]"), product)) ==
          "(true => mask{0}) * P[ [Proj 1,0] (0 = 0) ] + (true => mask{1}) * P[ [Proj 1,1] (1 = 0) ]");
    CHECK(pretty(preterm(cmd("X <<= q1"), re("(true => mask{*})"), depth(1))) ==
          "([Proj 1,0] true => mask{0}) + ([Proj 1,1] true => mask{1})");
}

TEST_CASE("measured projectors keep the matching patterns") {
    const auto q = Projector::mask("", 2, {"1*", "*0"});
    CHECK(conjugate_measure(q, 1, 0)->patterns == std::vector<std::string>{"00"});
    CHECK(conjugate_measure(q, 1, 1)->patterns == std::vector<std::string>{"1*", "10"});
    CHECK(conjugate_measure(Projector::mask("", 1, {"1"}), 1, 0)->patterns.empty());
    CHECK(qubit_projector(3, 2, 1)->patterns == std::vector<std::string>{"*1*"});
}

TEST_CASE("preterm of a loop matches execution") {
    const CmdPtr c = cmd("while X > 0 do (X <- X - 1; H[q1])");
    const RealPtr r = re("P[ P0(1) ] + (X = 0 => mask{1})");
    const RealPtr p = preterm(c, r, depth(1));
    testing::RandomAst gen(12, 1);
    for (int i = 0; i < 20; ++i) {
        MixedCqState m;
        const MixedCqState base = gen.mixed_state();
        for (const auto& [s, mass] : base.entries()) {
            PureCqState t = s;
            t.classical["X"] = gen.uniform(0, 3);
            m.add(t, mass);
        }
        CHECK(std::abs(eval_real(p, m) - eval_real(r, exec(c, m).out)) < 1e-7);
    }
}

TEST_CASE("the node budget stops runaway preterms") {
    DepthConfig d = depth(1);
    d.node_budget = 100;
    CHECK_THROWS_AS(preterm(cmd("while X > 0 do (X <- X - 1; H[q1])"), re("P[ P0(1) ]"), d), TransformError);
}

TEST_CASE("wp of probabilistic formulas") {
    const auto f = parse_formula("P[ X = 1 ] = 1", decls());
    CHECK(pretty(wp_prob(cmd("X <- 1"), f)) == "P[ 1 = 1 ] = 1");
    CHECK(pretty(wp_prob(cmd("skip"), f)) == "P[ X = 1 ] = 1");
    const auto g = parse_formula("P[ X = 1 ] = 1 && !(P[ X = 2 ] > 0)", decls());
    CHECK(pretty(wp_prob(cmd("X <- X + 1"), g)) == "P[ X + 1 = 1 ] = 1 && !(P[ X + 1 = 2 ] > 0)");
}

TEST_CASE("wp, preterms and conditional terms agree with execution on random programs") {
    testing::RandomAst gen(99, 2);
    const Interpretation in = testing::test_interp();
    for (int i = 0; i < 100; ++i) {
        const CmdPtr c = gen.command(5);
        const AssertPtr phi = gen.assertion(2);
        const PureCqState s = gen.pure_state();
        CHECK(sat_pure(wp_det(c, phi, depth(2)), s, in) == sat_mixed(phi, exec_pure(c, s).out, in));

        const RealPtr r = gen.real(2);
        const MixedCqState m = gen.mixed_state();
        CHECK(std::abs(eval_real(preterm(c, r, depth(2)), m, in) - eval_real(r, exec(c, m).out, in)) < 1e-7);

        const AssertPtr b = gen.guard(1);
        CHECK(std::abs(eval_real(cond_term(r, b), m, in) - eval_real(r, restrict(m, b), in)) < 1e-9);
    }
}
