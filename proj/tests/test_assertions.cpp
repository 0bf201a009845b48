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
#include "qhl/syntax/parser.hpp"

using namespace qhl;

namespace {

Declarations decls(int m = 1) {
    Declarations d;
    d.num_qubits = m;
    d.vars = {"X"};
    d.logvars["x"] = {0, 3};
    return d;
}

PureCqState state(std::int64_t x, std::vector<Complex> amps) {
    PureCqState s;
    s.classical = {{"X", x}};
    s.quantum = Eigen::Map<Amplitudes>(amps.data(), static_cast<Eigen::Index>(amps.size()));
    return s;
}

const double kR = std::sqrt(0.5);

bool sat(const std::string& a, const PureCqState& s, Labels* l = nullptr) {
    Interpretation in;
    in.ranges["x"] = {0, 3};
    return sat_pure(parse_assertion(a, decls(num_qubits_of(s.quantum))), s, in, {}, l);
}

MixedCqState split() {
    MixedCqState m;
    m.add(state(0, {1, 0}), 0.4);
    m.add(state(1, {1, 0}), 0.6);
    return m;
}

double real(const std::string& r, const MixedCqState& m) { return eval_real(parse_real(r, decls()), m); }
bool prob(const std::string& f, const MixedCqState& m) { return sat_prob(parse_formula(f, decls()), m); }

} // namespace

TEST_CASE("pure satisfaction") {
    CHECK(sat("P0(1)", state(0, {1, 0})));
    CHECK(sat("[H[q1]] P0(1)", state(0, {kR, kR})));
    CHECK(sat("[Proj 1,0] X = 0", state(0, {kR, kR})));
    CHECK_FALSE(sat("P0(1) && P1(1)", state(0, {kR, kR})));
    CHECK_FALSE(sat("P0(1) && P1(1)", state(0, {1, 0})));
    CHECK(sat("P0(1) || P1(1)", state(0, {1, 0})));
    CHECK_FALSE(sat("P0(1) || P1(1)", state(0, {kR, kR})));
    CHECK(sat("X = 0 -> P0(1)", state(0, {1, 0})));
    CHECK_FALSE(sat("X = 0 -> P1(1)", state(0, {1, 0})));
}

TEST_CASE("projector atoms test subspace membership") {
    CHECK(sat("P1(2)", state(0, {0, 1, 0, 0})));
    CHECK(sat("P0(1)", state(0, {0, 1, 0, 0})));
    CHECK_FALSE(sat("P0(1)", state(0, {kR, 0, kR, 0})));
    CHECK(sat("[CX[q1, q2]] P0(2)", state(0, {kR, 0, 0, kR})));
}

TEST_CASE("quantifiers range over the declared domain") {
    Labels l;
    CHECK(sat("forall x. x >= 0", state(0, {1, 0}), &l));
    CHECK(l.range_bounded);
    CHECK_FALSE(sat("forall x. X < x", state(0, {1, 0})));
    Interpretation none;
    CHECK_THROWS_AS(sat_pure(parse_assertion("forall x. x = x", decls()), state(0, {1, 0}), none), RuntimeError);
}

TEST_CASE("a zero-probability projection holds vacuously and is labelled") {
    Labels l;
    CHECK(sat("[Proj 1,1] false", state(0, {1, 0}), &l));
    CHECK(l.vacuous_box_proj);
}

TEST_CASE("possibility semantics on mixed states") {
    CHECK(sat_mixed(Assertion::falsity(), MixedCqState{}));
    MixedCqState m;
    m.add(state(1, {1, 0}), 0.5);
    m.add(state(2, {1, 0}), 0.5);
    CHECK(sat_mixed(parse_assertion("X >= 1", decls()), m));
    CHECK_FALSE(sat_mixed(parse_assertion("X = 1", decls()), m));
    CHECK(sat_mixed(Assertion::truth(), m));
}

TEST_CASE("real expressions") {
    const MixedCqState m = split();
    CHECK(real("P[ true ]", m) == doctest::Approx(1.0));
    CHECK(real("P[ X = 1 ]", m) == doctest::Approx(0.6));
    CHECK(real("2 * P[ X = 0 ] - 0.3", m) == doctest::Approx(0.5));
    CHECK(real("(true => P0(1))", point_dist(state(0, {kR, kR}))) == doctest::Approx(0.5));
    CHECK(real("(X = 1 => mask{1})", split()) == doctest::Approx(0.0));
    CHECK(real("(X = 1 => mask{*})", split()) == doctest::Approx(0.6));
    CHECK(real("(true => matrix{0.5, 0.5, 0.5, 0.5})", point_dist(state(0, {kR, kR}))) == doctest::Approx(1.0));
    Labels l;
    CHECK(eval_real(parse_real("SUM[2]{P[ X = 0 ], P[ X = 1 ], 0.5}", decls()), m, {}, {}, &l) ==
          doctest::Approx(1.5));
    CHECK(l.depth_bounded);
}

TEST_CASE("probabilistic formulas") {
    MixedCqState full;
    full.add(state(0, {1, 0}), 1.0);
    CHECK(prob("P[ true ] = 1", full));
    CHECK_FALSE(prob("P[ X = 0 ] > 0.5", split()));
    CHECK(prob("!(P[ false ] > 0)", split()));
    CHECK(prob("P[ X = 0 ] < 0.5 && P[ X = 1 ] >= 0.6", split()));
}

TEST_CASE("real comparisons use an absolute slack") {
    CHECK(compare_reals(RelOp::kEq, 1.0, 1.0 + 1e-10, 1e-9));
    CHECK_FALSE(compare_reals(RelOp::kLt, 1.0, 1.0 + 1e-10, 1e-9));
    CHECK(compare_reals(RelOp::kLe, 1.0 + 1e-10, 1.0, 1e-9));
    CHECK(compare_reals(RelOp::kGt, 1.1, 1.0, 1e-9));
    CHECK(compare_reals(RelOp::kNe, 1.1, 1.0, 1e-9));
}

TEST_CASE("bounded conjunctions evaluate every member") {
    Labels l;
    const AssertPtr a = Assertion::big_and({Assertion::truth(), Assertion::proj(1, 0)}, 1);
    CHECK(sat_pure(a, state(0, {1, 0}), {}, {}, &l));
    CHECK(l.depth_bounded);
    CHECK_FALSE(sat_pure(a, state(0, {0, 1})));
}
