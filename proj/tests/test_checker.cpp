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

#include <fstream>
#include <sstream>

#include "qhl/checker/checker.hpp"
#include "qhl/checker/proof.hpp"
#include "qhl/error.hpp"
#include "qhl/syntax/parser.hpp"
#include "support/random_ast.hpp"

using namespace qhl;

namespace {

SpecFile load(const std::string& file) {
    std::ifstream in(std::string(QHL_PROGRAMS_DIR) + "/" + file);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

Triple triple(const SpecFile& spec, const std::string& name) {
    const TripleDecl* t = spec.find_triple(name);
    REQUIRE(t != nullptr);
    return {t->name, t->command, t->conds};
}

StateSuite suite_for(const SpecFile& spec, const Triple& t, bool mixed) {
    SuiteParams p;
    p.num_qubits = spec.decls.num_qubits;
    p.vars = spec.decls.vars;
    StateSuite s = declared_states(spec);
    s.append(sample_satisfying(t.conds, p, {}, mixed));
    p.seed += 1;
    s.append(sample_states(p, mixed));
    return s;
}

Declarations decls1() {
    Declarations d;
    d.num_qubits = 1;
    d.vars = {"X", "Y"};
    return d;
}

} // namespace

TEST_CASE("sampled states are deterministic and normalized") {
    SuiteParams p;
    p.count = 3;
    p.num_qubits = 2;
    p.vars = {"X"};
    const auto a = sample_pure_states(p);
    const auto b = sample_pure_states(p);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].classical == b[i].classical);
        CHECK((a[i].quantum - b[i].quantum).norm() == 0.0);
        CHECK(std::abs(a[i].quantum.norm() - 1.0) < 1e-9);
    }
    p.seed = 43;
    CHECK((sample_pure_states(p)[0].quantum - a[0].quantum).norm() > 1e-6);

    p.values = {0, 0};
    p.count = 20;
    for (const auto& s : sample_pure_states(p))
        CHECK(s.classical.at("X") == 0);
    for (const auto& m : sample_mixed_states(p)) {
        CHECK(std::abs(m.mass() - 1.0) < 1e-9);
        CHECK(m.size() >= 1);
    }
}

TEST_CASE("satisfying samples satisfy the precondition") {
    const Declarations d = decls1();
    TriplePair c;
    c.dpre = parse_assertion("X = 2 && P1(1)", d);
    c.dpost = parse_assertion("true", d);
    SuiteParams p;
    p.vars = d.vars;
    const StateSuite s = sample_satisfying(c, p);
    CHECK(s.size() > 0);
    for (const auto& e : s.entries) {
        CHECK(e.name.rfind("sat#", 0) == 0);
        CHECK(sat_mixed(c.dpre, e.state));
    }
}

TEST_CASE("declared states resolve stores, amplitudes and mixtures") {
    const SpecFile spec = load("loops.qhl");
    const StateSuite s = declared_states(spec);
    REQUIRE(s.size() >= 2);
    CHECK(s.entries[0].name == "start");
    const auto& [start, mass] = *s.entries[0].state.entries().begin();
    CHECK(mass == doctest::Approx(1.0));
    CHECK(start.classical.at("X") == 3);
    CHECK(start.classical.at("Y") == 0);
}

TEST_CASE("Deutsch triples") {
    const SpecFile spec = load("deutsch.qhl");
    const auto interps = interpretations(spec);
    for (const char* name : {"const_f0", "const_f1", "balanced_fid", "balanced_fneg"}) {
        const Triple t = triple(spec, name);
        const StateSuite s = suite_for(spec, t, false);
        const Verdict v = check_semantic(t, s, interps);
        CHECK_MESSAGE(v.valid(), name);
        CHECK(v.states_checked > 0);
        const Verdict w = check_wp(t, s, interps);
        CHECK_MESSAGE(w.valid(), name);
        CHECK(w.disagreements == 0);
    }
    const Triple bad = triple(spec, "const_f0_wrong");
    const Verdict v = check_semantic(bad, suite_for(spec, bad, false), interps);
    CHECK(v.status == Status::kInvalid);
    REQUIRE(v.counterexample);
    CHECK(!v.counterexample->failing_supports.empty());
    CHECK(v.counterexample->failing_supports[0].classical.at("X") == 0);
}

TEST_CASE("measuring |+> does not guarantee outcome 0") {
    const Declarations d = decls1();
    Triple t{"m", parse_command("X <<= q1", d), {}};
    t.conds.dpre = parse_assertion("true", d);
    t.conds.dpost = parse_assertion("X = 0", d);
    PureCqState plus;
    plus.classical = {{"X", 0}, {"Y", 0}};
    plus.quantum = Amplitudes::Constant(2, 1.0 / std::sqrt(2.0));
    StateSuite s;
    s.add("plus", point_dist(plus));
    for (const Verdict& v : {check_semantic(t, s, {{"default", {}}}), check_wp(t, s, {{"default", {}}})}) {
        CHECK(v.status == Status::kInvalid);
        REQUIRE(v.counterexample);
        CHECK(v.counterexample->state_name == "plus");
        CHECK(v.counterexample->output.mass() == doctest::Approx(1.0));
    }
    const Verdict v = check_semantic(t, s, {{"default", {}}});
    double mass_one = 0.0;
    for (const auto& [st, m] : v.counterexample->output.entries())
        if (st.classical.at("X") == 1)
            mass_one += m;
    CHECK(mass_one == doctest::Approx(0.5));

    t.conds.dpre = parse_assertion("false", d);
    const Verdict vac = check_semantic(t, s, {{"default", {}}});
    CHECK(vac.valid());
    CHECK(vac.states_checked == 0);
}

TEST_CASE("loops report depth bounds and invalid triples") {
    const SpecFile spec = load("loops.qhl");
    const auto interps = interpretations(spec);
    const Triple ends = triple(spec, "countdown_ends");
    CHECK(check_semantic(ends, suite_for(spec, ends, false), interps).valid());
    const Triple spin = triple(spec, "spin_false");
    CHECK(check_semantic(spin, suite_for(spec, spin, false), interps).status == Status::kDepthBounded);
    const Triple mz = triple(spec, "measure_zero");
    CHECK(check_semantic(mz, suite_for(spec, mz, false), interps).status == Status::kInvalid);
}

TEST_CASE("the wp checker agrees with execution on random loop-free triples") {
    testing::RandomAst gen(5, 1);
    const Interpretation in = testing::test_interp();
    const std::vector<NamedInterp> interps{{"t", in}};
    SuiteParams p;
    p.count = 8;
    p.vars = testing::prog_vars();
    p.values = {0, 2};
    for (int i = 0; i < 40; ++i) {
        Triple t{"r", gen.command(4), {}};
        t.conds.dpre = gen.guard(1);
        t.conds.dpost = gen.assertion(2);
        p.seed = static_cast<std::uint64_t>(i);
        const StateSuite s = sample_states(p, false);
        const Verdict a = check_semantic(t, s, interps);
        const Verdict b = check_wp(t, s, interps);
        CHECK(a.valid() == b.valid());
        CHECK(b.disagreements == 0);
    }
}

TEST_CASE("proof steps are checked rule by rule") {
    const SpecFile spec = parse_spec(
        "qubits 1\nvars X\n"
        "proof good {\n  s1: SKIP { X = 0 } skip { X = 0 }\n}\n"
        "proof bad {\n  s1: SKIP { X = 0 } skip { X = 1 }\n}\n"
        "proof weak {\n  s1: AS { 1 = 1 } X <- 1 { X = 1 }\n  s2: CONS(s1) { true } X <- 1 { X = 2 }\n}\n");
    const StateSuite s = sample_states({}, false);
    const auto interps = interpretations(spec);
    const Verdict good = check_proof(*spec.find_proof("good"), s, interps);
    CHECK(good.valid());
    REQUIRE(!good.diagnostics.empty());
    CHECK(good.diagnostics[0] == "step s1 (SKIP): ok");

    const Verdict bad = check_proof(*spec.find_proof("bad"), s, interps);
    CHECK(bad.status == Status::kInvalid);
    REQUIRE(!bad.diagnostics.empty());
    CHECK(bad.diagnostics.back().find("rule mismatch") != std::string::npos);

    const Verdict weak = check_proof(*spec.find_proof("weak"), s, interps);
    CHECK(weak.status == Status::kInvalid);
    CHECK(weak.checked_on_suite);
}

TEST_CASE("the Deutsch proof and its mutation") {
    const SpecFile spec = load("deutsch.qhl");
    const Triple t = triple(spec, "const_f0");
    const StateSuite s = suite_for(spec, t, false);
    const auto interps = interpretations(spec);
    const Verdict ok = check_proof(*spec.find_proof("deutsch_f0_proof"), s, interps, {}, &t);
    CHECK(ok.valid());
    const Verdict bad = check_proof(*spec.find_proof("deutsch_f0_swapped"), s, interps, {}, &t);
    CHECK(bad.status == Status::kInvalid);
    bool mismatch = false;
    for (const auto& line : bad.diagnostics)
        mismatch = mismatch || line.find("rule mismatch") != std::string::npos;
    CHECK(mismatch);
}

TEST_CASE("derived wp proofs are accepted") {
    const SpecFile spec = load("deutsch.qhl");
    const auto interps = interpretations(spec);
    for (const char* name : {"const_f0", "const_f0_prob"}) {
        const Triple t = triple(spec, name);
        const ProofDecl p = derive_wp_proof(t.prog, t.conds);
        CHECK(!p.steps.empty());
        CHECK_MESSAGE(check_proof(p, suite_for(spec, t, t.conds.probabilistic), interps).valid(), name);
    }
    const Declarations d = decls1();
    TriplePair post;
    post.dpost = parse_assertion("X = 0", d);
    CHECK_THROWS_AS(derive_wp_proof(parse_command("while X > 0 do X <- X - 1", d), post), TransformError);
}

TEST_CASE("counterexamples replay") {
    const SpecFile spec = load("deutsch.qhl");
    const Triple t = triple(spec, "const_f0_wrong");
    const Verdict v = check_semantic(t, suite_for(spec, t, false), interpretations(spec));
    REQUIRE(v.counterexample);
    const ExecResult r = exec(t.prog, v.counterexample->input);
    CHECK(max_mass_difference(r.out, v.counterexample->output) < 1e-9);
    CHECK(!sat_mixed(t.conds.dpost, r.out));
    CHECK(sat_mixed(t.conds.dpre, v.counterexample->input));
}
