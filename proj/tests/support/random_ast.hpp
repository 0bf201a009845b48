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


// Random programs, assertions, terms and states for property tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "qhl/checker/suite.hpp"
#include "qhl/cqstate/cqstate.hpp"
#include "qhl/syntax/ast.hpp"

namespace qhl::testing {

inline const std::vector<std::string>& prog_vars() {
    static const std::vector<std::string> v{"X", "Y"};
    return v;
}

/// Quantifier range for the logical variable x and a binding for $p.
inline Interpretation test_interp() {
    Interpretation in;
    in.ranges["x"] = {0, 2};
    in.reals["p"] = 0.5;
    return in;
}

class RandomAst {
  public:
    RandomAst(std::uint64_t seed, int num_qubits) : rng_(seed), m_(num_qubits) {}

    int num_qubits() const { return m_; }
    std::mt19937_64& rng() { return rng_; }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return uniform_real(0.0, 1.0) < p; }

    ArithPtr arith(int depth, bool logical = false) {
        const int pick = uniform(0, depth > 0 ? 3 : 2);
        if (pick == 0)
            return Arith::constant(uniform(-2, 2));
        if (pick == 1 || (pick == 2 && !logical))
            return Arith::prog_var(prog_vars()[static_cast<std::size_t>(uniform(0, 1))]);
        if (pick == 2)
            return Arith::log_var("x");
        static const ArithOp ops[] = {ArithOp::kAdd, ArithOp::kSub, ArithOp::kMul};
        return Arith::binary(ops[uniform(0, 2)], arith(depth - 1, logical), arith(depth - 1, logical));
    }

    RelOp rel() { return static_cast<RelOp>(uniform(0, 5)); }

    AssertPtr guard(int depth) {
        const int pick = uniform(0, depth > 0 ? 4 : 1);
        switch (pick) {
        case 0:
            return Assertion::relation(rel(), arith(1), arith(1));
        case 1:
            return coin(0.8) ? Assertion::relation(rel(), arith(0), arith(0)) : Assertion::truth();
        case 2:
            return Assertion::negation(guard(depth - 1));
        case 3:
            return Assertion::conjunction(guard(depth - 1), guard(depth - 1));
        default:
            return Assertion::disjunction(guard(depth - 1), guard(depth - 1));
        }
    }

    GatePtr gate(std::vector<int>& qubits) {
        static const char* one[] = {"H", "X", "Y", "Z", "S", "T"};
        static const char* two[] = {"CX", "CZ", "SWAP"};
        qubits.clear();
        if (m_ >= 2 && coin(0.4)) {
            const int a = uniform(1, m_);
            int b = uniform(1, m_ - 1);
            if (b >= a)
                ++b;
            qubits = {a, b};
            return builtin_gate(two[uniform(0, 2)]);
        }
        qubits = {uniform(1, m_)};
        return builtin_gate(one[uniform(0, 5)]);
    }

    CmdPtr primitive() {
        const std::string& x = prog_vars()[static_cast<std::size_t>(uniform(0, 1))];
        switch (uniform(0, 5)) {
        case 0:
            return Command::skip();
        case 1:
            return Command::assign(x, arith(1));
        case 2: {
            const int n = uniform(2, 3);
            std::vector<double> w;
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                w.push_back(uniform_real(0.1, 1.0));
                total += w.back();
            }
            std::vector<RandBranch> br;
            for (int i = 0; i < n; ++i)
                br.push_back({w[static_cast<std::size_t>(i)] / total, uniform(-2, 2)});
            return Command::rand_assign(x, std::move(br));
        }
        case 3:
        case 4: {
            std::vector<int> qs;
            GatePtr g = gate(qs);
            return Command::unitary(g, qs);
        }
        default:
            return Command::measure(x, uniform(1, m_));
        }
    }

    /// Loop-free command with at most `budget` primitive commands.
    CmdPtr command(int budget) {
        if (budget <= 1)
            return primitive();
        const int pick = uniform(0, 3);
        if (pick == 0)
            return primitive();
        const int left = uniform(1, budget - 1);
        if (pick == 3)
            return Command::if_then_else(guard(1), command(left), command(budget - left));
        return Command::seq(command(left), command(budget - left));
    }

    AssertPtr assertion(int depth, bool in_forall = false) {
        const int pick = uniform(0, depth > 0 ? 9 : 3);
        switch (pick) {
        case 0:
            return coin() ? Assertion::truth() : Assertion::falsity();
        case 1:
            return Assertion::proj(uniform(1, m_), uniform(0, 1));
        case 2:
        case 3:
            return Assertion::relation(rel(), arith(1, in_forall), arith(1, in_forall));
        case 4:
            return Assertion::negation(assertion(depth - 1, in_forall));
        case 5:
            return Assertion::conjunction(assertion(depth - 1, in_forall), assertion(depth - 1, in_forall));
        case 6:
            return Assertion::disjunction(assertion(depth - 1, in_forall), assertion(depth - 1, in_forall));
        case 7: {
            std::vector<int> qs;
            GatePtr g = gate(qs);
            return Assertion::box_unitary(g, qs, assertion(depth - 1, in_forall));
        }
        case 8:
            return Assertion::box_proj(uniform(1, m_), uniform(0, 1), assertion(depth - 1, in_forall));
        default:
            return Assertion::forall("x", assertion(depth - 1, true));
        }
    }

    ProjectorPtr mask() {
        std::vector<std::string> pats;
        const int n = uniform(1, 2);
        for (int k = 0; k < n; ++k) {
            std::string p;
            for (int j = 0; j < m_; ++j)
                p += "01*"[uniform(0, 2)];
            pats.push_back(p);
        }
        return Projector::mask("", m_, std::move(pats));
    }

    RealPtr atom(int depth) {
        if (coin(0.6))
            return RealExpr::prob(assertion(depth));
        return RealExpr::cq_cond(assertion(depth), mask());
    }

    RealPtr real(int depth, bool cq = true) {
        const int pick = uniform(0, depth > 0 ? 5 : 3);
        switch (pick) {
        case 0:
            return RealExpr::constant(uniform(0, 8) / 4.0);
        case 1:
            return coin(0.2) ? RealExpr::variable("p") : RealExpr::prob(assertion(1));
        case 2:
        case 3:
            return cq ? atom(1) : RealExpr::prob(assertion(1));
        default: {
            static const ArithOp ops[] = {ArithOp::kAdd, ArithOp::kSub, ArithOp::kMul};
            return RealExpr::binary(ops[uniform(0, 2)], real(depth - 1, cq), real(depth - 1, cq));
        }
        }
    }

    FormulaPtr formula(int depth) {
        const int pick = uniform(0, depth > 0 ? 3 : 1);
        if (pick <= 1)
            return Formula::relation(rel(), real(1), coin() ? real(1) : RealExpr::constant(uniform(0, 4) / 4.0));
        if (pick == 2)
            return Formula::negation(formula(depth - 1));
        return Formula::conjunction(formula(depth - 1), formula(depth - 1));
    }

    SuiteParams params(std::size_t count) {
        SuiteParams p;
        p.count = count;
        p.seed = rng_();
        p.num_qubits = m_;
        p.vars = prog_vars();
        p.values = {-2, 2};
        return p;
    }

    PureCqState pure_state() { return sample_pure_states(params(1)).front(); }
    MixedCqState mixed_state() { return sample_mixed_states(params(1)).front(); }

  private:
    std::mt19937_64 rng_;
    int m_;
};

} // namespace qhl::testing
