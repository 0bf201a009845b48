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

#include "qhl/checker/suite.hpp"

#include <functional>
#include <random>

#include "qhl/assertions/eval.hpp"
#include "qhl/cqstate/quantum.hpp"
#include "qhl/error.hpp"

namespace qhl {

void StateSuite::append(const StateSuite& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

namespace {

Amplitudes haar(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Amplitudes v(Eigen::Index{1} << m);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double re = g(rng);
        const double im = g(rng);
        v(k) = Complex(re, im);
    }
    return v / v.norm();
}

Store random_store(const SuiteParams& p, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> u(p.values.lo, p.values.hi);
    Store s;
    for (const auto& x : p.vars)
        s[x] = u(rng);
    return s;
}

PureCqState random_pure(const SuiteParams& p, std::mt19937_64& rng) {
    PureCqState s;
    s.classical = random_store(p, rng);
    s.quantum = haar(p.num_qubits, rng);
    return canonicalize(s);
}

MixedCqState random_mixed(std::mt19937_64& rng,
                          const std::function<PureCqState()>& draw) {
    std::uniform_int_distribution<int> parts(1, 4);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    const int k = parts(rng);
    std::vector<PureCqState> pts;
    std::vector<double> ws;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        pts.push_back(draw());
        ws.push_back(w(rng));
        total += ws.back();
    }
    MixedCqState m;
    for (int i = 0; i < k; ++i)
        m.add(pts[static_cast<std::size_t>(i)], ws[static_cast<std::size_t>(i)] / total);
    return m;
}

// Qubit and variable literals found on the conjunctive spine.
struct Literals {
    std::vector<std::pair<int, int>> qubits;
    std::vector<std::pair<std::string, std::int64_t>> vars;
};

void collect(const AssertPtr& a, Literals& out) {
    switch (a->kind) {
    case Assertion::Kind::kAnd:
        collect(a->left, out);
        collect(a->right, out);
        break;
    case Assertion::Kind::kProj:
        out.qubits.emplace_back(a->qubit, a->bit);
        break;
    case Assertion::Kind::kNot:
        if (a->left->kind == Assertion::Kind::kProj)
            out.qubits.emplace_back(a->left->qubit, 1 - a->left->bit);
        break;
    case Assertion::Kind::kRel:
        if (a->rel != RelOp::kEq)
            break;
        if (a->lhs->kind == Arith::Kind::kProgVar && a->rhs->kind == Arith::Kind::kConst)
            out.vars.emplace_back(a->lhs->name, a->rhs->value);
        else if (a->rhs->kind == Arith::Kind::kProgVar && a->lhs->kind == Arith::Kind::kConst)
            out.vars.emplace_back(a->rhs->name, a->lhs->value);
        break;
    default:
        break;
    }
}

bool is_one(const RealPtr& r) { return r->kind == RealExpr::Kind::kConst && r->value == 1.0; }

// P[phi] = 1 and P[phi] >= 1 force phi on every support.
void collect(const FormulaPtr& f, Literals& out) {
    if (f->kind == Formula::Kind::kAnd) {
        collect(f->left, out);
        collect(f->right, out);
        return;
    }
    if (f->kind != Formula::Kind::kRel)
        return;
    if ((f->rel == RelOp::kEq || f->rel == RelOp::kGe) && f->lhs->kind == RealExpr::Kind::kProb && is_one(f->rhs))
        collect(f->lhs->assertion, out);
    else if ((f->rel == RelOp::kEq || f->rel == RelOp::kLe) && f->rhs->kind == RealExpr::Kind::kProb &&
             is_one(f->lhs))
        collect(f->rhs->assertion, out);
}

// Applies the literals; false when they are contradictory for this draw.
bool constrain(PureCqState& s, const Literals& lits, int m) {
    for (const auto& [j, i] : lits.qubits) {
        if (j < 1 || j > m)
            continue;
        s.quantum = project_qubit(s.quantum, j, i);
    }
    const double n = s.quantum.norm();
    if (n < 1e-9)
        return false;
    s.quantum /= n;
    for (const auto& [x, v] : lits.vars)
        if (s.classical.count(x))
            s.classical[x] = v;
    s = canonicalize(s);
    return true;
}

} // namespace

std::vector<PureCqState> sample_pure_states(const SuiteParams& p) {
    std::mt19937_64 rng(p.seed);
    std::vector<PureCqState> out;
    for (std::size_t i = 0; i < p.count; ++i)
        out.push_back(random_pure(p, rng));
    return out;
}

std::vector<MixedCqState> sample_mixed_states(const SuiteParams& p) {
    std::mt19937_64 rng(p.seed);
    std::vector<MixedCqState> out;
    for (std::size_t i = 0; i < p.count; ++i)
        out.push_back(random_mixed(rng, [&] { return random_pure(p, rng); }));
    return out;
}

StateSuite sample_states(const SuiteParams& p, bool mixed) {
    StateSuite suite;
    if (mixed) {
        auto ms = sample_mixed_states(p);
        for (std::size_t i = 0; i < ms.size(); ++i)
            suite.add("random#" + std::to_string(i), std::move(ms[i]));
    } else {
        const auto ps = sample_pure_states(p);
        for (std::size_t i = 0; i < ps.size(); ++i)
            suite.add("random#" + std::to_string(i), point_dist(ps[i]));
    }
    return suite;
}

StateSuite sample_satisfying(const TriplePair& conds, const SuiteParams& p, const Interpretation& interp, bool mixed) {
    Literals lits;
    if (conds.probabilistic)
        collect(conds.ppre, lits);
    else
        collect(conds.dpre, lits);
    std::mt19937_64 rng(p.seed);
    auto draw = [&]() {
        for (int attempt = 0; attempt < 16; ++attempt) {
            PureCqState s = random_pure(p, rng);
            if (constrain(s, lits, p.num_qubits))
                return s;
        }
        return random_pure(p, rng);
    };
    StateSuite suite;
    const std::size_t max_attempts = 100 * p.count + 100;
    for (std::size_t n = 0; n < max_attempts && suite.size() < p.count; ++n) {
        MixedCqState m = mixed ? random_mixed(rng, draw) : point_dist(draw());
        const bool ok = conds.probabilistic ? sat_prob(conds.ppre, m, interp) : sat_mixed(conds.dpre, m, interp);
        if (ok)
            suite.add("sat#" + std::to_string(suite.size()), std::move(m));
    }
    return suite;
}

StateSuite declared_states(const SpecFile& spec) {
    StateSuite suite;
    auto pure = [&](const StateDecl& d) {
        PureCqState s;
        for (const auto& x : spec.decls.vars)
            s.classical[x] = 0;
        for (const auto& [x, v] : d.store)
            s.classical[x] = v;
        s.quantum = d.amplitudes;
        return s;
    };
    for (const auto& d : spec.states)
        suite.add(d.name, point_dist(pure(d)));
    for (const auto& mx : spec.mixtures) {
        MixedCqState m;
        for (const auto& [w, name] : mx.parts) {
            const StateDecl* d = spec.find_state(name);
            if (!d)
                throw RuntimeError("mixture '" + mx.name + "' names unknown state '" + name + "'");
            m.add(pure(*d), w);
        }
        suite.add(mx.name, std::move(m));
    }
    return suite;
}

} // namespace qhl
