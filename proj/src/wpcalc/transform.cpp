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

#include "qhl/wpcalc/transform.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "qhl/cqstate/quantum.hpp"
#include "qhl/error.hpp"
#include "qhl/syntax/subst.hpp"

namespace qhl {

// ---------------------------------------------------------------------------
// wp for deterministic assertions

namespace {

AssertPtr wp_measure(const CmdPtr& c, const AssertPtr& phi) {
    const AssertPtr zero = Substituter(c->var, Arith::constant(0)).apply(phi);
    const AssertPtr one = Substituter(c->var, Arith::constant(1)).apply(phi);
    return Assertion::conjunction(
        Assertion::disjunction(Assertion::box_proj(c->qubit, 0, zero), Assertion::proj(c->qubit, 1)),
        Assertion::disjunction(Assertion::box_proj(c->qubit, 1, one), Assertion::proj(c->qubit, 0)));
}

} // namespace

AssertPtr wp_det(const CmdPtr& c, const AssertPtr& phi, const DepthConfig& d) {
    switch (c->kind) {
    case Command::Kind::kSkip:
        return phi;
    case Command::Kind::kAssign:
        return subst_prog_var(phi, c->var, c->expr);
    case Command::Kind::kRandAssign: {
        std::vector<AssertPtr> parts;
        for (const auto& b : c->branches)
            parts.push_back(subst_prog_var(phi, c->var, Arith::constant(b.value)));
        return conjoin_all(parts);
    }
    case Command::Kind::kSeq:
        return wp_det(c->first, wp_det(c->second, phi, d), d);
    case Command::Kind::kIf:
        return Assertion::disjunction(Assertion::conjunction(c->guard, wp_det(c->first, phi, d)),
                                      Assertion::conjunction(Assertion::negation(c->guard),
                                                             wp_det(c->second, phi, d)));
    case Command::Kind::kWhile: {
        const int k = std::max(d.wp_while_depth, 0);
        const AssertPtr exit = Assertion::conjunction(Assertion::negation(c->guard), phi);
        std::vector<AssertPtr> psi{Assertion::truth()};
        for (int i = 0; i < k; ++i)
            psi.push_back(Assertion::disjunction(Assertion::conjunction(c->guard, wp_det(c->first, psi.back(), d)),
                                                 exit));
        return Assertion::big_and(std::move(psi), k);
    }
    case Command::Kind::kUnitary:
        return Assertion::box_unitary(c->gate, c->qubits, phi);
    case Command::Kind::kMeasure:
        return wp_measure(c, phi);
    }
    throw TransformError("unknown command");
}

// ---------------------------------------------------------------------------
// Projectors

ProjectorPtr qubit_projector(int num_qubits, int j, int i) {
    std::string pat(static_cast<std::size_t>(num_qubits), '*');
    pat[static_cast<std::size_t>(j - 1)] = i ? '1' : '0';
    return Projector::mask("", num_qubits, {pat});
}

namespace {

// Conjugation keeps projectors projective; a measured dense projector P Q P
// is only a positive contraction, so results are checked as effects.
ProjectorPtr validated(Matrix m, const char* what) {
    if (!is_effect(m))
        throw TransformError(std::string(what) + " is not an effect within 1e-9");
    auto q = std::make_shared<Projector>();
    q->kind = Projector::Kind::kDense;
    int bits = 0;
    is_power_of_two(static_cast<std::size_t>(m.rows()), bits);
    q->num_qubits = bits;
    q->dense = std::move(m);
    return q;
}

} // namespace

ProjectorPtr conjugate_unitary(const ProjectorPtr& q, const Gate& g, const std::vector<int>& qubits) {
    const Eigen::Index dim = Eigen::Index{1} << q->num_qubits;
    Matrix u(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        Amplitudes e = Amplitudes::Zero(dim);
        e(k) = 1.0;
        u.col(k) = apply_gate(e, g.matrix, qubits);
    }
    return validated(u.adjoint() * q->to_dense() * u, "conjugated projector");
}

ProjectorPtr conjugate_measure(const ProjectorPtr& q, int j, int i) {
    const char bit = i ? '1' : '0';
    if (q->kind == Projector::Kind::kMask) {
        std::vector<std::string> pats;
        for (auto p : q->patterns) {
            char& c = p[static_cast<std::size_t>(j - 1)];
            if (c == '*')
                c = bit;
            if (c == bit && std::find(pats.begin(), pats.end(), p) == pats.end())
                pats.push_back(p);
        }
        return Projector::mask("", q->num_qubits, std::move(pats));
    }
    const Matrix p = qubit_projector(q->num_qubits, j, i)->to_dense();
    return validated(p * q->dense * p, "projected projector");
}

// ---------------------------------------------------------------------------
// Conditional terms and preterms

namespace {

// Builds terms while counting nodes against the budget, memoizing every
// transformation by node identity so that shared inputs stay shared.
class TermBuilder {
  public:
    explicit TermBuilder(const DepthConfig& d) : d_(d) {}

    RealPtr add(RealPtr a, RealPtr b) { return count(RealExpr::binary(ArithOp::kAdd, std::move(a), std::move(b))); }
    RealPtr mul(RealPtr a, RealPtr b) { return count(RealExpr::binary(ArithOp::kMul, std::move(a), std::move(b))); }
    RealPtr constant(double v) { return count(RealExpr::constant(v)); }

    RealPtr sum(const std::vector<RealPtr>& terms) {
        RealPtr acc = terms.front();
        for (std::size_t i = 1; i < terms.size(); ++i)
            acc = add(acc, terms[i]);
        return acc;
    }

    RealPtr cond(const RealPtr& r, const AssertPtr& b) {
        using K = RealExpr::Kind;
        if (r->kind == K::kConst || r->kind == K::kVar)
            return r;
        const auto key = std::make_pair(static_cast<const void*>(r.get()), static_cast<const void*>(b.get()));
        if (auto it = cond_memo_.find(key); it != cond_memo_.end())
            return it->second;
        RealPtr out;
        switch (r->kind) {
        case K::kProb:
            out = count(RealExpr::prob(Assertion::conjunction(r->assertion, b)));
            break;
        case K::kCqCond:
            out = count(RealExpr::cq_cond(Assertion::conjunction(r->assertion, b), r->projector));
            break;
        case K::kBinary:
            out = count(RealExpr::binary(r->op, cond(r->lhs, b), cond(r->rhs, b)));
            break;
        case K::kSum: {
            std::vector<RealPtr> terms;
            for (const auto& t : r->terms)
                terms.push_back(cond(t, b));
            out = count(RealExpr::bounded_sum(std::move(terms), r->bound));
            break;
        }
        default:
            out = r;
        }
        cond_memo_.emplace(key, out);
        pin(r);
        pin(b);
        return out;
    }

    RealPtr pt(const CmdPtr& c, const RealPtr& r) {
        using K = RealExpr::Kind;
        if (r->kind == K::kConst || r->kind == K::kVar)
            return r;
        if (c->kind == Command::Kind::kSkip)
            return r;
        const auto key = std::make_pair(static_cast<const void*>(c.get()), static_cast<const void*>(r.get()));
        if (auto it = pt_memo_.find(key); it != pt_memo_.end())
            return it->second;
        RealPtr out;
        switch (r->kind) {
        case K::kBinary:
            out = count(RealExpr::binary(r->op, pt(c, r->lhs), pt(c, r->rhs)));
            break;
        case K::kSum: {
            std::vector<RealPtr> terms;
            for (const auto& t : r->terms)
                terms.push_back(pt(c, t));
            out = count(RealExpr::bounded_sum(std::move(terms), r->bound));
            break;
        }
        default:
            out = atom(c, r);
        }
        pt_memo_.emplace(key, out);
        pin(c);
        pin(r);
        return out;
    }

  private:
    RealPtr count(RealPtr r) {
        if (++nodes_ > d_.node_budget)
            throw TransformError("preterm exceeds the budget of " + std::to_string(d_.node_budget) +
                                 " nodes; lower --depth-n or --split-depth");
        return r;
    }

    void pin(std::shared_ptr<const void> p) { pins_.push_back(std::move(p)); }

    // Rebuilds an atom with a new assertion (and optionally a new projector).
    RealPtr with(const RealPtr& a, AssertPtr phi, ProjectorPtr q = nullptr) {
        if (a->kind == RealExpr::Kind::kProb)
            return count(RealExpr::prob(std::move(phi)));
        return count(RealExpr::cq_cond(std::move(phi), q ? std::move(q) : a->projector));
    }

    RealPtr atom(const CmdPtr& c, const RealPtr& a) {
        const bool is_prob = a->kind == RealExpr::Kind::kProb;
        const AssertPtr& phi = a->assertion;
        switch (c->kind) {
        case Command::Kind::kSkip:
            return a;
        case Command::Kind::kAssign:
            return with(a, subst_prog_var(phi, c->var, c->expr));
        case Command::Kind::kRandAssign:
            return is_prob ? rand_prob(c, phi) : rand_cq(c, a);
        case Command::Kind::kSeq:
            return pt(c->first, pt(c->second, a));
        case Command::Kind::kIf:
            return add(cond(pt(c->first, a), c->guard), cond(pt(c->second, a), Assertion::negation(c->guard)));
        case Command::Kind::kWhile:
            return loop(c, a);
        case Command::Kind::kUnitary: {
            AssertPtr boxed = Assertion::box_unitary(c->gate, c->qubits, phi);
            if (is_prob)
                return with(a, boxed);
            return with(a, boxed, conjugate_unitary(a->projector, *c->gate, c->qubits));
        }
        case Command::Kind::kMeasure:
            return measure(c, a);
        }
        throw TransformError("unknown command");
    }

    // Each nonempty set S of branches contributes (sum of a_i over S) times
    // the probability that phi[X/k_i] holds exactly for i in S.
    RealPtr rand_prob(const CmdPtr& c, const AssertPtr& phi) {
        const auto& br = c->branches;
        const std::size_t n = br.size();
        if (n > 16)
            throw TransformError("random assignment with more than 16 branches is too large for its preterm");
        std::vector<AssertPtr> inst;
        for (const auto& b : br)
            inst.push_back(subst_prog_var(phi, c->var, Arith::constant(b.value)));
        std::vector<std::uint32_t> subsets;
        for (std::uint32_t s = 1; s < (1U << n); ++s)
            subsets.push_back(s);
        std::stable_sort(subsets.begin(), subsets.end(), [](std::uint32_t x, std::uint32_t y) {
            const int px = __builtin_popcount(x);
            const int py = __builtin_popcount(y);
            if (px != py)
                return px < py;
            for (std::size_t i = 0;; ++i) { // lexicographic on member indices
                const bool bx = (x >> i) & 1U;
                const bool by = (y >> i) & 1U;
                if (bx != by)
                    return bx;
            }
        });
        std::vector<RealPtr> terms;
        for (std::uint32_t s : subsets) {
            double weight = 0.0;
            std::vector<AssertPtr> parts;
            for (std::size_t i = 0; i < n; ++i) {
                if ((s >> i) & 1U) {
                    weight += br[i].prob;
                    parts.push_back(inst[i]);
                } else {
                    parts.push_back(Assertion::negation(inst[i]));
                }
            }
            terms.push_back(mul(constant(weight), count(RealExpr::prob(conjoin_all(parts)))));
        }
        return sum(terms);
    }

    RealPtr rand_cq(const CmdPtr& c, const RealPtr& a) {
        std::vector<RealPtr> terms;
        for (const auto& b : c->branches)
            terms.push_back(
                mul(constant(b.prob), with(a, subst_prog_var(a->assertion, c->var, Arith::constant(b.value)))));
        return sum(terms);
    }

    int qubits() const { return d_.num_qubits; }

    RealPtr measure(const CmdPtr& c, const RealPtr& a) {
        const int j = c->qubit;
        std::array<AssertPtr, 2> boxed;
        for (int i = 0; i < 2; ++i)
            boxed[static_cast<std::size_t>(i)] = Assertion::box_proj(
                j, i, subst_prog_var(a->assertion, c->var, Arith::constant(i)));
        if (a->kind == RealExpr::Kind::kCqCond) {
            return add(with(a, boxed[0], conjugate_measure(a->projector, j, 0)),
                       with(a, boxed[1], conjugate_measure(a->projector, j, 1)));
        }
        if (qubits() < j)
            throw TransformError("measurement preterm needs the qubit count (at least " + std::to_string(j) + ")");
        const ProjectorPtr p0 = qubit_projector(qubits(), j, 0);
        const ProjectorPtr p1 = qubit_projector(qubits(), j, 1);
        if (d_.measure_form == MeasurePreterm::kProduct) {
            return add(mul(count(RealExpr::cq_cond(Assertion::truth(), p0)), count(RealExpr::prob(boxed[0]))),
                       mul(count(RealExpr::cq_cond(Assertion::truth(), p1)), count(RealExpr::prob(boxed[1]))));
        }
        return add(count(RealExpr::cq_cond(boxed[0], p0)), count(RealExpr::cq_cond(boxed[1], p1)));
    }

    // Exit-time classes wp(i) = !W_0 && ... && !W_{i-1} && W_i with
    // W_i = wp(C^i, !B) cover the states whose loop ends within S rounds;
    // the rest, wp(inf), runs one body step and is split again.
    RealPtr loop(const CmdPtr& c, const RealPtr& a) {
        const int s = std::max(d_.pt_split_depth, 0);
        const int n = std::max(d_.pt_while_terms, 1);
        const AssertPtr not_b = Assertion::negation(c->guard);
        const CmdPtr& body = c->first;

        std::vector<AssertPtr> w{not_b};
        for (int i = 1; i <= s; ++i)
            w.push_back(wp_det(body, w.back(), d_));
        std::vector<AssertPtr> not_w;
        for (const auto& x : w)
            not_w.push_back(Assertion::negation(x));
        const AssertPtr wp_inf = Assertion::big_and(not_w, s);

        std::vector<RealPtr> split;
        RealPtr r = a;
        AssertPtr prefix;
        for (int i = 0; i <= s; ++i) {
            if (i > 0)
                r = add(cond(pt(body, r), c->guard), cond(r, not_b));
            const AssertPtr exact = prefix ? Assertion::conjunction(prefix, w[static_cast<std::size_t>(i)])
                                           : w[static_cast<std::size_t>(i)];
            split.push_back(cond(r, exact));
            prefix = prefix ? Assertion::conjunction(prefix, not_w[static_cast<std::size_t>(i)])
                            : not_w[static_cast<std::size_t>(i)];
        }
        std::vector<RealPtr> series{count(RealExpr::bounded_sum(std::move(split), s))};
        for (int k = 1; k < n; ++k)
            series.push_back(cond(pt(body, series.back()), wp_inf));
        return count(RealExpr::bounded_sum(std::move(series), n - 1));
    }

    using Key = std::pair<const void*, const void*>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<const void*>()(k.first) * 31 + std::hash<const void*>()(k.second);
        }
    };

    const DepthConfig& d_;
    std::size_t nodes_ = 0;
    std::unordered_map<Key, RealPtr, KeyHash> cond_memo_;
    std::unordered_map<Key, RealPtr, KeyHash> pt_memo_;
    std::vector<std::shared_ptr<const void>> pins_;
};

int max_qubit(const CmdPtr& c);
int max_qubit(const AssertPtr& a);

int max_qubit(const AssertPtr& a) {
    int m = 0;
    switch (a->kind) {
    case Assertion::Kind::kProj:
        return a->qubit;
    case Assertion::Kind::kBoxProj:
        m = a->qubit;
        break;
    case Assertion::Kind::kBoxUnitary:
        for (int q : a->qubits)
            m = std::max(m, q);
        break;
    case Assertion::Kind::kBigAnd:
        for (const auto& f : a->family)
            m = std::max(m, max_qubit(f));
        return m;
    default:
        break;
    }
    if (a->left)
        m = std::max(m, max_qubit(a->left));
    if (a->right)
        m = std::max(m, max_qubit(a->right));
    return m;
}

int max_qubit(const CmdPtr& c) {
    int m = 0;
    if (c->kind == Command::Kind::kMeasure)
        m = c->qubit;
    for (int q : c->qubits)
        m = std::max(m, q);
    if (c->first)
        m = std::max(m, max_qubit(c->first));
    if (c->second)
        m = std::max(m, max_qubit(c->second));
    return m;
}

// Projectors fix the qubit count exactly; otherwise the largest index used.
void infer_qubits(const RealPtr& r, int& from_projectors, int& from_indices) {
    switch (r->kind) {
    case RealExpr::Kind::kCqCond:
        from_projectors = std::max(from_projectors, r->projector->num_qubits);
        [[fallthrough]];
    case RealExpr::Kind::kProb:
        from_indices = std::max(from_indices, max_qubit(r->assertion));
        break;
    case RealExpr::Kind::kBinary:
        infer_qubits(r->lhs, from_projectors, from_indices);
        infer_qubits(r->rhs, from_projectors, from_indices);
        break;
    case RealExpr::Kind::kSum:
        for (const auto& t : r->terms)
            infer_qubits(t, from_projectors, from_indices);
        break;
    default:
        break;
    }
}

DepthConfig with_qubits(const DepthConfig& d, const CmdPtr& c, const std::vector<RealPtr>& terms) {
    DepthConfig out = d;
    if (out.num_qubits > 0)
        return out;
    int proj = 0;
    int idx = max_qubit(c);
    for (const auto& t : terms)
        infer_qubits(t, proj, idx);
    out.num_qubits = proj > 0 ? proj : idx;
    return out;
}

void collect_terms(const FormulaPtr& f, std::vector<RealPtr>& out) {
    if (f->kind == Formula::Kind::kRel) {
        out.push_back(f->lhs);
        out.push_back(f->rhs);
        return;
    }
    collect_terms(f->left, out);
    if (f->right)
        collect_terms(f->right, out);
}

FormulaPtr wp_formula(const FormulaPtr& f, const CmdPtr& c, TermBuilder& tb) {
    switch (f->kind) {
    case Formula::Kind::kRel:
        return Formula::relation(f->rel, tb.pt(c, f->lhs), tb.pt(c, f->rhs));
    case Formula::Kind::kNot:
        return Formula::negation(wp_formula(f->left, c, tb));
    case Formula::Kind::kAnd:
        return Formula::conjunction(wp_formula(f->left, c, tb), wp_formula(f->right, c, tb));
    }
    throw TransformError("unknown formula");
}

} // namespace

RealPtr cond_term(const RealPtr& r, const AssertPtr& b) {
    DepthConfig d;
    d.node_budget = static_cast<std::size_t>(-1);
    TermBuilder tb(d);
    return tb.cond(r, b);
}

RealPtr preterm(const CmdPtr& c, const RealPtr& r, const DepthConfig& d) {
    const DepthConfig eff = with_qubits(d, c, {r});
    TermBuilder tb(eff);
    return tb.pt(c, r);
}

FormulaPtr wp_prob(const CmdPtr& c, const FormulaPtr& f, const DepthConfig& d) {
    std::vector<RealPtr> terms;
    collect_terms(f, terms);
    const DepthConfig eff = with_qubits(d, c, terms);
    TermBuilder tb(eff);
    return wp_formula(f, c, tb);
}

DepthConfig infer_qubits(const DepthConfig& d, const CmdPtr& c, const FormulaPtr& f) {
    std::vector<RealPtr> terms;
    if (f)
        collect_terms(f, terms);
    return with_qubits(d, c, terms);
}

} // namespace qhl
