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

#include "qhl/syntax/subst.hpp"

#include <utility>

namespace qhl {

Substituter::Substituter(std::string var, ArithPtr replacement)
    : var_(std::move(var)), replacement_(std::move(replacement)) {}

ArithPtr Substituter::apply(const ArithPtr& e) {
    switch (e->kind) {
    case Arith::Kind::kConst:
    case Arith::Kind::kLogVar:
        return e;
    case Arith::Kind::kProgVar:
        return e->name == var_ ? replacement_ : e;
    case Arith::Kind::kBinary:
        break;
    }
    if (auto it = arith_memo_.find(e.get()); it != arith_memo_.end())
        return it->second;
    ArithPtr l = apply(e->lhs);
    ArithPtr r = apply(e->rhs);
    ArithPtr out = (l == e->lhs && r == e->rhs) ? e : Arith::binary(e->op, l, r);
    arith_memo_.emplace(e.get(), out);
    pins_.push_back(e);
    return out;
}

AssertPtr Substituter::apply(const AssertPtr& a) {
    using K = Assertion::Kind;
    if (a->kind == K::kTrue || a->kind == K::kFalse || a->kind == K::kProj)
        return a;
    if (auto it = assert_memo_.find(a.get()); it != assert_memo_.end())
        return it->second;
    AssertPtr out = a;
    switch (a->kind) {
    case K::kRel: {
        ArithPtr l = apply(a->lhs);
        ArithPtr r = apply(a->rhs);
        if (l != a->lhs || r != a->rhs)
            out = Assertion::relation(a->rel, l, r);
        break;
    }
    case K::kNot: {
        AssertPtr x = apply(a->left);
        if (x != a->left)
            out = Assertion::negation(x);
        break;
    }
    case K::kAnd: {
        AssertPtr l = apply(a->left);
        AssertPtr r = apply(a->right);
        if (l != a->left || r != a->right)
            out = Assertion::conjunction(l, r);
        break;
    }
    case K::kForall: {
        AssertPtr b = apply(a->left);
        if (b != a->left)
            out = Assertion::forall(a->var, b);
        break;
    }
    case K::kBoxUnitary: {
        AssertPtr b = apply(a->left);
        if (b != a->left)
            out = Assertion::box_unitary(a->gate, a->qubits, b);
        break;
    }
    case K::kBoxProj: {
        AssertPtr b = apply(a->left);
        if (b != a->left)
            out = Assertion::box_proj(a->qubit, a->bit, b);
        break;
    }
    case K::kBigAnd: {
        std::vector<AssertPtr> fam;
        fam.reserve(a->family.size());
        bool changed = false;
        for (const auto& f : a->family) {
            fam.push_back(apply(f));
            changed = changed || fam.back() != f;
        }
        if (changed)
            out = Assertion::big_and(std::move(fam), a->bound);
        break;
    }
    default:
        break;
    }
    assert_memo_.emplace(a.get(), out);
    pins_.push_back(a);
    return out;
}

RealPtr Substituter::apply(const RealPtr& r) {
    using K = RealExpr::Kind;
    if (r->kind == K::kConst || r->kind == K::kVar)
        return r;
    if (auto it = real_memo_.find(r.get()); it != real_memo_.end())
        return it->second;
    RealPtr out = r;
    switch (r->kind) {
    case K::kProb: {
        AssertPtr a = apply(r->assertion);
        if (a != r->assertion)
            out = RealExpr::prob(a);
        break;
    }
    case K::kCqCond: {
        AssertPtr a = apply(r->assertion);
        if (a != r->assertion)
            out = RealExpr::cq_cond(a, r->projector);
        break;
    }
    case K::kBinary: {
        RealPtr l = apply(r->lhs);
        RealPtr x = apply(r->rhs);
        if (l != r->lhs || x != r->rhs)
            out = RealExpr::binary(r->op, l, x);
        break;
    }
    case K::kSum: {
        std::vector<RealPtr> terms;
        terms.reserve(r->terms.size());
        bool changed = false;
        for (const auto& t : r->terms) {
            terms.push_back(apply(t));
            changed = changed || terms.back() != t;
        }
        if (changed)
            out = RealExpr::bounded_sum(std::move(terms), r->bound);
        break;
    }
    default:
        break;
    }
    real_memo_.emplace(r.get(), out);
    pins_.push_back(r);
    return out;
}

AssertPtr subst_prog_var(const AssertPtr& phi, const std::string& var, const ArithPtr& e) {
    return Substituter(var, e).apply(phi);
}

RealPtr subst_prog_var(const RealPtr& r, const std::string& var, const ArithPtr& e) {
    return Substituter(var, e).apply(r);
}

} // namespace qhl
