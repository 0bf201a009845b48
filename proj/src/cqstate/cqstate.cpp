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

#include "qhl/cqstate/cqstate.hpp"

#include <algorithm>
#include <cmath>

#include "qhl/error.hpp"

namespace qhl {

std::int64_t eval_arith(const ArithPtr& e, const Store& store, const Interpretation* interp) {
    switch (e->kind) {
    case Arith::Kind::kConst:
        return e->value;
    case Arith::Kind::kProgVar: {
        auto it = store.find(e->name);
        if (it == store.end())
            throw RuntimeError("program variable '" + e->name + "' has no value");
        return it->second;
    }
    case Arith::Kind::kLogVar: {
        if (interp) {
            auto it = interp->ints.find(e->name);
            if (it != interp->ints.end())
                return it->second;
        }
        throw RuntimeError("logical variable '" + e->name + "' is unbound");
    }
    case Arith::Kind::kBinary:
        break;
    }
    const std::int64_t a = eval_arith(e->lhs, store, interp);
    const std::int64_t b = eval_arith(e->rhs, store, interp);
    std::int64_t r = 0;
    bool overflow = false;
    switch (e->op) {
    case ArithOp::kAdd:
        overflow = __builtin_add_overflow(a, b, &r);
        break;
    case ArithOp::kSub:
        overflow = __builtin_sub_overflow(a, b, &r);
        break;
    case ArithOp::kMul:
        overflow = __builtin_mul_overflow(a, b, &r);
        break;
    }
    if (overflow)
        throw RuntimeError("integer overflow evaluating " + std::to_string(a) + " " + to_symbol(e->op) + " " +
                           std::to_string(b));
    return r;
}

bool compare(RelOp op, std::int64_t a, std::int64_t b) {
    switch (op) {
    case RelOp::kEq:
        return a == b;
    case RelOp::kNe:
        return a != b;
    case RelOp::kLt:
        return a < b;
    case RelOp::kLe:
        return a <= b;
    case RelOp::kGt:
        return a > b;
    case RelOp::kGe:
        return a >= b;
    }
    return false;
}

bool eval_guard(const AssertPtr& b, const Store& store) {
    switch (b->kind) {
    case Assertion::Kind::kTrue:
        return true;
    case Assertion::Kind::kFalse:
        return false;
    case Assertion::Kind::kRel:
        return compare(b->rel, eval_arith(b->lhs, store), eval_arith(b->rhs, store));
    case Assertion::Kind::kNot:
        return !eval_guard(b->left, store);
    case Assertion::Kind::kAnd:
        return eval_guard(b->left, store) && eval_guard(b->right, store);
    default:
        throw RuntimeError("guard contains a quantum or quantified subformula");
    }
}

namespace {

double round12(double x) { return std::round(x * 1e12) / 1e12 + 0.0; }

} // namespace

PureCqState canonicalize(const PureCqState& s) {
    PureCqState out;
    out.classical = s.classical;
    Amplitudes v = s.quantum;
    const double norm = v.norm();
    if (!(norm > 0.0))
        throw RuntimeError("cannot canonicalize a zero state vector");
    if (std::abs(norm - 1.0) > 1e-10)
        v /= norm;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mod = std::abs(v(k));
        if (mod > 1e-9) {
            if (v(k).imag() != 0.0 || v(k).real() < 0.0)
                v *= std::conj(v(k)) / mod;
            v(k) = Complex(v(k).real(), 0.0);
            break;
        }
    }
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = Complex(round12(v(k).real()), round12(v(k).imag()));
    out.quantum = std::move(v);
    return out;
}

bool CanonicalLess::operator()(const PureCqState& a, const PureCqState& b) const {
    if (a.classical != b.classical)
        return a.classical < b.classical;
    if (a.quantum.size() != b.quantum.size())
        return a.quantum.size() < b.quantum.size();
    for (Eigen::Index k = 0; k < a.quantum.size(); ++k) {
        const Complex x = a.quantum(k);
        const Complex y = b.quantum(k);
        if (x.real() != y.real())
            return x.real() < y.real();
        if (x.imag() != y.imag())
            return x.imag() < y.imag();
    }
    return false;
}

bool same_state(const PureCqState& a, const PureCqState& b) {
    const CanonicalLess less;
    const PureCqState ca = canonicalize(a);
    const PureCqState cb = canonicalize(b);
    return !less(ca, cb) && !less(cb, ca);
}

void MixedCqState::add(const PureCqState& s, double mass) { add_canonical(canonicalize(s), mass); }

void MixedCqState::add_canonical(const PureCqState& s, double mass) {
    if (mass == 0.0)
        return;
    entries_[s] += mass;
}

void MixedCqState::add_all(const MixedCqState& other, double scale) {
    for (const auto& [s, w] : other.entries_)
        add_canonical(s, w * scale);
}

void MixedCqState::prune(double eps) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->second < eps)
            it = entries_.erase(it);
        else
            ++it;
    }
}

double MixedCqState::mass() const {
    double total = 0.0;
    for (const auto& [s, w] : entries_)
        total += w;
    return total;
}

double MixedCqState::mass_of(const PureCqState& s) const {
    auto it = entries_.find(canonicalize(s));
    return it == entries_.end() ? 0.0 : it->second;
}

MixedCqState MixedCqState::scaled(double a) const {
    MixedCqState out;
    out.add_all(*this, a);
    return out;
}

MixedCqState point_dist(const PureCqState& s) {
    MixedCqState out;
    out.add(s, 1.0);
    return out;
}

MixedCqState restrict(const MixedCqState& m, const AssertPtr& guard) {
    MixedCqState out;
    for (const auto& [s, w] : m.entries())
        if (eval_guard(guard, s.classical))
            out.add_canonical(s, w);
    return out;
}

namespace {

bool near(const PureCqState& a, const PureCqState& b, double tol) {
    if (a.classical != b.classical || a.quantum.size() != b.quantum.size())
        return false;
    return (a.quantum - b.quantum).cwiseAbs().maxCoeff() <= tol;
}

double one_sided(const MixedCqState& a, const MixedCqState& b, double tol) {
    double worst = 0.0;
    for (const auto& [s, w] : a.entries()) {
        double matched = 0.0;
        for (const auto& [t, u] : b.entries())
            if (near(s, t, tol))
                matched += u;
        worst = std::max(worst, std::abs(w - matched));
    }
    return worst;
}

} // namespace

double max_mass_difference(const MixedCqState& a, const MixedCqState& b, double key_tol) {
    return std::max(one_sided(a, b, key_tol), one_sided(b, a, key_tol));
}

} // namespace qhl
