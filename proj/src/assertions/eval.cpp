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

#include "qhl/assertions/eval.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "qhl/cqstate/quantum.hpp"
#include "qhl/error.hpp"

namespace qhl {

namespace {

// Evaluates assertions on one support state. Transformer outputs are DAGs
// with heavy sharing, so results are memoized per (node, context), where a
// context is the state and interpretation reached through modalities and
// quantifiers.
class SatEvaluator {
  public:
    SatEvaluator(const PureCqState& s, const Interpretation& interp, const SatConfig& cfg, Labels* labels)
        : cfg_(cfg), labels_(labels) {
        contexts_.push_back({s, interp});
    }

    bool holds(const AssertPtr& a) { return eval(a.get(), 0); }

  private:
    struct Context {
        PureCqState state;
        Interpretation interp;
    };

    struct KeyHash {
        std::size_t operator()(const std::pair<const Assertion*, std::size_t>& k) const {
            return std::hash<const void*>()(k.first) ^ (k.second * 0x9e3779b97f4a7c15ULL);
        }
    };

    void label_depth() {
        if (labels_)
            labels_->depth_bounded = true;
    }

    bool eval(const Assertion* a, std::size_t ctx) {
        using K = Assertion::Kind;
        switch (a->kind) {
        case K::kTrue:
            return true;
        case K::kFalse:
            return false;
        case K::kProj:
            return reduced_proj_prob(contexts_[ctx].state.quantum, a->qubit, a->bit) >= 1.0 - cfg_.atol;
        case K::kRel: {
            const Context& c = contexts_[ctx];
            return compare(a->rel, eval_arith(a->lhs, c.state.classical, &c.interp),
                           eval_arith(a->rhs, c.state.classical, &c.interp));
        }
        default:
            break;
        }
        const auto key = std::make_pair(a, ctx);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        bool result = false;
        switch (a->kind) {
        case K::kNot:
            result = !eval(a->left.get(), ctx);
            break;
        case K::kAnd:
            result = eval(a->left.get(), ctx) && eval(a->right.get(), ctx);
            break;
        case K::kBigAnd:
            label_depth();
            result = true;
            for (const auto& f : a->family)
                if (!eval(f.get(), ctx)) {
                    result = false;
                    break;
                }
            break;
        case K::kBoxUnitary: {
            Context next = contexts_[ctx];
            next.state.quantum = apply_gate(next.state.quantum, a->gate->matrix, a->qubits);
            result = eval(a->left.get(), push(std::move(next)));
            break;
        }
        case K::kBoxProj: {
            const Amplitudes& v = contexts_[ctx].state.quantum;
            const double p = reduced_proj_prob(v, a->qubit, a->bit);
            if (p <= cfg_.atol) {
                if (labels_)
                    labels_->vacuous_box_proj = true;
                result = true;
                break;
            }
            Context next = contexts_[ctx];
            next.state.quantum = project_qubit(v, a->qubit, a->bit) / std::sqrt(p);
            result = eval(a->left.get(), push(std::move(next)));
            break;
        }
        case K::kForall: {
            const Interpretation& in = contexts_[ctx].interp;
            auto range = in.ranges.find(a->var);
            if (range == in.ranges.end())
                throw RuntimeError("logical variable '" + a->var + "' has no declared range for forall");
            if (labels_)
                labels_->range_bounded = true;
            result = true;
            for (std::int64_t n = range->second.lo; n <= range->second.hi; ++n) {
                Context next = contexts_[ctx];
                next.interp.ints[a->var] = n;
                if (!eval(a->left.get(), push(std::move(next)))) {
                    result = false;
                    break;
                }
            }
            break;
        }
        default:
            break;
        }
        memo_.emplace(key, result);
        return result;
    }

    std::size_t push(Context c) {
        contexts_.push_back(std::move(c));
        return contexts_.size() - 1;
    }

    const SatConfig& cfg_;
    Labels* labels_;
    std::vector<Context> contexts_;
    std::unordered_map<std::pair<const Assertion*, std::size_t>, bool, KeyHash> memo_;
};

class RealEvaluator {
  public:
    RealEvaluator(const MixedCqState& m, const Interpretation& interp, const SatConfig& cfg, Labels* labels)
        : interp_(interp), labels_(labels) {
        for (const auto& [s, w] : m.entries()) {
            supports_.push_back({&s, w});
            sats_.emplace_back(s, interp, cfg, labels);
        }
    }

    double eval(const RealExpr* r) {
        using K = RealExpr::Kind;
        switch (r->kind) {
        case K::kConst:
            return r->value;
        case K::kVar: {
            auto it = interp_.reals.find(r->name);
            if (it == interp_.reals.end())
                throw RuntimeError("real variable '$" + r->name + "' is unbound");
            return it->second;
        }
        default:
            break;
        }
        if (auto it = memo_.find(r); it != memo_.end())
            return it->second;
        double v = 0.0;
        switch (r->kind) {
        case K::kProb:
            for (std::size_t i = 0; i < supports_.size(); ++i)
                if (sats_[i].holds(r->assertion))
                    v += supports_[i].second;
            break;
        case K::kCqCond:
            for (std::size_t i = 0; i < supports_.size(); ++i)
                if (sats_[i].holds(r->assertion))
                    v += supports_[i].second * expect_projector(supports_[i].first->quantum, *r->projector);
            break;
        case K::kBinary: {
            const double a = eval(r->lhs.get());
            const double b = eval(r->rhs.get());
            v = r->op == ArithOp::kAdd ? a + b : r->op == ArithOp::kSub ? a - b : a * b;
            break;
        }
        case K::kSum:
            if (labels_)
                labels_->depth_bounded = true;
            for (const auto& t : r->terms)
                v += eval(t.get());
            break;
        default:
            break;
        }
        memo_.emplace(r, v);
        return v;
    }

  private:
    const Interpretation& interp_;
    Labels* labels_;
    std::vector<std::pair<const PureCqState*, double>> supports_;
    std::vector<SatEvaluator> sats_;
    std::unordered_map<const RealExpr*, double> memo_;
};

bool formula_holds(const Formula* f, RealEvaluator& ev, double atol) {
    switch (f->kind) {
    case Formula::Kind::kRel:
        return compare_reals(f->rel, ev.eval(f->lhs.get()), ev.eval(f->rhs.get()), atol);
    case Formula::Kind::kNot:
        return !formula_holds(f->left.get(), ev, atol);
    case Formula::Kind::kAnd:
        return formula_holds(f->left.get(), ev, atol) && formula_holds(f->right.get(), ev, atol);
    }
    return false;
}

} // namespace

bool sat_pure(const AssertPtr& phi, const PureCqState& s, const Interpretation& interp, const SatConfig& cfg,
              Labels* labels) {
    return SatEvaluator(s, interp, cfg, labels).holds(phi);
}

bool sat_mixed(const AssertPtr& phi, const MixedCqState& m, const Interpretation& interp, const SatConfig& cfg,
               Labels* labels) {
    for (const auto& [s, w] : m.entries())
        if (!sat_pure(phi, s, interp, cfg, labels))
            return false;
    return true;
}

double eval_real(const RealPtr& r, const MixedCqState& m, const Interpretation& interp, const SatConfig& cfg,
                 Labels* labels) {
    RealEvaluator ev(m, interp, cfg, labels);
    return ev.eval(r.get());
}

bool compare_reals(RelOp op, double a, double b, double atol) {
    const bool eq = std::abs(a - b) <= atol;
    const bool lt = b - a > atol;
    switch (op) {
    case RelOp::kEq:
        return eq;
    case RelOp::kNe:
        return !eq;
    case RelOp::kLt:
        return lt;
    case RelOp::kLe:
        return lt || eq;
    case RelOp::kGt:
        return !lt && !eq;
    case RelOp::kGe:
        return !lt;
    }
    return false;
}

bool sat_prob(const FormulaPtr& f, const MixedCqState& m, const Interpretation& interp, const SatConfig& cfg,
              Labels* labels) {
    RealEvaluator ev(m, interp, cfg, labels);
    return formula_holds(f.get(), ev, cfg.atol);
}

} // namespace qhl
