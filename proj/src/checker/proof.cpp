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

#include "qhl/checker/proof.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "qhl/error.hpp"
#include "qhl/syntax/printer.hpp"
#include "qhl/syntax/subst.hpp"

namespace qhl {

// ---------------------------------------------------------------------------
// Folding closed relations

namespace {

bool closed(const ArithPtr& e) {
    switch (e->kind) {
    case Arith::Kind::kConst:
        return true;
    case Arith::Kind::kBinary:
        return closed(e->lhs) && closed(e->rhs);
    default:
        return false;
    }
}

class Folder {
  public:
    AssertPtr apply(const AssertPtr& a) {
        if (auto it = amemo_.find(a.get()); it != amemo_.end())
            return it->second;
        AssertPtr out = a;
        switch (a->kind) {
        case Assertion::Kind::kRel:
            if (closed(a->lhs) && closed(a->rhs)) {
                try {
                    const Store none;
                    out = compare(a->rel, eval_arith(a->lhs, none), eval_arith(a->rhs, none)) ? Assertion::truth()
                                                                                             : Assertion::falsity();
                } catch (const RuntimeError&) {
                    // overflowing constants stay as written
                }
            }
            break;
        case Assertion::Kind::kNot:
            out = rebuild(a, Assertion::negation(apply(a->left)));
            break;
        case Assertion::Kind::kAnd:
            out = rebuild(a, Assertion::conjunction(apply(a->left), apply(a->right)));
            break;
        case Assertion::Kind::kForall:
            out = rebuild(a, Assertion::forall(a->var, apply(a->left)));
            break;
        case Assertion::Kind::kBoxUnitary:
            out = rebuild(a, Assertion::box_unitary(a->gate, a->qubits, apply(a->left)));
            break;
        case Assertion::Kind::kBoxProj:
            out = rebuild(a, Assertion::box_proj(a->qubit, a->bit, apply(a->left)));
            break;
        case Assertion::Kind::kBigAnd: {
            std::vector<AssertPtr> fam;
            bool same = true;
            for (const auto& f : a->family) {
                fam.push_back(apply(f));
                same = same && fam.back() == f;
            }
            if (!same)
                out = Assertion::big_and(std::move(fam), a->bound);
            break;
        }
        default:
            break;
        }
        amemo_.emplace(a.get(), out);
        pins_.push_back(a);
        return out;
    }

    RealPtr apply(const RealPtr& r) {
        if (auto it = rmemo_.find(r.get()); it != rmemo_.end())
            return it->second;
        RealPtr out = r;
        switch (r->kind) {
        case RealExpr::Kind::kProb: {
            AssertPtr a = apply(r->assertion);
            if (a != r->assertion)
                out = RealExpr::prob(a);
            break;
        }
        case RealExpr::Kind::kCqCond: {
            AssertPtr a = apply(r->assertion);
            if (a != r->assertion)
                out = RealExpr::cq_cond(a, r->projector);
            break;
        }
        case RealExpr::Kind::kBinary: {
            RealPtr l = apply(r->lhs);
            RealPtr rr = apply(r->rhs);
            if (l != r->lhs || rr != r->rhs)
                out = RealExpr::binary(r->op, l, rr);
            break;
        }
        case RealExpr::Kind::kSum: {
            std::vector<RealPtr> terms;
            bool same = true;
            for (const auto& t : r->terms) {
                terms.push_back(apply(t));
                same = same && terms.back() == t;
            }
            if (!same)
                out = RealExpr::bounded_sum(std::move(terms), r->bound);
            break;
        }
        default:
            break;
        }
        rmemo_.emplace(r.get(), out);
        pins_.push_back(r);
        return out;
    }

    FormulaPtr apply(const FormulaPtr& f) {
        switch (f->kind) {
        case Formula::Kind::kRel:
            return Formula::relation(f->rel, apply(f->lhs), apply(f->rhs));
        case Formula::Kind::kNot:
            return Formula::negation(apply(f->left));
        case Formula::Kind::kAnd:
            return Formula::conjunction(apply(f->left), apply(f->right));
        }
        return f;
    }

  private:
    // Keeps the original node when nothing below it changed.
    static AssertPtr rebuild(const AssertPtr& orig, AssertPtr fresh) {
        const bool same = fresh->left == orig->left && fresh->right == orig->right;
        return same ? orig : fresh;
    }

    std::unordered_map<const Assertion*, AssertPtr> amemo_;
    std::unordered_map<const RealExpr*, RealPtr> rmemo_;
    std::vector<std::shared_ptr<const void>> pins_;
};

} // namespace

AssertPtr fold_closed(const AssertPtr& a) { return Folder().apply(a); }
RealPtr fold_closed(const RealPtr& r) { return Folder().apply(r); }
FormulaPtr fold_closed(const FormulaPtr& f) { return Folder().apply(f); }

// ---------------------------------------------------------------------------
// Proof checking

namespace {

std::string show(const AssertPtr& a) {
    try {
        return pretty(a, 4000);
    } catch (const TransformError&) {
        return "<assertion longer than 4000 characters>";
    }
}

std::string show(const FormulaPtr& f) {
    try {
        return pretty(f, 4000);
    } catch (const TransformError&) {
        return "<formula longer than 4000 characters>";
    }
}

std::string show(const CmdPtr& c) {
    try {
        return pretty(c, 4000);
    } catch (const TransformError&) {
        return "<command longer than 4000 characters>";
    }
}

bool same(const AssertPtr& a, const AssertPtr& b) { return equal(fold_closed(a), fold_closed(b)); }
bool same(const FormulaPtr& a, const FormulaPtr& b) { return equal(fold_closed(a), fold_closed(b)); }

Command::Kind rule_command(const std::string& rule) {
    static const std::map<std::string, Command::Kind> kinds = {
        {"SKIP", Command::Kind::kSkip},       {"AS", Command::Kind::kAssign},
        {"PAS", Command::Kind::kRandAssign},  {"SEQ", Command::Kind::kSeq},
        {"IF", Command::Kind::kIf},           {"WHILE", Command::Kind::kWhile},
        {"UNITARY", Command::Kind::kUnitary}, {"MEASURE", Command::Kind::kMeasure},
    };
    return kinds.at(rule);
}

std::size_t rule_arity(const std::string& rule, bool probabilistic) {
    if (rule == "SEQ" || (!probabilistic && rule == "IF"))
        return 2;
    if (rule == "CONS" || (!probabilistic && rule == "WHILE"))
        return 1;
    return 0;
}

class ProofChecker {
  public:
    ProofChecker(const ProofDecl& p, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                 const CheckConfig& cfg)
        : proof_(p), suite_(suite), interps_(interps), cfg_(cfg) {
        depth_ = cfg.depth;
        if (depth_.num_qubits == 0)
            depth_.num_qubits = suite_qubits(suite);
    }

    Verdict run(const Triple* target) {
        v_.method = "proof";
        for (const auto& st : proof_.steps) {
            try {
                if (step(st))
                    v_.diagnostics.push_back("step " + st.label + " (" + st.rule + "): ok");
            } catch (const QhlError& e) {
                fail(st, e.what());
            }
            by_label_[st.label] = &st;
        }
        if (target && !proof_.steps.empty())
            check_target(proof_.steps.back(), *target);
        v_.status = failed_ ? Status::kInvalid : Status::kValidOnSuite;
        return v_;
    }

  private:
    void fail(const ProofStep& st, const std::string& msg) {
        failed_ = true;
        v_.diagnostics.push_back("step " + st.label + " (" + st.rule + "): " + msg);
    }

    void mismatch(const ProofStep& st, const std::string& what, const std::string& expected,
                  const std::string& given) {
        fail(st, "rule mismatch in the " + what + "\n  expected: " + expected + "\n  given:    " + given);
    }

    bool check_cmd(const ProofStep& st, Command::Kind want) {
        if (st.command->kind == want)
            return true;
        fail(st, "rule needs a different command form, found " + show(st.command));
        return false;
    }

    // Compares one side of the step with the schema's instance.
    bool expect_pre(const ProofStep& st, const TriplePair& want) {
        if (st.conds.probabilistic) {
            if (same(st.conds.ppre, want.ppre))
                return true;
            mismatch(st, "precondition", show(want.ppre), show(st.conds.ppre));
        } else {
            if (same(st.conds.dpre, want.dpre))
                return true;
            mismatch(st, "precondition", show(want.dpre), show(st.conds.dpre));
        }
        return false;
    }

    bool expect_post(const ProofStep& st, const TriplePair& want) {
        if (st.conds.probabilistic) {
            if (same(st.conds.ppost, want.ppost))
                return true;
            mismatch(st, "postcondition", show(want.ppost), show(st.conds.ppost));
        } else {
            if (same(st.conds.dpost, want.dpost))
                return true;
            mismatch(st, "postcondition", show(want.dpost), show(st.conds.dpost));
        }
        return false;
    }

    // The premise must be {pre} cmd {post} for the given parts.
    bool expect_premise(const ProofStep& st, const ProofStep& p, const CmdPtr& cmd, const TriplePair& want,
                        const std::string& role) {
        bool ok = true;
        if (!equal(p.command, cmd)) {
            fail(st, "premise " + p.label + " (" + role + ") proves a triple about " + show(p.command) +
                         ", expected " + show(cmd));
            ok = false;
        }
        const bool pre_ok = p.conds.probabilistic ? same(p.conds.ppre, want.ppre) : same(p.conds.dpre, want.dpre);
        if (!pre_ok) {
            mismatch(st, "precondition of premise " + p.label + " (" + role + ")",
                     p.conds.probabilistic ? show(want.ppre) : show(want.dpre),
                     p.conds.probabilistic ? show(p.conds.ppre) : show(p.conds.dpre));
            ok = false;
        }
        const bool post_ok =
            p.conds.probabilistic ? same(p.conds.ppost, want.ppost) : same(p.conds.dpost, want.dpost);
        if (!post_ok) {
            mismatch(st, "postcondition of premise " + p.label + " (" + role + ")",
                     p.conds.probabilistic ? show(want.ppost) : show(want.dpost),
                     p.conds.probabilistic ? show(p.conds.ppost) : show(p.conds.dpost));
            ok = false;
        }
        return ok;
    }

    static TriplePair det(AssertPtr pre, AssertPtr post) {
        TriplePair t;
        t.dpre = std::move(pre);
        t.dpost = std::move(post);
        return t;
    }

    static TriplePair prob(FormulaPtr pre, FormulaPtr post) {
        TriplePair t;
        t.probabilistic = true;
        t.ppre = std::move(pre);
        t.ppost = std::move(post);
        return t;
    }

    bool step(const ProofStep& st) {
        static const char* rules[] = {"SKIP", "AS", "PAS", "SEQ", "IF", "WHILE", "UNITARY", "MEASURE", "CONS"};
        if (std::find(std::begin(rules), std::end(rules), st.rule) == std::end(rules)) {
            fail(st, "malformed step: unknown rule '" + st.rule + "'");
            return false;
        }
        const bool pr = st.conds.probabilistic;
        if (st.premises.size() != rule_arity(st.rule, pr)) {
            fail(st, "malformed step: rule takes " + std::to_string(rule_arity(st.rule, pr)) + " premise(s), given " +
                         std::to_string(st.premises.size()));
            return false;
        }
        std::vector<const ProofStep*> prem;
        for (const auto& l : st.premises) {
            const ProofStep* p = by_label_.at(l);
            if (p->conds.probabilistic != pr) {
                fail(st, "premise " + l + " is a triple of the other sort");
                return false;
            }
            prem.push_back(p);
        }
        const bool was_failed = failed_;
        failed_ = false;
        if (st.rule == "CONS")
            cons(st, *prem[0]);
        else if (st.rule == "SEQ")
            seq(st, *prem[0], *prem[1]);
        else if (pr)
            prob_axiom(st);
        else
            det_rule(st, prem);
        const bool ok = !failed_;
        failed_ = failed_ || was_failed;
        return ok;
    }

    void seq(const ProofStep& st, const ProofStep& p1, const ProofStep& p2) {
        if (!check_cmd(st, Command::Kind::kSeq))
            return;
        const CmdPtr& c = st.command;
        if (st.conds.probabilistic) {
            expect_premise(st, p1, c->first, prob(st.conds.ppre, p2.conds.ppre), "first");
            expect_premise(st, p2, c->second, prob(p2.conds.ppre, st.conds.ppost), "second");
        } else {
            expect_premise(st, p1, c->first, det(st.conds.dpre, p2.conds.dpre), "first");
            expect_premise(st, p2, c->second, det(p2.conds.dpre, st.conds.dpost), "second");
        }
    }

    void prob_axiom(const ProofStep& st) {
        if (!check_cmd(st, rule_command(st.rule)))
            return;
        expect_pre(st, prob(wp_prob(st.command, st.conds.ppost, depth_), nullptr));
    }

    void det_rule(const ProofStep& st, const std::vector<const ProofStep*>& prem) {
        if (!check_cmd(st, rule_command(st.rule)))
            return;
        const CmdPtr& c = st.command;
        const AssertPtr& pre = st.conds.dpre;
        const AssertPtr& post = st.conds.dpost;
        if (st.rule == "IF") {
            expect_premise(st, *prem[0], c->first, det(Assertion::conjunction(pre, c->guard), post), "then");
            expect_premise(st, *prem[1], c->second,
                           det(Assertion::conjunction(pre, Assertion::negation(c->guard)), post), "else");
        } else if (st.rule == "WHILE") {
            expect_premise(st, *prem[0], c->first, det(Assertion::conjunction(pre, c->guard), pre), "body");
            expect_post(st, det(nullptr, Assertion::conjunction(pre, Assertion::negation(c->guard))));
        } else {
            expect_pre(st, det(wp_det(c, post, depth_), nullptr));
        }
    }

    // {pre'} C {post'} from {pre} C {post} when pre' -> pre and post -> post'.
    void cons(const ProofStep& st, const ProofStep& p) {
        if (!equal(st.command, p.command)) {
            fail(st, "premise " + p.label + " proves a triple about " + show(p.command) + ", expected " +
                         show(st.command));
            return;
        }
        v_.checked_on_suite = true;
        for (std::size_t i = 0; i < suite_.size(); ++i) {
            const MixedCqState& in = suite_.entries[i].state;
            for (const auto& ni : interps_) {
                if (!implies(st.conds, p.conds, true, in, ni.interp)) {
                    cons_failure(st, i, ni, in, "the new precondition does not imply the premise's precondition");
                    return;
                }
            }
            const ExecResult r = exec(st.command, in, cfg_.exec);
            for (const auto& out : observed_states(r.out)) {
                for (const auto& ni : interps_) {
                    if (!implies(p.conds, st.conds, false, out, ni.interp)) {
                        cons_failure(st, i, ni, out,
                                     "the premise's postcondition does not imply the new postcondition");
                        return;
                    }
                }
            }
        }
    }

    // The output itself for formulas; each support for assertions.
    std::vector<MixedCqState> observed_states(const MixedCqState& out) const {
        if (proof_.steps.front().conds.probabilistic)
            return {out};
        std::vector<MixedCqState> v;
        for (const auto& [s, mass] : out.entries())
            v.push_back(point_dist(s));
        return v;
    }

    // a -> b on m, using the pre or post sides.
    bool implies(const TriplePair& a, const TriplePair& b, bool pre_side, const MixedCqState& m,
                 const Interpretation& in) {
        if (a.probabilistic) {
            const FormulaPtr& fa = pre_side ? a.ppre : a.ppost;
            const FormulaPtr& fb = pre_side ? b.ppre : b.ppost;
            return !sat_prob(fa, m, in, cfg_.sat, &v_.labels) || sat_prob(fb, m, in, cfg_.sat, &v_.labels);
        }
        const AssertPtr& da = pre_side ? a.dpre : a.dpost;
        const AssertPtr& db = pre_side ? b.dpre : b.dpost;
        for (const auto& [s, mass] : m.entries())
            if (sat_pure(da, s, in, cfg_.sat, &v_.labels) && !sat_pure(db, s, in, cfg_.sat, &v_.labels))
                return false;
        return true;
    }

    void cons_failure(const ProofStep& st, std::size_t i, const NamedInterp& ni, const MixedCqState& state,
                      const std::string& msg) {
        fail(st, msg + " on " + suite_.entries[i].name);
        if (v_.counterexample)
            return;
        Counterexample c;
        c.state_index = i;
        c.state_name = suite_.entries[i].name;
        c.interp_name = ni.name;
        c.method = "cons";
        c.input = state;
        v_.counterexample = std::move(c);
    }

    void check_target(const ProofStep& last, const Triple& t) {
        bool ok = equal(last.command, t.prog) && last.conds.probabilistic == t.conds.probabilistic;
        if (ok)
            ok = t.conds.probabilistic
                     ? same(last.conds.ppre, t.conds.ppre) && same(last.conds.ppost, t.conds.ppost)
                     : same(last.conds.dpre, t.conds.dpre) && same(last.conds.dpost, t.conds.dpost);
        if (!ok) {
            failed_ = true;
            v_.diagnostics.push_back("the last step " + last.label + " does not conclude triple " + t.name);
        }
    }

    const ProofDecl& proof_;
    const StateSuite& suite_;
    const std::vector<NamedInterp>& interps_;
    const CheckConfig& cfg_;
    DepthConfig depth_;
    Verdict v_;
    bool failed_ = false;
    std::map<std::string, const ProofStep*> by_label_;
};

// ---------------------------------------------------------------------------
// Deriving proofs

class Deriver {
  public:
    Deriver(bool probabilistic, const DepthConfig& d) : prob_(probabilistic), d_(d) {}

    // Appends steps ending in {wp(c, post)} c {post}; returns that step.
    const ProofStep& derive(const CmdPtr& c, const TriplePair& post) {
        if (c->kind == Command::Kind::kSeq) {
            const TriplePair mid = derive(c->second, post).conds;
            const std::string l2 = steps_.back().label;
            const ProofStep& s1 = derive(c->first, only_post(mid));
            return add("SEQ", {s1.label, l2}, c, with_pre(post, s1.conds));
        }
        if (!prob_ && c->kind == Command::Kind::kWhile)
            throw TransformError("deterministic loops need an invariant; no proof is derived");
        if (!prob_ && c->kind == Command::Kind::kIf) {
            const TriplePair w = wp_of(c, post);
            const std::string t = derive(c->first, post).label;
            const std::string tc =
                add("CONS", {t}, c->first, det(Assertion::conjunction(w.dpre, c->guard), post.dpost)).label;
            const std::string e = derive(c->second, post).label;
            const std::string ec =
                add("CONS", {e}, c->second,
                    det(Assertion::conjunction(w.dpre, Assertion::negation(c->guard)), post.dpost))
                    .label;
            return add("IF", {tc, ec}, c, w);
        }
        static const std::map<Command::Kind, const char*> names = {
            {Command::Kind::kSkip, "SKIP"},  {Command::Kind::kAssign, "AS"},
            {Command::Kind::kRandAssign, "PAS"}, {Command::Kind::kIf, "IF"},
            {Command::Kind::kWhile, "WHILE"}, {Command::Kind::kUnitary, "UNITARY"},
            {Command::Kind::kMeasure, "MEASURE"},
        };
        return add(names.at(c->kind), {}, c, wp_of(c, post));
    }

    ProofDecl take(std::string name) {
        ProofDecl p;
        p.name = std::move(name);
        p.steps = std::move(steps_);
        return p;
    }

  private:
    TriplePair wp_of(const CmdPtr& c, const TriplePair& post) const {
        TriplePair t = post;
        if (prob_)
            t.ppre = wp_prob(c, post.ppost, d_);
        else
            t.dpre = wp_det(c, post.dpost, d_);
        return t;
    }

    static TriplePair det(AssertPtr pre, AssertPtr post) {
        TriplePair t;
        t.dpre = std::move(pre);
        t.dpost = std::move(post);
        return t;
    }

    // The postcondition of a step about the next command is the previous pre.
    TriplePair only_post(const TriplePair& t) const {
        TriplePair p;
        p.probabilistic = prob_;
        p.dpost = t.dpre;
        p.ppost = t.ppre;
        return p;
    }

    static TriplePair with_pre(const TriplePair& post, const TriplePair& first) {
        TriplePair t = post;
        t.dpre = first.dpre;
        t.ppre = first.ppre;
        return t;
    }

    const ProofStep& add(const char* rule, std::vector<std::string> premises, const CmdPtr& c, TriplePair conds) {
        ProofStep st;
        st.label = "s" + std::to_string(steps_.size() + 1);
        st.rule = rule;
        st.premises = std::move(premises);
        st.command = c;
        st.conds = std::move(conds);
        st.conds.probabilistic = prob_;
        steps_.push_back(std::move(st));
        return steps_.back();
    }

    bool prob_;
    DepthConfig d_;
    std::vector<ProofStep> steps_;
};

} // namespace

Verdict check_proof(const ProofDecl& proof, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                    const CheckConfig& cfg, const Triple* target) {
    return ProofChecker(proof, suite, interps, cfg).run(target);
}

ProofDecl derive_wp_proof(const CmdPtr& c, const TriplePair& post, const DepthConfig& d) {
    Deriver dv(post.probabilistic, infer_qubits(d, c, post.probabilistic ? post.ppost : nullptr));
    dv.derive(c, post);
    return dv.take("derived");
}

} // namespace qhl
