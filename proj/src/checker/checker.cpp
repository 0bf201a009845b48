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

#include "qhl/checker/checker.hpp"

#include <map>

#include "qhl/cqstate/quantum.hpp"
#include "qhl/error.hpp"
#include "qhl/syntax/printer.hpp"

namespace qhl {

const char* to_string(Status s) {
    switch (s) {
    case Status::kValidOnSuite:
        return "VALID_ON_SUITE";
    case Status::kInvalid:
        return "INVALID";
    case Status::kDepthBounded:
        return "DEPTH_BOUNDED";
    }
    return "?";
}

std::vector<NamedInterp> interpretations(const SpecFile& spec) {
    std::vector<NamedInterp> out;
    for (const auto& d : spec.interps) {
        NamedInterp n{d.name, {}};
        n.interp.ints = d.ints;
        n.interp.reals = d.reals;
        out.push_back(std::move(n));
    }
    if (out.empty())
        out.push_back({"default", {}});
    for (auto& n : out)
        n.interp.ranges = spec.decls.logvars;
    return out;
}

int suite_qubits(const StateSuite& suite) {
    for (const auto& e : suite.entries)
        if (!e.state.empty())
            return num_qubits_of(e.state.entries().begin()->first.quantum);
    return 0;
}

namespace {

void relation_sides(const FormulaPtr& f, std::vector<RealPtr>& out) {
    if (f->kind == Formula::Kind::kRel) {
        out.push_back(f->lhs);
        out.push_back(f->rhs);
        return;
    }
    relation_sides(f->left, out);
    if (f->right)
        relation_sides(f->right, out);
}

std::vector<std::pair<std::string, double>> observe(const FormulaPtr& f, const MixedCqState& m,
                                                    const Interpretation& interp, const SatConfig& sat) {
    std::vector<RealPtr> sides;
    relation_sides(f, sides);
    std::vector<std::pair<std::string, double>> out;
    for (const auto& r : sides) {
        if (r->kind == RealExpr::Kind::kConst)
            continue;
        std::string text;
        try {
            text = pretty(r, 200);
        } catch (const TransformError&) {
            text = "<term longer than 200 characters>";
        }
        out.emplace_back(std::move(text), eval_real(r, m, interp, sat));
    }
    return out;
}

std::vector<PureCqState> violating(const AssertPtr& phi, const MixedCqState& m, const Interpretation& interp,
                                   const SatConfig& sat, std::vector<std::pair<std::string, double>>& observed) {
    std::vector<PureCqState> out;
    for (const auto& [s, mass] : m.entries()) {
        if (!sat_pure(phi, s, interp, sat)) {
            out.push_back(s);
            observed.emplace_back("mass of failing support " + std::to_string(out.size()), mass);
        }
    }
    return out;
}

// Shared driver: walks states and interpretations in order, stops at the
// first failure.
class Runner {
  public:
    Runner(const Triple& t, const StateSuite& suite, const std::vector<NamedInterp>& interps, const CheckConfig& cfg)
        : t_(t), suite_(suite), interps_(interps), cfg_(cfg) {
        if (interps_.empty())
            throw RuntimeError("no interpretation to check under");
    }

    Verdict run(bool use_wp) {
        Verdict v;
        v.method = use_wp ? "wp" : "semantic";
        if (use_wp) {
            DepthConfig d = cfg_.depth;
            if (d.num_qubits == 0)
                d.num_qubits = suite_qubits(suite_);
            if (t_.conds.probabilistic)
                wp_prob_ = wp_prob(t_.prog, t_.conds.ppost, d);
            else
                wp_det_ = wp_det(t_.prog, t_.conds.dpost, d);
        }
        bool depth = false;
        for (std::size_t i = 0; i < suite_.size() && !v.counterexample; ++i) {
            const auto& entry = suite_.entries[i];
            for (const auto& ni : interps_) {
                StateLog log;
                log.state_index = i;
                log.state_name = entry.name;
                log.interp_name = ni.name;
                log.pre_holds = pre(entry.state, ni.interp, v.labels);
                if (!log.pre_holds) {
                    v.log.push_back(log);
                    continue;
                }
                ++v.states_checked;
                const ExecResult& r = run_exec(i);
                log.residual_mass = r.residual_mass;
                if (r.residual_mass > cfg_.residual_tol)
                    depth = true;
                log.semantic = post(r.out, ni.interp, v.labels);
                if (use_wp) {
                    log.wp = wp_holds(entry.state, ni.interp, v.labels);
                    if (*log.wp != *log.semantic)
                        ++v.disagreements;
                }
                v.log.push_back(log);
                if (use_wp && !*log.wp) {
                    v.counterexample = wp_counterexample(i, ni, r);
                    break;
                }
                if (!*log.semantic) {
                    v.counterexample = semantic_counterexample(i, ni, r);
                    if (use_wp)
                        v.diagnostics.push_back("wp holds on " + entry.name +
                                                " but the executed output violates the postcondition");
                    break;
                }
            }
        }
        if (v.counterexample)
            v.status = Status::kInvalid;
        else if (depth)
            v.status = Status::kDepthBounded;
        if (depth)
            v.labels.depth_bounded = true;
        if (v.states_checked == 0)
            v.diagnostics.push_back("no suite state satisfies the precondition");
        return v;
    }

  private:
    bool pre(const MixedCqState& m, const Interpretation& in, Labels& labels) const {
        return t_.conds.probabilistic ? sat_prob(t_.conds.ppre, m, in, cfg_.sat, &labels)
                                      : sat_mixed(t_.conds.dpre, m, in, cfg_.sat, &labels);
    }

    bool post(const MixedCqState& m, const Interpretation& in, Labels& labels) const {
        return t_.conds.probabilistic ? sat_prob(t_.conds.ppost, m, in, cfg_.sat, &labels)
                                      : sat_mixed(t_.conds.dpost, m, in, cfg_.sat, &labels);
    }

    bool wp_holds(const MixedCqState& m, const Interpretation& in, Labels& labels) const {
        return t_.conds.probabilistic ? sat_prob(wp_prob_, m, in, cfg_.sat, &labels)
                                      : sat_mixed(wp_det_, m, in, cfg_.sat, &labels);
    }

    const ExecResult& run_exec(std::size_t i) {
        auto it = outputs_.find(i);
        if (it == outputs_.end())
            it = outputs_.emplace(i, exec(t_.prog, suite_.entries[i].state, cfg_.exec)).first;
        return it->second;
    }

    Counterexample base(std::size_t i, const NamedInterp& ni, const ExecResult& r, const char* method) const {
        Counterexample c;
        c.state_index = i;
        c.state_name = suite_.entries[i].name;
        c.interp_name = ni.name;
        c.method = method;
        c.input = suite_.entries[i].state;
        c.output = r.out;
        return c;
    }

    Counterexample semantic_counterexample(std::size_t i, const NamedInterp& ni, const ExecResult& r) const {
        Counterexample c = base(i, ni, r, "semantic");
        if (t_.conds.probabilistic)
            c.observed = observe(t_.conds.ppost, r.out, ni.interp, cfg_.sat);
        else
            c.failing_supports = violating(t_.conds.dpost, r.out, ni.interp, cfg_.sat, c.observed);
        return c;
    }

    Counterexample wp_counterexample(std::size_t i, const NamedInterp& ni, const ExecResult& r) const {
        Counterexample c = base(i, ni, r, "wp");
        const MixedCqState& in = suite_.entries[i].state;
        if (t_.conds.probabilistic)
            c.observed = observe(wp_prob_, in, ni.interp, cfg_.sat);
        else
            c.failing_supports = violating(wp_det_, in, ni.interp, cfg_.sat, c.observed);
        return c;
    }

    const Triple& t_;
    const StateSuite& suite_;
    const std::vector<NamedInterp>& interps_;
    const CheckConfig& cfg_;
    AssertPtr wp_det_;
    FormulaPtr wp_prob_;
    std::map<std::size_t, ExecResult> outputs_;
};

} // namespace

Verdict check_semantic(const Triple& t, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                       const CheckConfig& cfg) {
    return Runner(t, suite, interps, cfg).run(false);
}

Verdict check_wp(const Triple& t, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                 const CheckConfig& cfg) {
    return Runner(t, suite, interps, cfg).run(true);
}

} // namespace qhl
