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

#include "qhl/semantics/exec.hpp"

#include "qhl/cqstate/quantum.hpp"
#include "qhl/error.hpp"

namespace qhl {

namespace {

class Interpreter {
  public:
    explicit Interpreter(const ExecConfig& cfg) : cfg_(cfg) {}

    double residual() const { return residual_; }
    long iterations() const { return iterations_; }

    MixedCqState run(const CmdPtr& c, const MixedCqState& in) {
        MixedCqState out = step(c, in);
        out.prune(cfg_.prune_epsilon);
        return out;
    }

  private:
    MixedCqState step(const CmdPtr& c, const MixedCqState& in) {
        switch (c->kind) {
        case Command::Kind::kSkip:
            return in;
        case Command::Kind::kAssign: {
            MixedCqState out;
            for (const auto& [s, w] : in.entries()) {
                PureCqState t = s;
                t.classical[c->var] = eval_arith(c->expr, s.classical);
                out.add_canonical(t, w);
            }
            return out;
        }
        case Command::Kind::kRandAssign: {
            MixedCqState out;
            for (const auto& [s, w] : in.entries()) {
                for (const auto& b : c->branches) {
                    PureCqState t = s;
                    t.classical[c->var] = b.value;
                    out.add_canonical(t, w * b.prob);
                }
            }
            return out;
        }
        case Command::Kind::kSeq:
            return run(c->second, run(c->first, in));
        case Command::Kind::kIf: {
            MixedCqState out = run(c->first, restrict(in, c->guard));
            out.add_all(run(c->second, restrict(in, Assertion::negation(c->guard))));
            return out;
        }
        case Command::Kind::kWhile:
            return loop(c, in);
        case Command::Kind::kUnitary: {
            MixedCqState out;
            for (const auto& [s, w] : in.entries()) {
                PureCqState t;
                t.classical = s.classical;
                t.quantum = apply_gate(s.quantum, c->gate->matrix, c->qubits);
                out.add(t, w);
            }
            return out;
        }
        case Command::Kind::kMeasure: {
            MixedCqState out;
            for (const auto& [s, w] : in.entries()) {
                const auto branches = measure_qubit(s.quantum, c->qubit, cfg_.prune_epsilon);
                for (int i = 0; i < 2; ++i) {
                    const auto& b = branches[static_cast<std::size_t>(i)];
                    if (!b.present)
                        continue;
                    PureCqState t;
                    t.classical = s.classical;
                    t.classical[c->var] = i;
                    t.quantum = b.state;
                    out.add(t, w * b.prob);
                }
            }
            return out;
        }
        }
        throw RuntimeError("unknown command");
    }

    // Accumulates the guard-false part of each iterate until the guard mass
    // vanishes or the iteration cap is hit.
    MixedCqState loop(const CmdPtr& c, const MixedCqState& in) {
        const AssertPtr exit_guard = Assertion::negation(c->guard);
        MixedCqState done;
        MixedCqState current = in;
        long iters = 0;
        for (;;) {
            done.add_all(restrict(current, exit_guard));
            MixedCqState inside = restrict(current, c->guard);
            const double m = inside.mass();
            if (m < cfg_.mass_epsilon)
                break;
            if (iters >= cfg_.max_while_iters) {
                residual_ += m;
                break;
            }
            current = run(c->first, inside);
            ++iters;
        }
        iterations_ += iters;
        return done;
    }

    const ExecConfig& cfg_;
    double residual_ = 0.0;
    long iterations_ = 0;
};

} // namespace

ExecResult exec(const CmdPtr& c, const MixedCqState& in, const ExecConfig& cfg) {
    Interpreter interp(cfg);
    ExecResult r;
    r.out = interp.run(c, in);
    r.residual_mass = interp.residual();
    r.iterations_used = interp.iterations();
    return r;
}

ExecResult exec_pure(const CmdPtr& c, const PureCqState& in, const ExecConfig& cfg) {
    return exec(c, point_dist(in), cfg);
}

} // namespace qhl
