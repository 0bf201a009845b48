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

#pragma once

#include "qhl/cqstate/cqstate.hpp"
#include "qhl/syntax/ast.hpp"

namespace qhl {

struct SatConfig {
    double atol = 1e-9;
};

/// Approximations an evaluation relied on.
struct Labels {
    bool range_bounded = false;    // a forall was checked over its declared range only
    bool depth_bounded = false;    // a bounded conjunction or sum was evaluated
    bool vacuous_box_proj = false; // a [Proj j,i] modality had outcome probability ~0

    void merge(const Labels& o) {
        range_bounded = range_bounded || o.range_bounded;
        depth_bounded = depth_bounded || o.depth_bounded;
        vacuous_box_proj = vacuous_box_proj || o.vacuous_box_proj;
    }
};

bool sat_pure(const AssertPtr& phi, const PureCqState& s, const Interpretation& interp = {},
              const SatConfig& cfg = {}, Labels* labels = nullptr);

/// Possibility semantics: phi holds on every support (true when empty).
bool sat_mixed(const AssertPtr& phi, const MixedCqState& m, const Interpretation& interp = {},
               const SatConfig& cfg = {}, Labels* labels = nullptr);

double eval_real(const RealPtr& r, const MixedCqState& m, const Interpretation& interp = {},
                 const SatConfig& cfg = {}, Labels* labels = nullptr);

/// Comparison of reals with slack: a = b iff |a - b| <= atol, a < b iff
/// b - a > atol, and the rest derived from these two.
bool compare_reals(RelOp op, double a, double b, double atol);

bool sat_prob(const FormulaPtr& f, const MixedCqState& m, const Interpretation& interp = {},
              const SatConfig& cfg = {}, Labels* labels = nullptr);

} // namespace qhl
