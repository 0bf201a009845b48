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

#include <string>
#include <vector>

#include "qhl/checker/checker.hpp"
#include "qhl/syntax/parser.hpp"

namespace qhl {

/// Checks every step of a proof script against its rule. Axioms are
/// matched structurally after folding closed relations; SEQ, IF and WHILE
/// premises are matched structurally; CONS side conditions are evaluated
/// on the suite and on the supports reached from it. When target is given
/// the last step must conclude it.
Verdict check_proof(const ProofDecl& proof, const StateSuite& suite, const std::vector<NamedInterp>& interps,
                    const CheckConfig& cfg = {}, const Triple* target = nullptr);

/// A proof of {wp(C, post)} C {post} built from the rule schemas. The
/// deterministic system needs a loop-free C and uses CONS at each IF.
ProofDecl derive_wp_proof(const CmdPtr& c, const TriplePair& post, const DepthConfig& d = {});

/// Replaces relations between closed integer expressions by true or false.
AssertPtr fold_closed(const AssertPtr& a);
RealPtr fold_closed(const RealPtr& r);
FormulaPtr fold_closed(const FormulaPtr& f);

} // namespace qhl
