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
#include <memory>
#include <unordered_map>
#include <vector>

#include "qhl/syntax/ast.hpp"

namespace qhl {

/// Replaces a program variable by an expression, phi[X/E].
///
/// Program variables are never bound, so no renaming is needed. Results are
/// memoized per node, which keeps shared subtrees shared, and untouched
/// subtrees are returned as the same pointer.
class Substituter {
  public:
    Substituter(std::string var, ArithPtr replacement);

    ArithPtr apply(const ArithPtr& e);
    AssertPtr apply(const AssertPtr& a);
    RealPtr apply(const RealPtr& r);

  private:
    std::string var_;
    ArithPtr replacement_;
    std::unordered_map<const Arith*, ArithPtr> arith_memo_;
    std::unordered_map<const Assertion*, AssertPtr> assert_memo_;
    std::unordered_map<const RealExpr*, RealPtr> real_memo_;
    std::vector<std::shared_ptr<const void>> pins_; // keeps memo keys alive
};

AssertPtr subst_prog_var(const AssertPtr& phi, const std::string& var, const ArithPtr& e);
RealPtr subst_prog_var(const RealPtr& r, const std::string& var, const ArithPtr& e);

} // namespace qhl
