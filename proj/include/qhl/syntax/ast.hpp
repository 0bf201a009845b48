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

/**
 * @file
 * Immutable syntax trees for programs, deterministic assertions, real
 * expressions and probabilistic formulas.
 *
 * Every node is held by a shared pointer to const and never mutated after
 * construction, so subtrees are freely shared between the outputs of the
 * transformers. Nodes are built only through the factory functions below.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qhl/cqstate/linalg.hpp"

namespace qhl {

/// Inclusive integer range, used for quantifier domains.
struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

enum class ArithOp { kAdd, kSub, kMul };
enum class RelOp { kEq, kNe, kLt, kLe, kGt, kGe };

const char* to_symbol(ArithOp op);
const char* to_symbol(RelOp op);

// ---------------------------------------------------------------------------
// Arithmetic expressions over program and logical variables.

struct Arith;
using ArithPtr = std::shared_ptr<const Arith>;

struct Arith {
    enum class Kind { kConst, kProgVar, kLogVar, kBinary };

    Kind kind = Kind::kConst;
    std::int64_t value = 0;
    std::string name;
    ArithOp op = ArithOp::kAdd;
    ArithPtr lhs;
    ArithPtr rhs;

    static ArithPtr constant(std::int64_t v);
    static ArithPtr prog_var(std::string name);
    static ArithPtr log_var(std::string name);
    static ArithPtr binary(ArithOp op, ArithPtr lhs, ArithPtr rhs);
};

// ---------------------------------------------------------------------------
// Gates and projectors.

struct Gate {
    enum class Kind { kBuiltin, kOracle, kMatrix };

    std::string name;
    Kind kind = Kind::kBuiltin;
    int arity = 1;
    Matrix matrix;
    /// Oracle truth table indexed by the input bits read as a binary number.
    std::vector<int> table;
};
using GatePtr = std::shared_ptr<const Gate>;

/// One of H, X, Y, Z, S, T, CX, CZ, CCX, SWAP; nullptr for anything else.
GatePtr builtin_gate(const std::string& name);

/// U_f |x, y> = |x, y xor f(x)> on k input qubits plus one target.
/// Throws ParseError if the table length is not a power of two or a value
/// is not a bit.
GatePtr make_oracle(std::string name, std::vector<int> table);

/// Dense user gate; throws ParseError unless square, 2^k sized and unitary.
GatePtr make_matrix_gate(std::string name, Matrix matrix);

struct Projector;
using ProjectorPtr = std::shared_ptr<const Projector>;

/// A projective operator on the full m-qubit space. Dense operators built
/// by the transformers from measurements may be positive contractions.
///
/// Masks are diagonal: the projector onto every basis state whose bits
/// match at least one pattern over {0,1,*}. Pattern position 0 is qubit 1.
struct Projector {
    enum class Kind { kMask, kDense };

    std::string name;
    Kind kind = Kind::kMask;
    int num_qubits = 0;
    std::vector<std::string> patterns;
    Matrix dense;

    static ProjectorPtr mask(std::string name, int num_qubits, std::vector<std::string> patterns);
    static ProjectorPtr from_matrix(std::string name, Matrix q);

    bool matches(std::size_t basis_index) const;
    Matrix to_dense() const;
};

// ---------------------------------------------------------------------------
// Deterministic assertions. Program guards are the subset without
// projector atoms, modalities, quantifiers or logical variables.

struct Assertion;
using AssertPtr = std::shared_ptr<const Assertion>;

struct Assertion {
    enum class Kind { kTrue, kFalse, kProj, kRel, kNot, kAnd, kForall, kBoxUnitary, kBoxProj, kBigAnd };

    Kind kind = Kind::kTrue;
    int qubit = 0; // kProj, kBoxProj
    int bit = 0;   // kProj, kBoxProj
    RelOp rel = RelOp::kEq;
    ArithPtr lhs;
    ArithPtr rhs;
    AssertPtr left;  // operand of kNot, left of kAnd, body of kForall/kBox*
    AssertPtr right; // right of kAnd
    std::string var; // kForall
    GatePtr gate;    // kBoxUnitary
    std::vector<int> qubits;
    std::vector<AssertPtr> family; // kBigAnd, indices 0..bound
    int bound = 0;

    static AssertPtr truth();
    static AssertPtr falsity();
    static AssertPtr proj(int qubit, int bit);
    static AssertPtr relation(RelOp op, ArithPtr lhs, ArithPtr rhs);
    static AssertPtr negation(AssertPtr a);
    static AssertPtr conjunction(AssertPtr a, AssertPtr b);
    /// a ∨ b, desugared to ¬(¬a ∧ ¬b).
    static AssertPtr disjunction(AssertPtr a, AssertPtr b);
    /// a → b, desugared to ¬(a ∧ ¬b).
    static AssertPtr implication(AssertPtr a, AssertPtr b);
    static AssertPtr forall(std::string var, AssertPtr body);
    static AssertPtr box_unitary(GatePtr gate, std::vector<int> qubits, AssertPtr body);
    static AssertPtr box_proj(int qubit, int bit, AssertPtr body);
    /// Conjunction of family[0..K]; family.size() must be K + 1.
    static AssertPtr big_and(std::vector<AssertPtr> family, int bound);
};

/// Left-folded conjunction; an empty list yields true.
AssertPtr conjoin_all(const std::vector<AssertPtr>& parts);

/// True when the assertion is usable as a program guard.
bool is_guard(const AssertPtr& a);

// ---------------------------------------------------------------------------
// Commands.

struct RandBranch {
    double prob = 0.0;
    std::int64_t value = 0;
};

struct Command;
using CmdPtr = std::shared_ptr<const Command>;

struct Command {
    enum class Kind { kSkip, kAssign, kRandAssign, kSeq, kIf, kWhile, kUnitary, kMeasure };

    Kind kind = Kind::kSkip;
    std::string var;
    ArithPtr expr;
    std::vector<RandBranch> branches;
    AssertPtr guard;
    CmdPtr first;  // kSeq first, kIf then-branch, kWhile body
    CmdPtr second; // kSeq second, kIf else-branch
    GatePtr gate;
    std::vector<int> qubits;
    int qubit = 0; // kMeasure

    static CmdPtr skip();
    static CmdPtr assign(std::string var, ArithPtr expr);
    static CmdPtr rand_assign(std::string var, std::vector<RandBranch> branches);
    static CmdPtr seq(CmdPtr first, CmdPtr second);
    static CmdPtr if_then_else(AssertPtr guard, CmdPtr then_branch, CmdPtr else_branch);
    static CmdPtr while_loop(AssertPtr guard, CmdPtr body);
    static CmdPtr unitary(GatePtr gate, std::vector<int> qubits);
    static CmdPtr measure(std::string var, int qubit);
};

/// c;c;...;c (n copies, right nested); skip when n == 0.
CmdPtr repeat(const CmdPtr& c, int n);

/// True when no while loop occurs in c.
bool is_loop_free(const CmdPtr& c);

// ---------------------------------------------------------------------------
// Real expressions and probabilistic formulas.

struct RealExpr;
using RealPtr = std::shared_ptr<const RealExpr>;

struct RealExpr {
    enum class Kind { kConst, kVar, kProb, kBinary, kCqCond, kSum };

    Kind kind = Kind::kConst;
    double value = 0.0;
    std::string name;      // kVar, without the leading '$'
    AssertPtr assertion;   // kProb, kCqCond
    ProjectorPtr projector; // kCqCond
    ArithOp op = ArithOp::kAdd;
    RealPtr lhs;
    RealPtr rhs;
    std::vector<RealPtr> terms; // kSum, indices 0..bound
    int bound = 0;

    static RealPtr constant(double v);
    static RealPtr variable(std::string name);
    static RealPtr prob(AssertPtr a);
    static RealPtr binary(ArithOp op, RealPtr lhs, RealPtr rhs);
    static RealPtr cq_cond(AssertPtr a, ProjectorPtr q);
    /// Sum of terms[0..N]; terms.size() must be N + 1.
    static RealPtr bounded_sum(std::vector<RealPtr> terms, int bound);
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { kRel, kNot, kAnd };

    Kind kind = Kind::kRel;
    RelOp rel = RelOp::kEq;
    RealPtr lhs;
    RealPtr rhs;
    FormulaPtr left;
    FormulaPtr right;

    static FormulaPtr relation(RelOp op, RealPtr lhs, RealPtr rhs);
    static FormulaPtr negation(FormulaPtr f);
    static FormulaPtr conjunction(FormulaPtr a, FormulaPtr b);
    static FormulaPtr disjunction(FormulaPtr a, FormulaPtr b);
};

// ---------------------------------------------------------------------------
// Structural equality. Doubles and matrices compare exactly; gates compare
// by name, arity and matrix; projector names are ignored.

bool equal(const ArithPtr& a, const ArithPtr& b);
bool equal(const GatePtr& a, const GatePtr& b);
bool equal(const ProjectorPtr& a, const ProjectorPtr& b);
bool equal(const AssertPtr& a, const AssertPtr& b);
bool equal(const CmdPtr& a, const CmdPtr& b);
bool equal(const RealPtr& a, const RealPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

} // namespace qhl
