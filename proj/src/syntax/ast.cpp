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

#include "qhl/syntax/ast.hpp"

#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "qhl/error.hpp"

namespace qhl {

const char* to_symbol(ArithOp op) {
    switch (op) {
    case ArithOp::kAdd:
        return "+";
    case ArithOp::kSub:
        return "-";
    case ArithOp::kMul:
        return "*";
    }
    return "?";
}

const char* to_symbol(RelOp op) {
    switch (op) {
    case RelOp::kEq:
        return "=";
    case RelOp::kNe:
        return "!=";
    case RelOp::kLt:
        return "<";
    case RelOp::kLe:
        return "<=";
    case RelOp::kGt:
        return ">";
    case RelOp::kGe:
        return ">=";
    }
    return "?";
}

// ---------------------------------------------------------------------------

ArithPtr Arith::constant(std::int64_t v) {
    auto n = std::make_shared<Arith>();
    n->kind = Kind::kConst;
    n->value = v;
    return n;
}

ArithPtr Arith::prog_var(std::string name) {
    auto n = std::make_shared<Arith>();
    n->kind = Kind::kProgVar;
    n->name = std::move(name);
    return n;
}

ArithPtr Arith::log_var(std::string name) {
    auto n = std::make_shared<Arith>();
    n->kind = Kind::kLogVar;
    n->name = std::move(name);
    return n;
}

ArithPtr Arith::binary(ArithOp op, ArithPtr lhs, ArithPtr rhs) {
    auto n = std::make_shared<Arith>();
    n->kind = Kind::kBinary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

// ---------------------------------------------------------------------------

namespace {

GatePtr builtin(const std::string& name, int arity, Matrix m) {
    auto g = std::make_shared<Gate>();
    g->name = name;
    g->kind = Gate::Kind::kBuiltin;
    g->arity = arity;
    g->matrix = std::move(m);
    return g;
}

Matrix permutation(int dim, const std::vector<int>& image) {
    Matrix m = Matrix::Zero(dim, dim);
    for (int in = 0; in < dim; ++in)
        m(image[static_cast<std::size_t>(in)], in) = 1.0;
    return m;
}

std::map<std::string, GatePtr> make_builtins() {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    std::map<std::string, GatePtr> out;
    Matrix h(2, 2);
    h << s, s, s, -s;
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Matrix y(2, 2);
    y << 0, -i, i, 0;
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    Matrix sg(2, 2);
    sg << 1, 0, 0, i;
    Matrix t(2, 2);
    t << 1, 0, 0, std::exp(i * (M_PI / 4.0));
    out["H"] = builtin("H", 1, h);
    out["X"] = builtin("X", 1, x);
    out["Y"] = builtin("Y", 1, y);
    out["Z"] = builtin("Z", 1, z);
    out["S"] = builtin("S", 1, sg);
    out["T"] = builtin("T", 1, t);
    out["CX"] = builtin("CX", 2, permutation(4, {0, 1, 3, 2}));
    Matrix cz = Matrix::Identity(4, 4);
    cz(3, 3) = -1.0;
    out["CZ"] = builtin("CZ", 2, cz);
    out["CCX"] = builtin("CCX", 3, permutation(8, {0, 1, 2, 3, 4, 5, 7, 6}));
    out["SWAP"] = builtin("SWAP", 2, permutation(4, {0, 2, 1, 3}));
    return out;
}

} // namespace

GatePtr builtin_gate(const std::string& name) {
    static const std::map<std::string, GatePtr> table = make_builtins();
    auto it = table.find(name);
    return it == table.end() ? nullptr : it->second;
}

GatePtr make_oracle(std::string name, std::vector<int> table) {
    int inputs = 0;
    if (table.size() == 1)
        inputs = 0;
    else if (!is_power_of_two(table.size(), inputs))
        throw ParseError("oracle '" + name + "' truth table must have 2^k entries", {});
    for (int v : table)
        if (v != 0 && v != 1)
            throw ParseError("oracle '" + name + "' values must be 0 or 1", {});
    const int dim = 1 << (inputs + 1);
    std::vector<int> image(static_cast<std::size_t>(dim));
    for (int in = 0; in < dim; ++in) {
        const int x = in >> 1;
        const int y = in & 1;
        image[static_cast<std::size_t>(in)] = (x << 1) | (y ^ table[static_cast<std::size_t>(x)]);
    }
    auto g = std::make_shared<Gate>();
    g->name = std::move(name);
    g->kind = Gate::Kind::kOracle;
    g->arity = inputs + 1;
    g->matrix = permutation(dim, image);
    g->table = std::move(table);
    return g;
}

GatePtr make_matrix_gate(std::string name, Matrix matrix) {
    int bits = 0;
    if (matrix.rows() != matrix.cols() || !is_power_of_two(static_cast<std::size_t>(matrix.rows()), bits))
        throw ParseError("gate '" + name + "' must be a square matrix of dimension 2^k", {});
    if (!is_unitary(matrix))
        throw ParseError("gate '" + name + "' is not unitary (|U'U - I| >= 1e-9)", {});
    auto g = std::make_shared<Gate>();
    g->name = std::move(name);
    g->kind = Gate::Kind::kMatrix;
    g->arity = bits;
    g->matrix = std::move(matrix);
    return g;
}

// ---------------------------------------------------------------------------

ProjectorPtr Projector::mask(std::string name, int num_qubits, std::vector<std::string> patterns) {
    for (const auto& p : patterns) {
        if (static_cast<int>(p.size()) != num_qubits)
            throw ParseError("mask pattern '" + p + "' must have one symbol per qubit (" +
                                 std::to_string(num_qubits) + ")",
                             {});
        for (char c : p)
            if (c != '0' && c != '1' && c != '*')
                throw ParseError("mask pattern '" + p + "' may only contain 0, 1 and *", {});
    }
    auto q = std::make_shared<Projector>();
    q->name = std::move(name);
    q->kind = Kind::kMask;
    q->num_qubits = num_qubits;
    q->patterns = std::move(patterns);
    return q;
}

ProjectorPtr Projector::from_matrix(std::string name, Matrix m) {
    int bits = 0;
    if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows()), bits))
        throw ParseError("projector '" + name + "' must be a square matrix of dimension 2^m", {});
    if (!is_projector(m))
        throw ParseError("projector '" + name + "' is not Hermitian and idempotent within 1e-9", {});
    auto q = std::make_shared<Projector>();
    q->name = std::move(name);
    q->kind = Kind::kDense;
    q->num_qubits = bits;
    q->dense = std::move(m);
    return q;
}

bool Projector::matches(std::size_t basis_index) const {
    for (const auto& p : patterns) {
        bool ok = true;
        for (int j = 0; j < num_qubits && ok; ++j) {
            const char c = p[static_cast<std::size_t>(j)];
            if (c == '*')
                continue;
            const int bit = static_cast<int>((basis_index >> (num_qubits - 1 - j)) & 1U);
            ok = bit == c - '0';
        }
        if (ok)
            return true;
    }
    return false;
}

Matrix Projector::to_dense() const {
    if (kind == Kind::kDense)
        return dense;
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        if (matches(static_cast<std::size_t>(k)))
            m(k, k) = 1.0;
    return m;
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Assertion> node(Assertion::Kind kind) {
    auto n = std::make_shared<Assertion>();
    n->kind = kind;
    return n;
}

} // namespace

AssertPtr Assertion::truth() {
    static const AssertPtr t = node(Kind::kTrue);
    return t;
}

AssertPtr Assertion::falsity() {
    static const AssertPtr f = node(Kind::kFalse);
    return f;
}

AssertPtr Assertion::proj(int qubit, int bit) {
    auto n = node(Kind::kProj);
    n->qubit = qubit;
    n->bit = bit;
    return n;
}

AssertPtr Assertion::relation(RelOp op, ArithPtr lhs, ArithPtr rhs) {
    auto n = node(Kind::kRel);
    n->rel = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

AssertPtr Assertion::negation(AssertPtr a) {
    auto n = node(Kind::kNot);
    n->left = std::move(a);
    return n;
}

AssertPtr Assertion::conjunction(AssertPtr a, AssertPtr b) {
    auto n = node(Kind::kAnd);
    n->left = std::move(a);
    n->right = std::move(b);
    return n;
}

AssertPtr Assertion::disjunction(AssertPtr a, AssertPtr b) {
    return negation(conjunction(negation(std::move(a)), negation(std::move(b))));
}

AssertPtr Assertion::implication(AssertPtr a, AssertPtr b) {
    return negation(conjunction(std::move(a), negation(std::move(b))));
}

AssertPtr Assertion::forall(std::string var, AssertPtr body) {
    auto n = node(Kind::kForall);
    n->var = std::move(var);
    n->left = std::move(body);
    return n;
}

AssertPtr Assertion::box_unitary(GatePtr gate, std::vector<int> qubits, AssertPtr body) {
    auto n = node(Kind::kBoxUnitary);
    n->gate = std::move(gate);
    n->qubits = std::move(qubits);
    n->left = std::move(body);
    return n;
}

AssertPtr Assertion::box_proj(int qubit, int bit, AssertPtr body) {
    auto n = node(Kind::kBoxProj);
    n->qubit = qubit;
    n->bit = bit;
    n->left = std::move(body);
    return n;
}

AssertPtr Assertion::big_and(std::vector<AssertPtr> family, int bound) {
    if (bound < 0 || family.size() != static_cast<std::size_t>(bound) + 1)
        throw TransformError("bounded conjunction needs bound + 1 members");
    auto n = node(Kind::kBigAnd);
    n->family = std::move(family);
    n->bound = bound;
    return n;
}

AssertPtr conjoin_all(const std::vector<AssertPtr>& parts) {
    if (parts.empty())
        return Assertion::truth();
    AssertPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        acc = Assertion::conjunction(acc, parts[i]);
    return acc;
}

namespace {

bool arith_is_program_level(const ArithPtr& e) {
    switch (e->kind) {
    case Arith::Kind::kConst:
    case Arith::Kind::kProgVar:
        return true;
    case Arith::Kind::kLogVar:
        return false;
    case Arith::Kind::kBinary:
        return arith_is_program_level(e->lhs) && arith_is_program_level(e->rhs);
    }
    return false;
}

} // namespace

bool is_guard(const AssertPtr& a) {
    switch (a->kind) {
    case Assertion::Kind::kTrue:
    case Assertion::Kind::kFalse:
        return true;
    case Assertion::Kind::kRel:
        return arith_is_program_level(a->lhs) && arith_is_program_level(a->rhs);
    case Assertion::Kind::kNot:
        return is_guard(a->left);
    case Assertion::Kind::kAnd:
        return is_guard(a->left) && is_guard(a->right);
    default:
        return false;
    }
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Command> cmd(Command::Kind kind) {
    auto n = std::make_shared<Command>();
    n->kind = kind;
    return n;
}

} // namespace

CmdPtr Command::skip() {
    static const CmdPtr s = cmd(Kind::kSkip);
    return s;
}

CmdPtr Command::assign(std::string var, ArithPtr expr) {
    auto n = cmd(Kind::kAssign);
    n->var = std::move(var);
    n->expr = std::move(expr);
    return n;
}

CmdPtr Command::rand_assign(std::string var, std::vector<RandBranch> branches) {
    auto n = cmd(Kind::kRandAssign);
    n->var = std::move(var);
    n->branches = std::move(branches);
    return n;
}

CmdPtr Command::seq(CmdPtr first, CmdPtr second) {
    auto n = cmd(Kind::kSeq);
    n->first = std::move(first);
    n->second = std::move(second);
    return n;
}

CmdPtr Command::if_then_else(AssertPtr guard, CmdPtr then_branch, CmdPtr else_branch) {
    auto n = cmd(Kind::kIf);
    n->guard = std::move(guard);
    n->first = std::move(then_branch);
    n->second = std::move(else_branch);
    return n;
}

CmdPtr Command::while_loop(AssertPtr guard, CmdPtr body) {
    auto n = cmd(Kind::kWhile);
    n->guard = std::move(guard);
    n->first = std::move(body);
    return n;
}

CmdPtr Command::unitary(GatePtr gate, std::vector<int> qubits) {
    auto n = cmd(Kind::kUnitary);
    n->gate = std::move(gate);
    n->qubits = std::move(qubits);
    return n;
}

CmdPtr Command::measure(std::string var, int qubit) {
    auto n = cmd(Kind::kMeasure);
    n->var = std::move(var);
    n->qubit = qubit;
    return n;
}

CmdPtr repeat(const CmdPtr& c, int n) {
    if (n <= 0)
        return Command::skip();
    CmdPtr acc = c;
    for (int i = 1; i < n; ++i)
        acc = Command::seq(c, acc);
    return acc;
}

bool is_loop_free(const CmdPtr& c) {
    switch (c->kind) {
    case Command::Kind::kWhile:
        return false;
    case Command::Kind::kSeq:
    case Command::Kind::kIf:
        return is_loop_free(c->first) && is_loop_free(c->second);
    default:
        return true;
    }
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<RealExpr> real(RealExpr::Kind kind) {
    auto n = std::make_shared<RealExpr>();
    n->kind = kind;
    return n;
}

std::shared_ptr<Formula> formula(Formula::Kind kind) {
    auto n = std::make_shared<Formula>();
    n->kind = kind;
    return n;
}

} // namespace

RealPtr RealExpr::constant(double v) {
    auto n = real(Kind::kConst);
    n->value = v;
    return n;
}

RealPtr RealExpr::variable(std::string name) {
    auto n = real(Kind::kVar);
    n->name = std::move(name);
    return n;
}

RealPtr RealExpr::prob(AssertPtr a) {
    auto n = real(Kind::kProb);
    n->assertion = std::move(a);
    return n;
}

RealPtr RealExpr::binary(ArithOp op, RealPtr lhs, RealPtr rhs) {
    auto n = real(Kind::kBinary);
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

RealPtr RealExpr::cq_cond(AssertPtr a, ProjectorPtr q) {
    auto n = real(Kind::kCqCond);
    n->assertion = std::move(a);
    n->projector = std::move(q);
    return n;
}

RealPtr RealExpr::bounded_sum(std::vector<RealPtr> terms, int bound) {
    if (bound < 0 || terms.size() != static_cast<std::size_t>(bound) + 1)
        throw TransformError("bounded sum needs bound + 1 terms");
    auto n = real(Kind::kSum);
    n->terms = std::move(terms);
    n->bound = bound;
    return n;
}

FormulaPtr Formula::relation(RelOp op, RealPtr lhs, RealPtr rhs) {
    auto n = formula(Kind::kRel);
    n->rel = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

FormulaPtr Formula::negation(FormulaPtr f) {
    auto n = formula(Kind::kNot);
    n->left = std::move(f);
    return n;
}

FormulaPtr Formula::conjunction(FormulaPtr a, FormulaPtr b) {
    auto n = formula(Kind::kAnd);
    n->left = std::move(a);
    n->right = std::move(b);
    return n;
}

FormulaPtr Formula::disjunction(FormulaPtr a, FormulaPtr b) {
    return negation(conjunction(negation(std::move(a)), negation(std::move(b))));
}

// ---------------------------------------------------------------------------
// Structural equality. Trees produced by the transformers share subtrees
// heavily, so pairs already proven equal are remembered.

namespace {

class Comparator {
  public:
    bool arith(const ArithPtr& a, const ArithPtr& b) {
        if (a == b)
            return true;
        if (!a || !b || a->kind != b->kind)
            return false;
        switch (a->kind) {
        case Arith::Kind::kConst:
            return a->value == b->value;
        case Arith::Kind::kProgVar:
        case Arith::Kind::kLogVar:
            return a->name == b->name;
        case Arith::Kind::kBinary:
            return a->op == b->op && arith(a->lhs, b->lhs) && arith(a->rhs, b->rhs);
        }
        return false;
    }

    bool assertion(const AssertPtr& a, const AssertPtr& b) {
        if (a == b)
            return true;
        if (!a || !b || a->kind != b->kind)
            return false;
        const auto key = std::make_pair(static_cast<const void*>(a.get()), static_cast<const void*>(b.get()));
        if (seen_.count(key))
            return true;
        bool same = false;
        switch (a->kind) {
        case Assertion::Kind::kTrue:
        case Assertion::Kind::kFalse:
            same = true;
            break;
        case Assertion::Kind::kProj:
            same = a->qubit == b->qubit && a->bit == b->bit;
            break;
        case Assertion::Kind::kRel:
            same = a->rel == b->rel && arith(a->lhs, b->lhs) && arith(a->rhs, b->rhs);
            break;
        case Assertion::Kind::kNot:
            same = assertion(a->left, b->left);
            break;
        case Assertion::Kind::kAnd:
            same = assertion(a->left, b->left) && assertion(a->right, b->right);
            break;
        case Assertion::Kind::kForall:
            same = a->var == b->var && assertion(a->left, b->left);
            break;
        case Assertion::Kind::kBoxUnitary:
            same = equal(a->gate, b->gate) && a->qubits == b->qubits && assertion(a->left, b->left);
            break;
        case Assertion::Kind::kBoxProj:
            same = a->qubit == b->qubit && a->bit == b->bit && assertion(a->left, b->left);
            break;
        case Assertion::Kind::kBigAnd:
            same = a->bound == b->bound && a->family.size() == b->family.size();
            for (std::size_t i = 0; same && i < a->family.size(); ++i)
                same = assertion(a->family[i], b->family[i]);
            break;
        }
        if (same)
            seen_.insert(key);
        return same;
    }

    bool real(const RealPtr& a, const RealPtr& b) {
        if (a == b)
            return true;
        if (!a || !b || a->kind != b->kind)
            return false;
        switch (a->kind) {
        case RealExpr::Kind::kConst:
            return a->value == b->value;
        case RealExpr::Kind::kVar:
            return a->name == b->name;
        case RealExpr::Kind::kProb:
            return assertion(a->assertion, b->assertion);
        case RealExpr::Kind::kBinary:
            return a->op == b->op && real(a->lhs, b->lhs) && real(a->rhs, b->rhs);
        case RealExpr::Kind::kCqCond:
            return equal(a->projector, b->projector) && assertion(a->assertion, b->assertion);
        case RealExpr::Kind::kSum:
            if (a->bound != b->bound || a->terms.size() != b->terms.size())
                return false;
            for (std::size_t i = 0; i < a->terms.size(); ++i)
                if (!real(a->terms[i], b->terms[i]))
                    return false;
            return true;
        }
        return false;
    }

    bool formula(const FormulaPtr& a, const FormulaPtr& b) {
        if (a == b)
            return true;
        if (!a || !b || a->kind != b->kind)
            return false;
        switch (a->kind) {
        case Formula::Kind::kRel:
            return a->rel == b->rel && real(a->lhs, b->lhs) && real(a->rhs, b->rhs);
        case Formula::Kind::kNot:
            return formula(a->left, b->left);
        case Formula::Kind::kAnd:
            return formula(a->left, b->left) && formula(a->right, b->right);
        }
        return false;
    }

    bool command(const CmdPtr& a, const CmdPtr& b) {
        if (a == b)
            return true;
        if (!a || !b || a->kind != b->kind)
            return false;
        switch (a->kind) {
        case Command::Kind::kSkip:
            return true;
        case Command::Kind::kAssign:
            return a->var == b->var && arith(a->expr, b->expr);
        case Command::Kind::kRandAssign:
            if (a->var != b->var || a->branches.size() != b->branches.size())
                return false;
            for (std::size_t i = 0; i < a->branches.size(); ++i)
                if (a->branches[i].prob != b->branches[i].prob || a->branches[i].value != b->branches[i].value)
                    return false;
            return true;
        case Command::Kind::kSeq:
            return command(a->first, b->first) && command(a->second, b->second);
        case Command::Kind::kIf:
            return assertion(a->guard, b->guard) && command(a->first, b->first) &&
                   command(a->second, b->second);
        case Command::Kind::kWhile:
            return assertion(a->guard, b->guard) && command(a->first, b->first);
        case Command::Kind::kUnitary:
            return equal(a->gate, b->gate) && a->qubits == b->qubits;
        case Command::Kind::kMeasure:
            return a->var == b->var && a->qubit == b->qubit;
        }
        return false;
    }

  private:
    std::set<std::pair<const void*, const void*>> seen_;
};

} // namespace

bool equal(const ArithPtr& a, const ArithPtr& b) { return Comparator{}.arith(a, b); }

bool equal(const GatePtr& a, const GatePtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return a->name == b->name && a->arity == b->arity && a->matrix.rows() == b->matrix.rows() &&
           a->matrix == b->matrix;
}

bool equal(const ProjectorPtr& a, const ProjectorPtr& b) {
    if (a == b)
        return true;
    if (!a || !b || a->kind != b->kind || a->num_qubits != b->num_qubits)
        return false;
    if (a->kind == Projector::Kind::kMask)
        return a->patterns == b->patterns;
    return a->dense.rows() == b->dense.rows() && a->dense == b->dense;
}

bool equal(const AssertPtr& a, const AssertPtr& b) { return Comparator{}.assertion(a, b); }
bool equal(const CmdPtr& a, const CmdPtr& b) { return Comparator{}.command(a, b); }
bool equal(const RealPtr& a, const RealPtr& b) { return Comparator{}.real(a, b); }
bool equal(const FormulaPtr& a, const FormulaPtr& b) { return Comparator{}.formula(a, b); }

} // namespace qhl
