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

#include "qhl/syntax/printer.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "qhl/error.hpp"

namespace qhl {

std::string format_double(double v) {
    char buf[40];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v)
            break;
    }
    return buf;
}

namespace {

int arith_prec(ArithOp op) { return op == ArithOp::kMul ? 2 : 1; }

bool is_or_pattern(const Assertion& a) {
    return a.kind == Assertion::Kind::kNot && a.left->kind == Assertion::Kind::kAnd &&
           a.left->left->kind == Assertion::Kind::kNot && a.left->right->kind == Assertion::Kind::kNot;
}

bool is_implies_pattern(const Assertion& a) {
    return a.kind == Assertion::Kind::kNot && a.left->kind == Assertion::Kind::kAnd &&
           a.left->left->kind != Assertion::Kind::kNot && a.left->right->kind == Assertion::Kind::kNot;
}

int assert_prec(const Assertion& a) {
    if (is_or_pattern(a))
        return 2;
    if (is_implies_pattern(a))
        return 1;
    if (a.kind == Assertion::Kind::kAnd)
        return 3;
    return 4;
}

bool is_formula_or(const Formula& f) {
    return f.kind == Formula::Kind::kNot && f.left->kind == Formula::Kind::kAnd &&
           f.left->left->kind == Formula::Kind::kNot && f.left->right->kind == Formula::Kind::kNot;
}

int formula_prec(const Formula& f) {
    if (is_formula_or(f))
        return 2;
    if (f.kind == Formula::Kind::kAnd)
        return 3;
    return 4;
}

class Printer {
  public:
    explicit Printer(std::size_t max_chars) : max_(max_chars) {}

    std::string take() { return std::move(out_); }

    void put(const std::string& s) {
        out_ += s;
        if (max_ != 0 && out_.size() > max_)
            throw TransformError("printed form exceeds " + std::to_string(max_) +
                                 " characters; lower --depth-k/--depth-n");
    }

    void arith(const ArithPtr& e, int min_prec) {
        switch (e->kind) {
        case Arith::Kind::kConst:
            put(e->value < 0 ? "(" + std::to_string(e->value) + ")" : std::to_string(e->value));
            return;
        case Arith::Kind::kProgVar:
        case Arith::Kind::kLogVar:
            put(e->name);
            return;
        case Arith::Kind::kBinary: {
            const int p = arith_prec(e->op);
            if (p < min_prec)
                put("(");
            arith(e->lhs, p);
            put(std::string(" ") + to_symbol(e->op) + " ");
            arith(e->rhs, p + 1);
            if (p < min_prec)
                put(")");
            return;
        }
        }
    }

    void qubits(const std::vector<int>& qs) {
        put("[");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if (i)
                put(", ");
            put("q" + std::to_string(qs[i]));
        }
        put("]");
    }

    void unary_operand(const AssertPtr& a) {
        if (a->kind == Assertion::Kind::kRel || assert_prec(*a) < 4) {
            put("(");
            assertion(a, 1);
            put(")");
        } else {
            assertion(a, 4);
        }
    }

    void assertion(const AssertPtr& a, int min_prec) {
        const int p = assert_prec(*a);
        if (p < min_prec)
            put("(");
        if (is_or_pattern(*a)) {
            assertion(a->left->left->left, 2);
            put(" || ");
            assertion(a->left->right->left, 3);
        } else if (is_implies_pattern(*a)) {
            assertion(a->left->left, 2);
            put(" -> ");
            assertion(a->left->right->left, 1);
        } else {
            switch (a->kind) {
            case Assertion::Kind::kTrue:
                put("true");
                break;
            case Assertion::Kind::kFalse:
                put("false");
                break;
            case Assertion::Kind::kProj:
                put((a->bit ? "P1(" : "P0(") + std::to_string(a->qubit) + ")");
                break;
            case Assertion::Kind::kRel:
                arith(a->lhs, 1);
                put(std::string(" ") + to_symbol(a->rel) + " ");
                arith(a->rhs, 1);
                break;
            case Assertion::Kind::kNot:
                put("!");
                unary_operand(a->left);
                break;
            case Assertion::Kind::kAnd:
                assertion(a->left, 3);
                put(" && ");
                assertion(a->right, 4);
                break;
            case Assertion::Kind::kForall:
                put("forall " + a->var + ". ");
                unary_operand(a->left);
                break;
            case Assertion::Kind::kBoxUnitary:
                put("[" + a->gate->name);
                qubits(a->qubits);
                put("] ");
                unary_operand(a->left);
                break;
            case Assertion::Kind::kBoxProj:
                put("[Proj " + std::to_string(a->qubit) + "," + std::to_string(a->bit) + "] ");
                unary_operand(a->left);
                break;
            case Assertion::Kind::kBigAnd:
                put("AND[" + std::to_string(a->bound) + "]{");
                for (std::size_t i = 0; i < a->family.size(); ++i) {
                    if (i)
                        put(", ");
                    assertion(a->family[i], 1);
                }
                put("}");
                break;
            }
        }
        if (p < min_prec)
            put(")");
    }

    void branch(const CmdPtr& c) {
        if (c->kind == Command::Kind::kSeq) {
            put("(");
            command(c);
            put(")");
        } else {
            command(c);
        }
    }

    void command(const CmdPtr& c) {
        switch (c->kind) {
        case Command::Kind::kSkip:
            put("skip");
            return;
        case Command::Kind::kAssign:
            put(c->var + " <- ");
            arith(c->expr, 1);
            return;
        case Command::Kind::kRandAssign:
            put(c->var + " <-$ {");
            for (std::size_t i = 0; i < c->branches.size(); ++i) {
                if (i)
                    put(", ");
                put(format_double(c->branches[i].prob) + ": " + std::to_string(c->branches[i].value));
            }
            put("}");
            return;
        case Command::Kind::kSeq:
            branch(c->first);
            put("; ");
            command(c->second);
            return;
        case Command::Kind::kIf:
            put("if ");
            assertion(c->guard, 1);
            put(" then ");
            branch(c->first);
            put(" else ");
            branch(c->second);
            return;
        case Command::Kind::kWhile:
            put("while ");
            assertion(c->guard, 1);
            put(" do ");
            branch(c->first);
            return;
        case Command::Kind::kUnitary:
            put(c->gate->name);
            qubits(c->qubits);
            return;
        case Command::Kind::kMeasure:
            put(c->var + " <<= q" + std::to_string(c->qubit));
            return;
        }
    }

    void real(const RealPtr& r, int min_prec) {
        switch (r->kind) {
        case RealExpr::Kind::kConst: {
            const std::string s = format_double(r->value);
            put(s[0] == '-' ? "(" + s + ")" : s);
            return;
        }
        case RealExpr::Kind::kVar:
            put("$" + r->name);
            return;
        case RealExpr::Kind::kProb:
            put("P[ ");
            assertion(r->assertion, 1);
            put(" ]");
            return;
        case RealExpr::Kind::kCqCond:
            put("(");
            assertion(r->assertion, 1);
            put(" => " + pretty(r->projector) + ")");
            return;
        case RealExpr::Kind::kSum:
            put("SUM[" + std::to_string(r->bound) + "]{");
            for (std::size_t i = 0; i < r->terms.size(); ++i) {
                if (i)
                    put(", ");
                real(r->terms[i], 1);
            }
            put("}");
            return;
        case RealExpr::Kind::kBinary: {
            const int p = arith_prec(r->op);
            if (p < min_prec)
                put("(");
            real(r->lhs, p);
            put(std::string(" ") + to_symbol(r->op) + " ");
            real(r->rhs, p + 1);
            if (p < min_prec)
                put(")");
            return;
        }
        }
    }

    void formula(const FormulaPtr& f, int min_prec) {
        const int p = formula_prec(*f);
        if (p < min_prec)
            put("(");
        if (is_formula_or(*f)) {
            formula(f->left->left->left, 2);
            put(" || ");
            formula(f->left->right->left, 3);
        } else {
            switch (f->kind) {
            case Formula::Kind::kRel:
                real(f->lhs, 1);
                put(std::string(" ") + to_symbol(f->rel) + " ");
                real(f->rhs, 1);
                break;
            case Formula::Kind::kNot:
                put("!");
                if (f->left->kind == Formula::Kind::kRel || formula_prec(*f->left) < 4) {
                    put("(");
                    formula(f->left, 1);
                    put(")");
                } else {
                    formula(f->left, 4);
                }
                break;
            case Formula::Kind::kAnd:
                formula(f->left, 3);
                put(" && ");
                formula(f->right, 4);
                break;
            }
        }
        if (p < min_prec)
            put(")");
    }

  private:
    std::string out_;
    std::size_t max_;
};

std::string complex_text(const Complex& z) {
    std::string s = format_double(z.real());
    if (z.imag() != 0.0 || std::signbit(z.imag())) {
        const std::string im = format_double(z.imag());
        s += im[0] == '-' ? im + "i" : "+" + im + "i";
    }
    return s;
}

} // namespace

std::string pretty(const ProjectorPtr& q) {
    if (!q->name.empty())
        return q->name;
    std::string s;
    if (q->kind == Projector::Kind::kMask) {
        s = "mask{";
        for (std::size_t i = 0; i < q->patterns.size(); ++i)
            s += (i ? ", " : "") + q->patterns[i];
        return s + "}";
    }
    s = "matrix{";
    for (Eigen::Index r = 0; r < q->dense.rows(); ++r)
        for (Eigen::Index c = 0; c < q->dense.cols(); ++c)
            s += (r || c ? ", " : "") + complex_text(q->dense(r, c));
    return s + "}";
}

std::string pretty(const ArithPtr& e, std::size_t max_chars) {
    Printer p(max_chars);
    p.arith(e, 1);
    return p.take();
}

std::string pretty(const AssertPtr& a, std::size_t max_chars) {
    Printer p(max_chars);
    p.assertion(a, 1);
    return p.take();
}

std::string pretty(const CmdPtr& c, std::size_t max_chars) {
    Printer p(max_chars);
    p.command(c);
    return p.take();
}

std::string pretty(const RealPtr& r, std::size_t max_chars) {
    Printer p(max_chars);
    p.real(r, 1);
    return p.take();
}

std::string pretty(const FormulaPtr& f, std::size_t max_chars) {
    Printer p(max_chars);
    p.formula(f, 1);
    return p.take();
}

} // namespace qhl
