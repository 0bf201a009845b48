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

#include "qhl/syntax/parser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "qhl/syntax/lexer.hpp"

namespace qhl {

bool Declarations::is_var(const std::string& name) const {
    return std::find(vars.begin(), vars.end(), name) != vars.end();
}

GatePtr Declarations::gate(const std::string& name) const {
    if (auto g = builtin_gate(name))
        return g;
    auto it = gates.find(name);
    return it == gates.end() ? nullptr : it->second;
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& items, const std::string& name) {
    for (const auto& item : items)
        if (item.name == name)
            return &item;
    return nullptr;
}

} // namespace

const TripleDecl* SpecFile::find_triple(const std::string& name) const { return find_named(triples, name); }
const ProofDecl* SpecFile::find_proof(const std::string& name) const { return find_named(proofs, name); }
const StateDecl* SpecFile::find_state(const std::string& name) const { return find_named(states, name); }
const MixtureDecl* SpecFile::find_mixture(const std::string& name) const { return find_named(mixtures, name); }

namespace {

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {
        "skip", "if",   "then", "else", "while", "do",   "true",   "false",  "forall", "AND",
        "P",    "P0",   "P1",   "SUM",  "Proj",  "mask", "matrix", "qubits", "vars",   "logvars",
        "gate", "oracle", "projector", "state", "mixture", "interp", "assertion", "term", "formula",
        "program", "triple", "proof", "det", "prob", "for", "ket", "amps", "table", "dim"};
    return words;
}

bool is_rel_token(Tok t) {
    return t == Tok::kEq || t == Tok::kNe || t == Tok::kLt || t == Tok::kLe || t == Tok::kGt || t == Tok::kGe;
}

RelOp rel_of(Tok t) {
    switch (t) {
    case Tok::kEq:
        return RelOp::kEq;
    case Tok::kNe:
        return RelOp::kNe;
    case Tok::kLt:
        return RelOp::kLt;
    case Tok::kLe:
        return RelOp::kLe;
    case Tok::kGt:
        return RelOp::kGt;
    default:
        return RelOp::kGe;
    }
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class Parser {
  public:
    Parser(std::string_view text, Declarations decls) : toks_(tokenize(text)), decls_(std::move(decls)) {}

    Declarations& decls() { return decls_; }

    bool at_end() const { return peek().kind == Tok::kEnd; }

    void expect_end() {
        if (!at_end())
            fail("unexpected " + show(peek()) + " after the end of the expression");
    }

    // -- file ---------------------------------------------------------------

    SpecFile file() {
        SpecFile spec;
        while (!at_end()) {
            const Token& kw = peek();
            if (kw.kind != Tok::kIdent)
                fail("expected a declaration or section keyword, found " + show(kw));
            const std::string& k = kw.text;
            if (k == "qubits")
                decl_qubits();
            else if (k == "vars")
                decl_vars();
            else if (k == "logvars")
                decl_logvars();
            else if (k == "gate")
                decl_gate();
            else if (k == "oracle")
                decl_oracle();
            else if (k == "projector")
                decl_projector();
            else if (k == "state")
                spec.states.push_back(decl_state(spec));
            else if (k == "mixture")
                spec.mixtures.push_back(decl_mixture(spec));
            else if (k == "interp")
                spec.interps.push_back(decl_interp(spec));
            else if (k == "assertion")
                decl_named_assertion();
            else if (k == "term")
                decl_named_term();
            else if (k == "formula")
                decl_named_formula();
            else if (k == "program")
                spec.program_order.push_back(section_program());
            else if (k == "triple")
                spec.triples.push_back(section_triple(spec));
            else if (k == "proof")
                spec.proofs.push_back(section_proof(spec));
            else
                fail("unknown keyword '" + k + "'");
        }
        spec.decls = decls_;
        return spec;
    }

    // -- commands -----------------------------------------------------------

    CmdPtr command() {
        CmdPtr first = simple_command();
        if (accept(Tok::kSemi))
            return Command::seq(first, command());
        return first;
    }

    // -- deterministic assertions ---------------------------------------------

    AssertPtr assertion() {
        AssertPtr lhs = disjunction();
        if (accept(Tok::kArrow))
            return Assertion::implication(lhs, assertion());
        return lhs;
    }

    // -- real expressions and formulas ----------------------------------------

    RealPtr real() {
        RealPtr acc = real_term();
        while (at(Tok::kPlus) || at(Tok::kMinus)) {
            const ArithOp op = next().kind == Tok::kPlus ? ArithOp::kAdd : ArithOp::kSub;
            acc = RealExpr::binary(op, acc, real_term());
        }
        return acc;
    }

    FormulaPtr formula() {
        FormulaPtr acc = formula_and();
        while (accept(Tok::kOrOr))
            acc = Formula::disjunction(acc, formula_and());
        return acc;
    }

  private:
    // -- token helpers ------------------------------------------------------

    const Token& peek(std::size_t k = 0) const {
        const std::size_t i = std::min(p_ + k, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() { return toks_[std::min(p_++, toks_.size() - 1)]; }
    bool at(Tok t) const { return peek().kind == t; }
    bool at_word(const char* w, std::size_t k = 0) const {
        return peek(k).kind == Tok::kIdent && peek(k).text == w;
    }
    bool accept(Tok t) {
        if (!at(t))
            return false;
        ++p_;
        return true;
    }
    bool accept_word(const char* w) {
        if (!at_word(w))
            return false;
        ++p_;
        return true;
    }

    static std::string show(const Token& t) {
        if (t.kind == Tok::kEnd)
            return "end of input";
        return "'" + t.text + "'";
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
    [[noreturn]] static void fail_at(const Token& t, const std::string& msg) { throw ParseError(msg, t.pos); }

    const Token& expect(Tok t) {
        if (!at(t))
            fail(std::string("expected ") + describe(t) + ", found " + show(peek()));
        return next();
    }
    void expect_word(const char* w) {
        if (!accept_word(w))
            fail(std::string("expected '") + w + "', found " + show(peek()));
    }
    std::string ident() { return expect(Tok::kIdent).text; }

    std::string fresh_name(const char* what) {
        const Token& t = expect(Tok::kIdent);
        if (reserved_words().count(t.text))
            fail_at(t, std::string("'") + t.text + "' is reserved and cannot name a " + what);
        return t.text;
    }

    std::int64_t integer() {
        const bool neg = accept(Tok::kMinus);
        const Token& t = expect(Tok::kInt);
        std::int64_t v = 0;
        for (char c : t.text) {
            if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, c - '0', &v))
                fail_at(t, "integer literal " + t.text + " does not fit in 64 bits");
        }
        return neg ? -v : v;
    }

    double number() {
        const bool neg = accept(Tok::kMinus);
        if (!at(Tok::kInt) && !at(Tok::kReal))
            fail("expected a number, found " + show(peek()));
        const double v = std::stod(next().text);
        return neg ? -v : v;
    }

    int small_int(const char* what) {
        const Token& t = peek();
        const std::int64_t v = integer();
        if (v < 0 || v > 1'000'000)
            fail_at(t, std::string(what) + " out of range");
        return static_cast<int>(v);
    }

    Complex complex_literal() {
        double sign = accept(Tok::kMinus) ? -1.0 : 1.0;
        if (at(Tok::kImag))
            return {0.0, sign * std::stod(next().text)};
        if (at_word("i")) {
            next();
            return {0.0, sign};
        }
        if (!at(Tok::kInt) && !at(Tok::kReal))
            fail("expected a complex number, found " + show(peek()));
        const double re = sign * std::stod(next().text);
        if ((at(Tok::kPlus) || at(Tok::kMinus)) && (peek(1).kind == Tok::kImag || (peek(1).kind == Tok::kIdent && peek(1).text == "i"))) {
            const double s = next().kind == Tok::kPlus ? 1.0 : -1.0;
            if (at(Tok::kImag))
                return {re, s * std::stod(next().text)};
            next();
            return {re, s};
        }
        return {re, 0.0};
    }

    Matrix square_matrix(const std::vector<Complex>& entries, const Token& where) {
        const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
        if (n * n != static_cast<Eigen::Index>(entries.size()))
            fail_at(where, "matrix needs a square number of entries, got " + std::to_string(entries.size()));
        Matrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                m(r, c) = entries[static_cast<std::size_t>(r * n + c)];
        return m;
    }

    std::vector<Complex> complex_list() {
        std::vector<Complex> out;
        out.push_back(complex_literal());
        while (accept(Tok::kComma))
            out.push_back(complex_literal());
        return out;
    }

    // Patterns are runs of adjacent INT and '*' tokens, e.g. `0*1`.
    std::string mask_pattern() {
        const Token& first = peek();
        if (first.kind != Tok::kInt && first.kind != Tok::kStar)
            fail("expected a mask pattern over 0, 1 and *, found " + show(first));
        std::string pat = next().text;
        while ((at(Tok::kInt) || at(Tok::kStar)) && peek().offset == toks_[p_ - 1].end)
            pat += next().text;
        return pat;
    }

    int qubit_ref() {
        const Token& t = peek();
        int q = 0;
        if (t.kind == Tok::kInt) {
            q = small_int("qubit index");
        } else if (t.kind == Tok::kIdent && t.text == "q") {
            next();
            q = small_int("qubit index");
        } else if (t.kind == Tok::kIdent && t.text.size() > 1 && t.text[0] == 'q' &&
                   std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            next();
            q = std::stoi(t.text.substr(1));
        } else {
            fail("expected a qubit such as q1, found " + show(t));
        }
        if (q < 1 || (decls_.num_qubits > 0 && q > decls_.num_qubits))
            fail_at(t, "qubit " + std::to_string(q) + " out of range 1.." + std::to_string(decls_.num_qubits));
        return q;
    }

    std::vector<int> qubit_list(const GatePtr& g, const Token& where) {
        expect(Tok::kLBracket);
        std::vector<int> qs;
        qs.push_back(qubit_ref());
        while (accept(Tok::kComma))
            qs.push_back(qubit_ref());
        expect(Tok::kRBracket);
        if (static_cast<int>(qs.size()) != g->arity)
            fail_at(where, "gate " + g->name + " expects " + std::to_string(g->arity) + " qubit(s), got " +
                               std::to_string(qs.size()));
        std::set<int> distinct(qs.begin(), qs.end());
        if (distinct.size() != qs.size())
            fail_at(where, "gate " + g->name + " applied to a repeated qubit");
        return qs;
    }

    GatePtr gate_name() {
        const Token& t = expect(Tok::kIdent);
        GatePtr g = decls_.gate(t.text);
        if (!g)
            fail_at(t, "unknown gate '" + t.text + "'");
        return g;
    }

    // -- declarations --------------------------------------------------------

    void decl_qubits() {
        expect_word("qubits");
        const Token& t = peek();
        const int m = small_int("qubit count");
        if (m < 1 || m > 24)
            fail_at(t, "qubit count must be between 1 and 24");
        decls_.num_qubits = m;
    }

    void check_new_name(const Token& t) {
        if (decls_.is_var(t.text) || decls_.logvars.count(t.text))
            fail_at(t, "'" + t.text + "' is already declared");
    }

    void decl_vars() {
        expect_word("vars");
        do {
            const Token& t = peek();
            const std::string name = fresh_name("variable");
            check_new_name(t);
            decls_.vars.push_back(name);
        } while (accept(Tok::kComma));
    }

    void decl_logvars() {
        expect_word("logvars");
        do {
            const Token& t = peek();
            const std::string name = fresh_name("logical variable");
            check_new_name(t);
            expect(Tok::kColon);
            IntRange r;
            r.lo = integer();
            expect(Tok::kDot);
            expect(Tok::kDot);
            r.hi = integer();
            if (r.hi < r.lo)
                fail_at(t, "empty range for '" + name + "'");
            decls_.logvars[name] = r;
        } while (accept(Tok::kComma));
    }

    void check_new_gate(const Token& t) {
        if (decls_.gate(t.text))
            fail_at(t, "gate '" + t.text + "' is already defined");
    }

    void decl_gate() {
        expect_word("gate");
        const Token& t = peek();
        const std::string name = fresh_name("gate");
        check_new_gate(t);
        expect_word("dim");
        const Token& dt = peek();
        const int dim = small_int("dimension");
        expect_word("matrix");
        const Token& mt = peek();
        Matrix m = square_matrix(complex_list(), mt);
        if (m.rows() != dim)
            fail_at(dt, "gate '" + name + "' declared with dim " + std::to_string(dim) + " but has a " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.rows()) + " matrix");
        try {
            decls_.gates[name] = make_matrix_gate(name, std::move(m));
        } catch (const ParseError& e) {
            fail_at(t, e.bare_message());
        }
    }

    void decl_oracle() {
        expect_word("oracle");
        const Token& t = peek();
        const std::string name = fresh_name("oracle");
        check_new_gate(t);
        expect_word("table");
        std::map<std::string, int> rows;
        std::size_t width = 0;
        do {
            const Token& bt = expect(Tok::kInt);
            if (rows.empty())
                width = bt.text.size();
            if (bt.text.size() != width || bt.text.find_first_not_of("01") != std::string::npos)
                fail_at(bt, "oracle inputs must be bit strings of equal length");
            expect(Tok::kArrow);
            const Token& vt = peek();
            const std::int64_t v = integer();
            if (v != 0 && v != 1)
                fail_at(vt, "oracle outputs must be 0 or 1");
            if (!rows.emplace(bt.text, static_cast<int>(v)).second)
                fail_at(bt, "input " + bt.text + " listed twice");
        } while (accept(Tok::kComma));
        if (rows.size() != (std::size_t{1} << width))
            fail_at(t, "oracle '" + name + "' truth table is incomplete");
        std::vector<int> table;
        for (const auto& [bits, v] : rows)
            table.push_back(v); // std::map orders equal-length bit strings numerically
        try {
            decls_.gates[name] = make_oracle(name, std::move(table));
        } catch (const ParseError& e) {
            fail_at(t, e.bare_message());
        }
    }

    void decl_projector() {
        expect_word("projector");
        const Token& t = peek();
        const std::string name = fresh_name("projector");
        if (decls_.projectors.count(name))
            fail_at(t, "projector '" + name + "' is already defined");
        decls_.projectors[name] = projector_body(name, t);
    }

    ProjectorPtr projector_body(const std::string& name, const Token& where) {
        try {
            if (accept_word("mask")) {
                std::vector<std::string> pats;
                pats.push_back(mask_pattern());
                while (accept(Tok::kComma))
                    pats.push_back(mask_pattern());
                const int m = decls_.num_qubits > 0 ? decls_.num_qubits : static_cast<int>(pats.front().size());
                return Projector::mask(name, m, std::move(pats));
            }
            expect_word("matrix");
            const Token& mt = peek();
            auto q = Projector::from_matrix(name, square_matrix(complex_list(), mt));
            if (decls_.num_qubits > 0 && q->num_qubits != decls_.num_qubits)
                fail_at(mt, "projector must act on all " + std::to_string(decls_.num_qubits) + " qubits");
            return q;
        } catch (const ParseError& e) {
            if (e.pos().line > 0)
                throw;
            fail_at(where, e.bare_message());
        }
    }

    // Inline projector reference inside a cq-conditional.
    ProjectorPtr projector_ref() {
        const Token& t = peek();
        if (at_word("mask") && peek(1).kind == Tok::kLBrace) {
            next();
            expect(Tok::kLBrace);
            std::vector<std::string> pats;
            if (!at(Tok::kRBrace)) { // mask{} is the zero projector
                pats.push_back(mask_pattern());
                while (accept(Tok::kComma))
                    pats.push_back(mask_pattern());
            }
            expect(Tok::kRBrace);
            if (pats.empty() && decls_.num_qubits == 0)
                fail_at(t, "mask{} needs a qubits declaration");
            const int m = decls_.num_qubits > 0 ? decls_.num_qubits : static_cast<int>(pats.front().size());
            try {
                return Projector::mask("", m, std::move(pats));
            } catch (const ParseError& e) {
                fail_at(t, e.bare_message());
            }
        }
        if (at_word("matrix") && peek(1).kind == Tok::kLBrace) {
            next();
            expect(Tok::kLBrace);
            auto entries = complex_list();
            expect(Tok::kRBrace);
            try {
                return Projector::from_matrix("", square_matrix(entries, t));
            } catch (const ParseError& e) {
                if (e.pos().line > 0)
                    throw;
                fail_at(t, e.bare_message());
            }
        }
        if ((at_word("P0") || at_word("P1")) && peek(1).kind == Tok::kLParen) {
            const int bit = next().text == "P1" ? 1 : 0;
            expect(Tok::kLParen);
            const int j = qubit_ref();
            expect(Tok::kRParen);
            if (decls_.num_qubits == 0)
                fail_at(t, "P" + std::to_string(bit) + "(" + std::to_string(j) + ") as a projector needs a qubits declaration");
            std::string pat(static_cast<std::size_t>(decls_.num_qubits), '*');
            pat[static_cast<std::size_t>(j - 1)] = bit ? '1' : '0';
            return Projector::mask("", decls_.num_qubits, {pat});
        }
        const std::string name = ident();
        auto it = decls_.projectors.find(name);
        if (it == decls_.projectors.end())
            fail_at(t, "unknown projector '" + name + "'");
        return it->second;
    }

    std::map<std::string, std::int64_t> store_literal() {
        std::map<std::string, std::int64_t> store;
        expect(Tok::kLBrace);
        if (!at(Tok::kRBrace)) {
            do {
                const Token& t = peek();
                const std::string v = ident();
                if (!decls_.is_var(v))
                    fail_at(t, "unknown program variable '" + v + "'");
                expect(Tok::kEq);
                store[v] = integer();
            } while (accept(Tok::kComma));
        }
        expect(Tok::kRBrace);
        return store;
    }

    StateDecl decl_state(const SpecFile& spec) {
        expect_word("state");
        StateDecl s;
        s.pos = peek().pos;
        const Token& nt = peek();
        s.name = fresh_name("state");
        if (spec.find_state(s.name) || spec.find_mixture(s.name))
            fail_at(nt, "state '" + s.name + "' is already defined");
        if (decls_.num_qubits < 1)
            fail_at(nt, "declare 'qubits' before any state");
        if (at(Tok::kLBrace))
            s.store = store_literal();
        const std::size_t dim = std::size_t{1} << decls_.num_qubits;
        if (accept_word("ket")) {
            const Token& bt = expect(Tok::kInt);
            if (bt.text.size() != static_cast<std::size_t>(decls_.num_qubits) ||
                bt.text.find_first_not_of("01") != std::string::npos)
                fail_at(bt, "ket needs one bit per qubit (" + std::to_string(decls_.num_qubits) + ")");
            s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
            s.amplitudes(static_cast<Eigen::Index>(std::stoull(bt.text, nullptr, 2))) = 1.0;
        } else {
            expect_word("amps");
            const Token& at_tok = peek();
            auto entries = complex_list();
            if (entries.size() != dim)
                fail_at(at_tok, "state needs " + std::to_string(dim) + " amplitudes, got " +
                                    std::to_string(entries.size()));
            s.amplitudes = Eigen::Map<Eigen::VectorXcd>(entries.data(), static_cast<Eigen::Index>(dim));
            const double norm = s.amplitudes.norm();
            if (std::abs(norm - 1.0) > 1e-6)
                fail_at(at_tok, "amplitudes have norm " + format_real(norm) + ", expected 1");
            s.amplitudes /= norm;
        }
        return s;
    }

    MixtureDecl decl_mixture(const SpecFile& spec) {
        expect_word("mixture");
        MixtureDecl m;
        m.pos = peek().pos;
        const Token& nt = peek();
        m.name = fresh_name("mixture");
        if (spec.find_state(m.name) || spec.find_mixture(m.name))
            fail_at(nt, "state '" + m.name + "' is already defined");
        expect(Tok::kLBrace);
        double total = 0.0;
        do {
            const Token& wt = peek();
            const double w = number();
            if (w <= 0.0)
                fail_at(wt, "mixture weights must be positive");
            expect(Tok::kColon);
            const Token& st = peek();
            const std::string part = ident();
            if (!spec.find_state(part))
                fail_at(st, "unknown state '" + part + "'");
            m.parts.emplace_back(w, part);
            total += w;
        } while (accept(Tok::kComma));
        expect(Tok::kRBrace);
        if (total > 1.0 + 1e-9)
            fail_at(nt, "mixture weights sum to " + format_real(total) + " > 1");
        return m;
    }

    InterpDecl decl_interp(const SpecFile& spec) {
        expect_word("interp");
        InterpDecl in;
        in.pos = peek().pos;
        const Token& nt = peek();
        in.name = fresh_name("interpretation");
        if (find_named(spec.interps, in.name))
            fail_at(nt, "interpretation '" + in.name + "' is already defined");
        expect(Tok::kLBrace);
        if (!at(Tok::kRBrace)) {
            do {
                if (at(Tok::kRealVar)) {
                    const std::string v = next().text;
                    expect(Tok::kEq);
                    in.reals[v] = number();
                } else {
                    const Token& t = peek();
                    const std::string v = ident();
                    if (!decls_.logvars.count(v))
                        fail_at(t, "unknown logical variable '" + v + "'");
                    expect(Tok::kEq);
                    in.ints[v] = integer();
                }
            } while (accept(Tok::kComma));
        }
        expect(Tok::kRBrace);
        return in;
    }

    void decl_named_assertion() {
        expect_word("assertion");
        const Token& t = peek();
        const std::string name = fresh_name("assertion");
        if (decls_.assertions.count(name))
            fail_at(t, "assertion '" + name + "' is already defined");
        expect(Tok::kLBrace);
        AssertPtr a = assertion();
        expect(Tok::kRBrace);
        decls_.assertions[name] = a;
    }

    void decl_named_term() {
        expect_word("term");
        const Token& t = peek();
        const std::string name = fresh_name("term");
        if (decls_.terms.count(name))
            fail_at(t, "term '" + name + "' is already defined");
        expect(Tok::kLBrace);
        RealPtr r = real();
        expect(Tok::kRBrace);
        decls_.terms[name] = r;
    }

    void decl_named_formula() {
        expect_word("formula");
        const Token& t = peek();
        const std::string name = fresh_name("formula");
        if (decls_.formulas.count(name))
            fail_at(t, "formula '" + name + "' is already defined");
        expect(Tok::kLBrace);
        FormulaPtr f = formula();
        expect(Tok::kRBrace);
        decls_.formulas[name] = f;
    }

    // -- sections ------------------------------------------------------------

    std::string section_program() {
        expect_word("program");
        const Token& t = peek();
        const std::string name = fresh_name("program");
        if (decls_.programs.count(name))
            fail_at(t, "program '" + name + "' is already defined");
        expect(Tok::kLBrace);
        CmdPtr c = command();
        expect(Tok::kRBrace);
        decls_.programs[name] = c;
        return name;
    }

    // A program name when one is followed by '{', otherwise inline command text.
    CmdPtr program_or_command(std::string* name) {
        if (at(Tok::kIdent) && peek(1).kind == Tok::kLBrace && decls_.programs.count(peek().text)) {
            *name = next().text;
            return decls_.programs.at(*name);
        }
        if (at(Tok::kIdent) && peek(1).kind == Tok::kLBrace && peek().text != "skip")
            fail("unknown program '" + peek().text + "'");
        name->clear();
        return command();
    }

    enum class Sort { kAuto, kDet, kProb };

    Sort sort_keyword() {
        if (accept_word("det"))
            return Sort::kDet;
        if (accept_word("prob"))
            return Sort::kProb;
        return Sort::kAuto;
    }

    // Parses `{ cond }` of the requested sort. In auto mode a deterministic
    // reading is tried first.
    bool braced_condition(Sort sort, AssertPtr& d, FormulaPtr& p) {
        expect(Tok::kLBrace);
        if (sort == Sort::kDet) {
            d = assertion();
            expect(Tok::kRBrace);
            return false;
        }
        if (sort == Sort::kProb) {
            p = formula();
            expect(Tok::kRBrace);
            return true;
        }
        const std::size_t save = p_;
        try {
            d = assertion();
            expect(Tok::kRBrace);
            return false;
        } catch (const ParseError& det_error) {
            p_ = save;
            try {
                p = formula();
                expect(Tok::kRBrace);
                return true;
            } catch (const ParseError& prob_error) {
                const auto key = [](const ParseError& e) { return std::make_pair(e.pos().line, e.pos().column); };
                if (key(det_error) >= key(prob_error))
                    throw det_error;
                throw;
            }
        }
    }

    // { pre } program { post }
    CmdPtr triple_body(Sort sort, TriplePair& conds, std::string* prog_name) {
        conds.probabilistic = braced_condition(sort, conds.dpre, conds.ppre);
        CmdPtr c = program_or_command(prog_name);
        const Sort post_sort = conds.probabilistic ? Sort::kProb : Sort::kDet;
        braced_condition(post_sort, conds.dpost, conds.ppost);
        return c;
    }

    TripleDecl section_triple(const SpecFile& spec) {
        expect_word("triple");
        TripleDecl t;
        t.pos = peek().pos;
        const Token& nt = peek();
        t.name = fresh_name("triple");
        if (spec.find_triple(t.name))
            fail_at(nt, "triple '" + t.name + "' is already defined");
        const Sort sort = sort_keyword();
        t.command = triple_body(sort, t.conds, &t.program);
        return t;
    }

    ProofDecl section_proof(const SpecFile& spec) {
        expect_word("proof");
        ProofDecl pr;
        pr.pos = peek().pos;
        const Token& nt = peek();
        pr.name = fresh_name("proof");
        if (spec.find_proof(pr.name))
            fail_at(nt, "proof '" + pr.name + "' is already defined");
        const Sort sort = sort_keyword();
        if (accept_word("for")) {
            const Token& tt = peek();
            pr.triple = ident();
            if (!spec.find_triple(pr.triple))
                fail_at(tt, "unknown triple '" + pr.triple + "'");
        }
        expect(Tok::kLBrace);
        std::set<std::string> labels;
        while (!accept(Tok::kRBrace)) {
            ProofStep st;
            st.pos = peek().pos;
            const Token& lt = peek();
            st.label = ident();
            if (!labels.insert(st.label).second)
                fail_at(lt, "step label '" + st.label + "' is used twice");
            expect(Tok::kColon);
            st.rule = ident();
            if (accept(Tok::kLParen)) {
                do {
                    const Token& pt = peek();
                    std::string ref = ident();
                    if (!labels.count(ref) || ref == st.label)
                        fail_at(pt, "premise '" + ref + "' does not name an earlier step");
                    st.premises.push_back(std::move(ref));
                } while (accept(Tok::kComma));
                expect(Tok::kRParen);
            }
            std::string ignored;
            st.command = triple_body(sort, st.conds, &ignored);
            pr.steps.push_back(std::move(st));
        }
        if (pr.steps.empty())
            fail_at(nt, "proof '" + pr.name + "' has no steps");
        return pr;
    }

    // -- commands -----------------------------------------------------------

    AssertPtr guard() {
        const Token& t = peek();
        AssertPtr g = assertion();
        if (!is_guard(g))
            fail_at(t, "guards may only use program variables, integers and Boolean connectives");
        return g;
    }

    CmdPtr simple_command() {
        const Token& t = peek();
        if (accept(Tok::kLParen)) {
            CmdPtr c = command();
            expect(Tok::kRParen);
            return c;
        }
        if (accept(Tok::kAt)) {
            const Token& nt = peek();
            const std::string name = ident();
            auto it = decls_.programs.find(name);
            if (it == decls_.programs.end())
                fail_at(nt, "unknown program '" + name + "'");
            return it->second;
        }
        if (t.kind != Tok::kIdent)
            fail("expected a command, found " + show(t));
        if (accept_word("skip"))
            return Command::skip();
        if (accept_word("if")) {
            AssertPtr b = guard();
            expect_word("then");
            CmdPtr c1 = simple_command();
            expect_word("else");
            CmdPtr c2 = simple_command();
            return Command::if_then_else(b, c1, c2);
        }
        if (accept_word("while")) {
            AssertPtr b = guard();
            expect_word("do");
            return Command::while_loop(b, simple_command());
        }
        const Tok after = peek(1).kind;
        if (after == Tok::kAssign || after == Tok::kRandAssign || after == Tok::kMeasure) {
            const std::string var = next().text;
            if (!decls_.is_var(var))
                fail_at(t, "unknown program variable '" + var + "'");
            const Tok op = next().kind;
            if (op == Tok::kAssign)
                return Command::assign(var, arith());
            if (op == Tok::kMeasure)
                return Command::measure(var, qubit_ref());
            return Command::rand_assign(var, rand_branches(t));
        }
        if (after == Tok::kLBracket) {
            GatePtr g = gate_name();
            return Command::unitary(g, qubit_list(g, t));
        }
        fail("expected a command, found " + show(t));
    }

    std::vector<RandBranch> rand_branches(const Token& where) {
        expect(Tok::kLBrace);
        std::vector<RandBranch> out;
        double total = 0.0;
        do {
            const Token& pt = peek();
            RandBranch b;
            b.prob = number();
            if (!(b.prob > 0.0 && b.prob < 1.0))
                fail_at(pt, "branch probability " + format_real(b.prob) + " must lie strictly between 0 and 1");
            expect(Tok::kColon);
            b.value = integer();
            total += b.prob;
            out.push_back(b);
        } while (accept(Tok::kComma));
        expect(Tok::kRBrace);
        if (std::abs(total - 1.0) > 1e-9)
            fail_at(where, "probabilities sum to " + format_real(total) + " ≠ 1");
        return out;
    }

    // -- arithmetic ---------------------------------------------------------

    ArithPtr arith() {
        ArithPtr acc = arith_term();
        while (at(Tok::kPlus) || at(Tok::kMinus)) {
            const ArithOp op = next().kind == Tok::kPlus ? ArithOp::kAdd : ArithOp::kSub;
            acc = Arith::binary(op, acc, arith_term());
        }
        return acc;
    }

    ArithPtr arith_term() {
        ArithPtr acc = arith_unary();
        while (accept(Tok::kStar))
            acc = Arith::binary(ArithOp::kMul, acc, arith_unary());
        return acc;
    }

    ArithPtr negate(const ArithPtr& x, const Token& where) {
        if (x->kind == Arith::Kind::kConst) {
            std::int64_t v = 0;
            if (__builtin_sub_overflow(std::int64_t{0}, x->value, &v))
                fail_at(where, "integer literal out of range");
            return Arith::constant(v);
        }
        return Arith::binary(ArithOp::kSub, Arith::constant(0), x);
    }

    ArithPtr arith_unary() {
        const Token& t = peek();
        if (pending_minus_) {
            pending_minus_ = false;
            return negate(arith_unary(), t);
        }
        if (accept(Tok::kMinus))
            return negate(arith_unary(), t);
        if (at(Tok::kInt))
            return Arith::constant(integer());
        if (accept(Tok::kLParen)) {
            ArithPtr e = arith();
            expect(Tok::kRParen);
            return e;
        }
        if (t.kind == Tok::kIdent) {
            next();
            if (std::find(bound_.begin(), bound_.end(), t.text) != bound_.end() || decls_.logvars.count(t.text))
                return Arith::log_var(t.text);
            if (decls_.is_var(t.text))
                return Arith::prog_var(t.text);
            fail_at(t, "unknown variable '" + t.text + "'");
        }
        fail("expected an integer expression, found " + show(t));
    }

    // -- assertions -----------------------------------------------------------

    AssertPtr disjunction() {
        AssertPtr acc = conjunction();
        while (accept(Tok::kOrOr))
            acc = Assertion::disjunction(acc, conjunction());
        return acc;
    }

    AssertPtr conjunction() {
        AssertPtr acc = assertion_unary();
        while (accept(Tok::kAndAnd))
            acc = Assertion::conjunction(acc, assertion_unary());
        return acc;
    }

    AssertPtr relation() {
        ArithPtr lhs = arith();
        const Token& t = peek();
        RelOp op;
        if (is_rel_token(t.kind)) {
            op = rel_of(next().kind);
        } else if (t.kind == Tok::kAssign) {
            // `X<-1` lexes as an assignment arrow; read it as `X < -1`.
            next();
            op = RelOp::kLt;
            pending_minus_ = true;
        } else {
            fail("expected a comparison operator, found " + show(t));
        }
        return Assertion::relation(op, lhs, arith());
    }

    AssertPtr assertion_unary() {
        const Token& t = peek();
        if (accept(Tok::kBang))
            return Assertion::negation(assertion_unary());
        if (accept(Tok::kAt)) {
            const Token& nt = peek();
            const std::string name = ident();
            auto it = decls_.assertions.find(name);
            if (it == decls_.assertions.end())
                fail_at(nt, "unknown assertion '" + name + "'");
            return it->second;
        }
        if (at(Tok::kLBracket)) {
            next();
            if (accept_word("Proj")) {
                const int j = qubit_ref();
                expect(Tok::kComma);
                const Token& bt = peek();
                const int i = small_int("bit");
                if (i > 1)
                    fail_at(bt, "projector outcome must be 0 or 1");
                expect(Tok::kRBracket);
                return Assertion::box_proj(j, i, assertion_unary());
            }
            const Token& gt = peek();
            GatePtr g = gate_name();
            auto qs = qubit_list(g, gt);
            expect(Tok::kRBracket);
            return Assertion::box_unitary(g, std::move(qs), assertion_unary());
        }
        if (t.kind == Tok::kIdent) {
            if (t.text == "true") {
                next();
                return Assertion::truth();
            }
            if (t.text == "false") {
                next();
                return Assertion::falsity();
            }
            if ((t.text == "P0" || t.text == "P1") && peek(1).kind == Tok::kLParen) {
                next();
                next();
                const int j = qubit_ref();
                expect(Tok::kRParen);
                return Assertion::proj(j, t.text == "P1" ? 1 : 0);
            }
            if (t.text == "forall") {
                next();
                const Token& vt = peek();
                const std::string v = ident();
                if (decls_.is_var(v))
                    fail_at(vt, "'" + v + "' is a program variable; forall binds logical variables");
                expect(Tok::kDot);
                bound_.push_back(v);
                AssertPtr body = assertion_unary();
                bound_.pop_back();
                return Assertion::forall(v, body);
            }
            if (t.text == "AND" && peek(1).kind == Tok::kLBracket) {
                next();
                next();
                const int k = small_int("bound");
                expect(Tok::kRBracket);
                expect(Tok::kLBrace);
                std::vector<AssertPtr> fam;
                fam.push_back(assertion());
                while (accept(Tok::kComma))
                    fam.push_back(assertion());
                expect(Tok::kRBrace);
                if (fam.size() != static_cast<std::size_t>(k) + 1)
                    fail_at(t, "AND[" + std::to_string(k) + "] needs " + std::to_string(k + 1) + " members, got " +
                                   std::to_string(fam.size()));
                return Assertion::big_and(std::move(fam), k);
            }
        }
        if (at(Tok::kLParen) && !failed_paren_assert_.count(p_)) {
            const std::size_t save = p_;
            try {
                next();
                AssertPtr inner = assertion();
                expect(Tok::kRParen);
                const Tok after = peek().kind;
                if (!is_rel_token(after) && after != Tok::kPlus && after != Tok::kMinus && after != Tok::kStar &&
                    after != Tok::kAssign)
                    return inner;
            } catch (const ParseError&) {
            }
            failed_paren_assert_.insert(save);
            p_ = save;
            pending_minus_ = false;
        }
        return relation();
    }

    // -- real expressions ---------------------------------------------------------

    RealPtr real_term() {
        RealPtr acc = real_unary();
        while (accept(Tok::kStar))
            acc = RealExpr::binary(ArithOp::kMul, acc, real_unary());
        return acc;
    }

    RealPtr real_unary() {
        const Token& t = peek();
        if (accept(Tok::kMinus)) {
            if (at(Tok::kInt) || at(Tok::kReal))
                return RealExpr::constant(-std::stod(next().text));
            return RealExpr::binary(ArithOp::kSub, RealExpr::constant(0.0), real_unary());
        }
        if (at(Tok::kInt) || at(Tok::kReal))
            return RealExpr::constant(std::stod(next().text));
        if (at(Tok::kRealVar))
            return RealExpr::variable(next().text);
        if (accept(Tok::kAt)) {
            const Token& nt = peek();
            const std::string name = ident();
            auto it = decls_.terms.find(name);
            if (it == decls_.terms.end())
                fail_at(nt, "unknown term '" + name + "'");
            return it->second;
        }
        if (t.kind == Tok::kIdent && t.text == "P" && peek(1).kind == Tok::kLBracket) {
            next();
            next();
            AssertPtr a = assertion();
            expect(Tok::kRBracket);
            return RealExpr::prob(a);
        }
        if (t.kind == Tok::kIdent && t.text == "SUM" && peek(1).kind == Tok::kLBracket) {
            next();
            next();
            const int n = small_int("bound");
            expect(Tok::kRBracket);
            expect(Tok::kLBrace);
            std::vector<RealPtr> terms;
            terms.push_back(real());
            while (accept(Tok::kComma))
                terms.push_back(real());
            expect(Tok::kRBrace);
            if (terms.size() != static_cast<std::size_t>(n) + 1)
                fail_at(t, "SUM[" + std::to_string(n) + "] needs " + std::to_string(n + 1) + " terms, got " +
                               std::to_string(terms.size()));
            return RealExpr::bounded_sum(std::move(terms), n);
        }
        if (at(Tok::kLParen)) {
            const std::size_t save = p_;
            if (!failed_cq_cond_.count(p_)) {
                try {
                    next();
                    AssertPtr a = assertion();
                    expect(Tok::kFatArrow);
                    ProjectorPtr q = projector_ref();
                    expect(Tok::kRParen);
                    return RealExpr::cq_cond(a, q);
                } catch (const ParseError& e) {
                    failed_cq_cond_.emplace(save, e);
                    p_ = save;
                    pending_minus_ = false;
                }
            }
            try {
                next();
                RealPtr r = real();
                expect(Tok::kRParen);
                return r;
            } catch (const ParseError& e) {
                // Report whichever reading got further.
                const ParseError& cq = failed_cq_cond_.at(save);
                const auto key = [](const ParseError& x) { return std::make_pair(x.pos().line, x.pos().column); };
                if (key(cq) > key(e))
                    throw cq;
                throw;
            }
        }
        fail("expected a real expression, found " + show(t));
    }

    // -- probabilistic formulas -------------------------------------------------

    FormulaPtr formula_and() {
        FormulaPtr acc = formula_unary();
        while (accept(Tok::kAndAnd))
            acc = Formula::conjunction(acc, formula_unary());
        return acc;
    }

    FormulaPtr formula_unary() {
        if (accept(Tok::kBang))
            return Formula::negation(formula_unary());
        if (at(Tok::kAt) && peek(1).kind == Tok::kIdent && decls_.formulas.count(peek(1).text)) {
            next();
            return decls_.formulas.at(next().text);
        }
        if (at(Tok::kLParen) && !failed_paren_formula_.count(p_)) {
            const std::size_t save = p_;
            try {
                next();
                FormulaPtr inner = formula();
                expect(Tok::kRParen);
                const Tok after = peek().kind;
                if (!is_rel_token(after) && after != Tok::kPlus && after != Tok::kMinus && after != Tok::kStar)
                    return inner;
            } catch (const ParseError&) {
            }
            failed_paren_formula_.insert(save);
            p_ = save;
        }
        RealPtr lhs = real();
        const Token& t = peek();
        if (!is_rel_token(t.kind))
            fail("expected a comparison operator, found " + show(t));
        const RelOp op = rel_of(next().kind);
        return Formula::relation(op, lhs, real());
    }

    std::vector<Token> toks_;
    std::size_t p_ = 0;
    Declarations decls_;
    std::vector<std::string> bound_;
    bool pending_minus_ = false;
    std::set<std::size_t> failed_paren_assert_;
    std::map<std::size_t, ParseError> failed_cq_cond_;
    std::set<std::size_t> failed_paren_formula_;
};

} // namespace

SpecFile parse_spec(std::string_view text) {
    Parser p(text, Declarations{});
    return p.file();
}

CmdPtr parse_command(std::string_view text, const Declarations& decls) {
    Parser p(text, decls);
    CmdPtr c = p.command();
    p.expect_end();
    return c;
}

AssertPtr parse_assertion(std::string_view text, const Declarations& decls) {
    Parser p(text, decls);
    AssertPtr a = p.assertion();
    p.expect_end();
    return a;
}

RealPtr parse_real(std::string_view text, const Declarations& decls) {
    Parser p(text, decls);
    RealPtr r = p.real();
    p.expect_end();
    return r;
}

FormulaPtr parse_formula(std::string_view text, const Declarations& decls) {
    Parser p(text, decls);
    FormulaPtr f = p.formula();
    p.expect_end();
    return f;
}

} // namespace qhl
