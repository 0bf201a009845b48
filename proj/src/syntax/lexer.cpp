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

#include "qhl/syntax/lexer.hpp"

#include <cctype>

namespace qhl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

struct Punct {
    const char* text;
    Tok kind;
};

// Longest spellings first so that prefixes never win.
constexpr Punct kPuncts[] = {
    {"<<=", Tok::kMeasure}, {"<-$", Tok::kRandAssign}, {"<-", Tok::kAssign}, {"->", Tok::kArrow},
    {"=>", Tok::kFatArrow}, {"&&", Tok::kAndAnd},      {"||", Tok::kOrOr},   {"!=", Tok::kNe},
    {"<=", Tok::kLe},       {">=", Tok::kGe},          {"{", Tok::kLBrace},  {"}", Tok::kRBrace},
    {"(", Tok::kLParen},    {")", Tok::kRParen},       {"[", Tok::kLBracket}, {"]", Tok::kRBracket},
    {",", Tok::kComma},     {";", Tok::kSemi},         {":", Tok::kColon},   {".", Tok::kDot},
    {"+", Tok::kPlus},      {"-", Tok::kMinus},        {"*", Tok::kStar},    {"!", Tok::kBang},
    {"=", Tok::kEq},        {"<", Tok::kLt},           {">", Tok::kGt},      {"|", Tok::kBar},
    {"@", Tok::kAt},
};

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    std::size_t line_start = 0;
    auto pos_at = [&](std::size_t at) { return SourcePos{line, static_cast<int>(at - line_start) + 1}; };

    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++i;
            ++line;
            line_start = i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
            while (i < text.size() && text[i] != '\n')
                ++i;
            continue;
        }

        Token tok;
        tok.pos = pos_at(i);
        tok.offset = i;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]))
                ++j;
            tok.kind = Tok::kIdent;
            tok.text = std::string(text.substr(i, j - i));
            i = j;
        } else if (digit(c)) {
            std::size_t j = i;
            bool is_real = false;
            while (j < text.size() && digit(text[j]))
                ++j;
            if (j + 1 < text.size() && text[j] == '.' && digit(text[j + 1])) {
                is_real = true;
                ++j;
                while (j < text.size() && digit(text[j]))
                    ++j;
            }
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-'))
                    ++k;
                if (k < text.size() && digit(text[k])) {
                    is_real = true;
                    j = k;
                    while (j < text.size() && digit(text[j]))
                        ++j;
                }
            }
            tok.text = std::string(text.substr(i, j - i));
            tok.kind = is_real ? Tok::kReal : Tok::kInt;
            if (j < text.size() && text[j] == 'i' && (j + 1 >= text.size() || !ident_char(text[j + 1]))) {
                tok.kind = Tok::kImag;
                ++j;
            }
            i = j;
        } else if (c == '$') {
            std::size_t j = i + 1;
            if (j >= text.size() || !ident_start(text[j]))
                throw ParseError("expected a name after '$'", tok.pos);
            while (j < text.size() && ident_char(text[j]))
                ++j;
            tok.kind = Tok::kRealVar;
            tok.text = std::string(text.substr(i + 1, j - i - 1));
            i = j;
        } else {
            bool matched = false;
            for (const auto& p : kPuncts) {
                const std::string_view spelling(p.text);
                if (text.substr(i, spelling.size()) == spelling) {
                    tok.kind = p.kind;
                    tok.text = std::string(spelling);
                    i += spelling.size();
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw ParseError(std::string("unexpected character '") + c + "'", tok.pos);
        }
        tok.end = i;
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::kEnd;
    end.pos = pos_at(i);
    end.offset = end.end = i;
    out.push_back(end);
    return out;
}

const char* describe(Tok kind) {
    switch (kind) {
    case Tok::kEnd:
        return "end of input";
    case Tok::kIdent:
        return "identifier";
    case Tok::kInt:
        return "integer";
    case Tok::kReal:
        return "real number";
    case Tok::kImag:
        return "imaginary literal";
    case Tok::kRealVar:
        return "real variable";
    case Tok::kAt:
        return "'@'";
    case Tok::kLBrace:
        return "'{'";
    case Tok::kRBrace:
        return "'}'";
    case Tok::kLParen:
        return "'('";
    case Tok::kRParen:
        return "')'";
    case Tok::kLBracket:
        return "'['";
    case Tok::kRBracket:
        return "']'";
    case Tok::kComma:
        return "','";
    case Tok::kSemi:
        return "';'";
    case Tok::kColon:
        return "':'";
    case Tok::kDot:
        return "'.'";
    case Tok::kPlus:
        return "'+'";
    case Tok::kMinus:
        return "'-'";
    case Tok::kStar:
        return "'*'";
    case Tok::kBang:
        return "'!'";
    case Tok::kAndAnd:
        return "'&&'";
    case Tok::kOrOr:
        return "'||'";
    case Tok::kArrow:
        return "'->'";
    case Tok::kFatArrow:
        return "'=>'";
    case Tok::kAssign:
        return "'<-'";
    case Tok::kRandAssign:
        return "'<-$'";
    case Tok::kMeasure:
        return "'<<='";
    case Tok::kEq:
        return "'='";
    case Tok::kNe:
        return "'!='";
    case Tok::kLt:
        return "'<'";
    case Tok::kLe:
        return "'<='";
    case Tok::kGt:
        return "'>'";
    case Tok::kGe:
        return "'>='";
    case Tok::kBar:
        return "'|'";
    }
    return "token";
}

} // namespace qhl
