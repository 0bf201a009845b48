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
#include <string_view>
#include <vector>

#include "qhl/error.hpp"

namespace qhl {

enum class Tok {
    kEnd,
    kIdent,
    kInt,
    kReal,
    kImag,     // a numeric literal directly followed by 'i', e.g. 0.5i
    kRealVar,  // $name
    kAt,       // @
    kLBrace,
    kRBrace,
    kLParen,
    kRParen,
    kLBracket,
    kRBracket,
    kComma,
    kSemi,
    kColon,
    kDot,
    kPlus,
    kMinus,
    kStar,
    kBang,
    kAndAnd,
    kOrOr,
    kArrow,    // ->
    kFatArrow, // =>
    kAssign,   // <-
    kRandAssign, // <-$
    kMeasure,  // <<=
    kEq,
    kNe,
    kLt,
    kLe,
    kGt,
    kGe,
    kBar,
};

struct Token {
    Tok kind = Tok::kEnd;
    std::string text;
    SourcePos pos;
    std::size_t offset = 0; // byte offset of the first character
    std::size_t end = 0;    // one past the last character
};

/// Splits text into tokens. `#` and `//` start line comments.
/// Throws ParseError on characters outside the grammar.
std::vector<Token> tokenize(std::string_view text);

const char* describe(Tok kind);

} // namespace qhl
