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

#include <cstddef>
#include <string>

#include "qhl/syntax/ast.hpp"

namespace qhl {

/// Concrete syntax accepted by the parser. A nonzero max_chars makes the
/// printer throw TransformError once the output would grow past it.
std::string pretty(const ArithPtr& e, std::size_t max_chars = 0);
std::string pretty(const AssertPtr& a, std::size_t max_chars = 0);
std::string pretty(const CmdPtr& c, std::size_t max_chars = 0);
std::string pretty(const RealPtr& r, std::size_t max_chars = 0);
std::string pretty(const FormulaPtr& f, std::size_t max_chars = 0);

/// Inline or named projector reference as it appears after `=>`.
std::string pretty(const ProjectorPtr& q);

/// Shortest text that reads back to exactly the same double.
std::string format_double(double v);

} // namespace qhl
