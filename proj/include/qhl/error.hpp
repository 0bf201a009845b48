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

#include <stdexcept>
#include <string>

namespace qhl {

/// Source position, 1-based. Zero line means "unknown".
struct SourcePos {
    int line = 0;
    int column = 0;
};

/// Base class of every error raised by the toolkit.
class QhlError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text: syntax, arity, probability sums, non-unitary gates.
class ParseError : public QhlError {
  public:
    ParseError(const std::string& message, SourcePos pos)
        : QhlError(pos.line > 0 ? std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                                      ": " + message
                                : message),
          pos_(pos), bare_(message) {}

    SourcePos pos() const { return pos_; }
    const std::string& bare_message() const { return bare_; }

  private:
    SourcePos pos_;
    std::string bare_;
};

/// Failures while executing programs or evaluating assertions: integer
/// overflow, unbound variables, missing quantifier ranges.
class RuntimeError : public QhlError {
  public:
    using QhlError::QhlError;
};

/// Raised by the transformers when a result cannot be produced, e.g. a
/// conjugated projector fails re-validation or a term exceeds the node budget.
class TransformError : public QhlError {
  public:
    using QhlError::QhlError;
};

} // namespace qhl
