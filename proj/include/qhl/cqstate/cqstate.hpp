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

#include <cstdint>
#include <map>
#include <string>

#include "qhl/cqstate/quantum.hpp"
#include "qhl/syntax/ast.hpp"

namespace qhl {

/// Program variable values. Every declared variable has an entry.
using Store = std::map<std::string, std::int64_t>;

/// Values for logical and real variables plus quantifier domains.
struct Interpretation {
    std::map<std::string, std::int64_t> ints;
    std::map<std::string, double> reals;
    std::map<std::string, IntRange> ranges;
};

/// 64-bit evaluation; throws RuntimeError on overflow or unbound names.
/// Logical variables are looked up in interp when given.
std::int64_t eval_arith(const ArithPtr& e, const Store& store, const Interpretation* interp = nullptr);

bool compare(RelOp op, std::int64_t a, std::int64_t b);

/// Truth of a program guard on a classical store.
bool eval_guard(const AssertPtr& b, const Store& store);

struct PureCqState {
    Store classical;
    Amplitudes quantum;
};

/// Fixes the global phase so the first amplitude of modulus > 1e-9 is real
/// positive, normalizes, then rounds to 12 decimals. Idempotent.
/// Throws RuntimeError on a zero vector.
PureCqState canonicalize(const PureCqState& s);

/// Strict weak order on canonical states: store first, then amplitudes.
struct CanonicalLess {
    bool operator()(const PureCqState& a, const PureCqState& b) const;
};

/// Equality up to global phase.
bool same_state(const PureCqState& a, const PureCqState& b);

/// Finite subdistribution over canonical pure cq-states.
class MixedCqState {
  public:
    using Map = std::map<PureCqState, double, CanonicalLess>;

    /// Adds mass to the canonical form of s.
    void add(const PureCqState& s, double mass);
    /// Adds an already canonical state; skips re-canonicalization.
    void add_canonical(const PureCqState& s, double mass);
    void add_all(const MixedCqState& other, double scale = 1.0);
    /// Drops keys whose mass is below eps.
    void prune(double eps = 1e-12);

    double mass() const;
    double mass_of(const PureCqState& s) const;
    const Map& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    MixedCqState scaled(double a) const;

  private:
    Map entries_;
};

MixedCqState point_dist(const PureCqState& s);

/// The restriction to supports whose store satisfies the guard.
MixedCqState restrict(const MixedCqState& m, const AssertPtr& guard);

/// Largest pointwise mass difference. Keys match when their stores agree
/// and their canonical amplitudes differ by at most key_tol.
double max_mass_difference(const MixedCqState& a, const MixedCqState& b, double key_tol = 1e-9);

} // namespace qhl
