// Copyright 2026 The oamsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file bench.hpp
 * Parser and lowering pass for the line-oriented `.bench` optical layout
 * language.
 *
 * Grammar (one construct per line, `#` starts a comment, tokens separated by
 * whitespace or by the operator characters themselves):
 *
 *   file  := { line }
 *   line  := (decl | stmt | comment | blank) NEWLINE
 *   decl  := "space" "lmax" "=" INT [ "paths" "=" INT ]
 *   stmt  := IDENT { arg }
 *   arg   := KEY "=" expr
 *   expr  := term { ("*" | "/") term }
 *   term  := "-" term | NUMBER | "pi" | IDENT
 *
 * Statements:
 *   hwp theta=..        qwp theta=..      dove gamma=..
 *   qplate q=.. delta=..                  sagnac gamma=..
 *   pbs                 mirror            att eta=..
 *   phase phi=.. [pol=H|V] [oam=..] [path=..]
 *   postselect pol=H|V path=..
 *
 * Angle expressions are evaluated exactly as rational multiples of pi, so
 * `gamma=pi/16` survives a print/parse round trip bit-for-bit. Parsing is
 * total: errors are collected with line/column positions (resynchronizing at
 * the next newline) and never abort the pass. When no `space` declaration is
 * given, lowering defaults to lmax = 2 + sum of |2q| over q-plate statements
 * and paths = 2 when a pbs or postselect statement is present (1 otherwise).
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oamsim/circuit.hpp"

namespace oamsim {

struct Diagnostic {
    int line = 1;  // 1-based
    int col = 1;   // 1-based byte column
    std::string message;
};

/// "file:line:col: message"
std::string format_diagnostic(const Diagnostic& d, const std::string& file);

struct Rational {
    long long num = 0;
    long long den = 1;  // > 0, reduced
};

/// A value evaluated from an expression: either an exact rational multiple
/// of an integer power of pi, or a bare identifier (H, V, ...).
struct ArgValue {
    bool is_symbol = false;
    std::string symbol;
    Rational r{0, 1};
    int pi_pow = 0;

    double to_double() const;
    bool is_integer() const { return !is_symbol && pi_pow == 0 && r.den == 1; }
};

struct Arg {
    std::string key;
    ArgValue value;
    int line = 1;
    int col = 1;
};

struct Statement {
    std::string name;
    std::vector<Arg> args;
    int line = 1;
    int col = 1;

    const Arg* find(const std::string& key) const;
};

struct SpaceDecl {
    int lmax = 0;
    std::optional<int> paths;
    int line = 1;
    int col = 1;
};

struct BenchSpec {
    std::optional<SpaceDecl> decl;
    std::vector<Statement> statements;
    std::vector<Diagnostic> diagnostics;
};

/// Total parse of UTF-8 text; never throws on arbitrary byte input (invalid
/// UTF-8 yields a single diagnostic and an empty spec). Statements that fail
/// tag/arity/type checks are dropped and reported.
BenchSpec parse(const std::string& text);

struct LowerResult {
    std::optional<Circuit> circuit;
    std::vector<Diagnostic> diagnostics;
};

/// Lowers an error-free BenchSpec to a Circuit, collecting semantic errors
/// (parameter ranges, path bounds) with source positions. Throws
/// std::invalid_argument when called on a spec that has parse errors.
LowerResult lower(const BenchSpec& spec);

/// Canonical formatting; pretty_print(parse(pretty_print(parse(text))))
/// is a fixed point.
std::string pretty_print(const BenchSpec& spec);

}  // namespace oamsim
