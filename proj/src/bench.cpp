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

#include "oamsim/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oamsim {

namespace {

// ---------------------------------------------------------------------
// exact rational-multiple-of-pi arithmetic
// ---------------------------------------------------------------------

Rational reduce(long long num, long long den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den == 0 ? 1 : den};
}

bool mul_overflows(long long a, long long b) {
    if (a == 0 || b == 0) return false;
    const long long lim = 4'000'000'000'000'000'000LL;
    return std::abs(a) > lim / std::abs(b);
}

// ---------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------

enum class Tok {
    Ident,
    Number,
    Equals,
    Star,
    Slash,
    Minus,
    Newline,
    Bad,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    Rational number{0, 1};
    bool number_ok = true;
    int line = 1;
    int col = 1;
};

bool valid_utf8(const std::string& s, int* bad_line, int* bad_col) {
    int line = 1, col = 1;
    size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        size_t extra = 0;
        if (c < 0x80) {
            extra = 0;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            extra = 3;
        } else {
            *bad_line = line;
            *bad_col = col;
            return false;
        }
        for (size_t k = 1; k <= extra; ++k) {
            if (i + k >= s.size() ||
                (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
                *bad_line = line;
                *bad_col = col;
                return false;
            }
        }
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            col += static_cast<int>(1 + extra);
        }
        i += 1 + extra;
    }
    return true;
}

bool ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool ident_char(unsigned char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
}

bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

std::string printable(unsigned char c) {
    if (c >= 0x20 && c < 0x7F) return std::string(1, static_cast<char>(c));
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", c);
    return buf;
}

std::vector<Token> lex(const std::string& text,
                       std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    const size_t n = text.size();
    auto push = [&](Tok kind, std::string t, int l, int c) {
        Token tok;
        tok.kind = kind;
        tok.text = std::move(t);
        tok.line = l;
        tok.col = c;
        out.push_back(std::move(tok));
    };
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '\n') {
            push(Tok::Newline, "\n", line, col);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < n && text[i] != '\n') {
                ++i;
                ++col;
            }
            continue;
        }
        const int tl = line, tc = col;
        if (ident_start(c)) {
            size_t j = i;
            while (j < n && ident_char(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            push(Tok::Ident, text.substr(i, j - i), tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (digit(c)) {
            size_t j = i;
            while (j < n && digit(static_cast<unsigned char>(text[j]))) ++j;
            size_t int_end = j;
            bool ok = true;
            if (j < n && text[j] == '.') {
                ++j;
                const size_t frac_begin = j;
                while (j < n && digit(static_cast<unsigned char>(text[j]))) {
                    ++j;
                }
                if (j == frac_begin) ok = false;  // "12." with no fraction
            }
            Token tok;
            tok.kind = Tok::Number;
            tok.text = text.substr(i, j - i);
            tok.line = tl;
            tok.col = tc;
            if (ok && j - i > 18) ok = false;  // does not fit a long long
            if (ok) {
                long long num = 0, den = 1;
                for (size_t k = i; k < int_end; ++k) {
                    num = num * 10 + (text[k] - '0');
                }
                for (size_t k = int_end + 1; k < j && k > int_end; ++k) {
                    num = num * 10 + (text[k] - '0');
                    den *= 10;
                }
                tok.number = reduce(num, den);
            }
            tok.number_ok = ok;
            out.push_back(std::move(tok));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        switch (c) {
            case '=': push(Tok::Equals, "=", tl, tc); break;
            case '*': push(Tok::Star, "*", tl, tc); break;
            case '/': push(Tok::Slash, "/", tl, tc); break;
            case '-': push(Tok::Minus, "-", tl, tc); break;
            default:
                push(Tok::Bad, printable(c), tl, tc);
                break;
        }
        ++i;
        ++col;
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    (void)diags;
    return out;
}

// ---------------------------------------------------------------------
// statement schemas
// ---------------------------------------------------------------------

struct KeySpec {
    const char* key;
    bool required;
    bool symbolic;  // value is an identifier (H/V), not a number
};

struct StmtSpec {
    const char* name;
    std::vector<KeySpec> keys;
};

const std::vector<StmtSpec>& statement_schemas() {
    static const std::vector<StmtSpec> specs = {
        {"hwp", {{"theta", true, false}}},
        {"qwp", {{"theta", true, false}}},
        {"dove", {{"gamma", true, false}}},
        {"qplate", {{"q", true, false}, {"delta", true, false}}},
        {"pbs", {}},
        {"mirror", {}},
        {"phase",
         {{"phi", true, false},
          {"pol", false, true},
          {"oam", false, false},
          {"path", false, false}}},
        {"att", {{"eta", true, false}}},
        {"sagnac", {{"gamma", true, false}}},
        {"postselect", {{"pol", true, true}, {"path", true, false}}},
    };
    return specs;
}

const StmtSpec* find_schema(const std::string& name) {
    for (const StmtSpec& s : statement_schemas()) {
        if (name == s.name) return &s;
    }
    return nullptr;
}

// ---------------------------------------------------------------------
// recursive-descent parser, one line at a time, resync at newline
// ---------------------------------------------------------------------

class Parser {
  public:
    Parser(std::vector<Token> toks, BenchSpec& out)
        : toks_(std::move(toks)), out_(out) {}

    void run() {
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Newline) {
                advance();
                continue;
            }
            parse_line();
        }
    }

  private:
    const Token& peek() const { return toks_[pos_]; }

    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool at_line_end() const {
        return peek().kind == Tok::Newline || peek().kind == Tok::End;
    }

    void error(const Token& at, const std::string& msg) {
        out_.diagnostics.push_back({at.line, at.col, msg});
    }

    void resync() {
        while (!at_line_end()) advance();
        if (peek().kind == Tok::Newline) advance();
    }

    void parse_line() {
        const Token& head = peek();
        if (head.kind != Tok::Ident) {
            error(head, "expected element name, got '" + head.text + "'");
            resync();
            return;
        }
        if (head.text == "space") {
            parse_decl();
            return;
        }
        parse_statement();
    }

    // decl := "space" "lmax" "=" INT [ "paths" "=" INT ]
    void parse_decl() {
        const Token& head = advance();  // "space"
        SpaceDecl decl;
        decl.line = head.line;
        decl.col = head.col;
        if (!expect_keyword("lmax")) return;
        auto lmax = expect_int("lmax");
        if (!lmax) return;
        decl.lmax = *lmax;
        if (!at_line_end()) {
            if (!expect_keyword("paths")) return;
            auto paths = expect_int("paths");
            if (!paths) return;
            decl.paths = *paths;
        }
        if (!require_line_end()) return;
        if (out_.decl) {
            error(head, "duplicate space declaration");
            return;
        }
        out_.decl = decl;
    }

    bool expect_keyword(const std::string& kw) {
        if (peek().kind != Tok::Ident || peek().text != kw) {
            error(peek(), "expected '" + kw + "'");
            resync();
            return false;
        }
        advance();
        if (peek().kind != Tok::Equals) {
            error(peek(), "expected '=' after '" + kw + "'");
            resync();
            return false;
        }
        advance();
        return true;
    }

    std::optional<int> expect_int(const std::string& what) {
        bool ok = true;
        const Token at = peek();
        const ArgValue v = parse_expr(ok);
        if (!ok) {
            resync();
            return std::nullopt;
        }
        if (!v.is_integer() || v.r.num > 1'000'000 || v.r.num < -1'000'000) {
            error(at, what + " must be a small integer");
            resync();
            return std::nullopt;
        }
        return static_cast<int>(v.r.num);
    }

    bool require_line_end() {
        if (!at_line_end()) {
            error(peek(), "unexpected trailing token '" + peek().text + "'");
            resync();
            return false;
        }
        if (peek().kind == Tok::Newline) advance();
        return true;
    }

    // stmt := IDENT { KEY "=" expr }
    void parse_statement() {
        const Token& head = advance();
        Statement stmt;
        stmt.name = head.text;
        stmt.line = head.line;
        stmt.col = head.col;
        const StmtSpec* schema = find_schema(stmt.name);
        if (schema == nullptr) {
            error(head, "unknown element '" + stmt.name + "'");
            resync();
            return;
        }
        bool bad = false;
        while (!at_line_end()) {
            if (peek().kind != Tok::Ident) {
                error(peek(), "expected key=value argument, got '" +
                                  peek().text + "'");
                bad = true;
                break;
            }
            Arg arg;
            arg.key = peek().text;
            arg.line = peek().line;
            arg.col = peek().col;
            advance();
            if (peek().kind != Tok::Equals) {
                error(peek(), "expected '=' after key '" + arg.key + "'");
                bad = true;
                break;
            }
            advance();
            bool ok = true;
            arg.value = parse_expr(ok);
            if (!ok) {
                bad = true;
                break;
            }
            stmt.args.push_back(std::move(arg));
        }
        if (bad) {
            resync();
            return;
        }
        if (peek().kind == Tok::Newline) advance();
        if (check_args(stmt, *schema)) {
            out_.statements.push_back(std::move(stmt));
        }
    }

    bool check_args(const Statement& stmt, const StmtSpec& schema) {
        bool ok = true;
        for (const Arg& a : stmt.args) {
            const KeySpec* ks = nullptr;
            for (const KeySpec& k : schema.keys) {
                if (a.key == k.key) {
                    ks = &k;
                    break;
                }
            }
            if (ks == nullptr) {
                out_.diagnostics.push_back(
                    {a.line, a.col,
                     "'" + stmt.name + "' takes no argument '" + a.key + "'"});
                ok = false;
                continue;
            }
            if (ks->symbolic != a.value.is_symbol) {
                out_.diagnostics.push_back(
                    {a.line, a.col,
                     std::string("argument '") + a.key + "' must be " +
                         (ks->symbolic ? "an identifier" : "a number")});
                ok = false;
            }
            int seen = 0;
            for (const Arg& other : stmt.args) {
                if (other.key == a.key) ++seen;
            }
            if (seen > 1) {
                out_.diagnostics.push_back(
                    {a.line, a.col, "duplicate argument '" + a.key + "'"});
                ok = false;
                break;
            }
        }
        for (const KeySpec& k : schema.keys) {
            if (!k.required) continue;
            if (stmt.find(k.key) == nullptr) {
                out_.diagnostics.push_back(
                    {stmt.line, stmt.col,
                     "'" + stmt.name + "' requires argument '" + k.key + "'"});
                ok = false;
            }
        }
        return ok;
    }

    // expr := term { ("*" | "/") term } ; term := "-" term | primary
    ArgValue parse_expr(bool& ok) {
        ArgValue acc = parse_term(ok);
        if (!ok) return acc;
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token op = advance();
            const ArgValue rhs = parse_term(ok);
            if (!ok) return acc;
            if (acc.is_symbol || rhs.is_symbol) {
                error(op, "identifiers cannot appear in arithmetic");
                ok = false;
                return acc;
            }
            if (op.kind == Tok::Slash && rhs.r.num == 0 && rhs.pi_pow == 0) {
                error(op, "division by zero");
                ok = false;
                return acc;
            }
            long long n1 = acc.r.num, d1 = acc.r.den;
            long long n2 = op.kind == Tok::Star ? rhs.r.num : rhs.r.den;
            long long d2 = op.kind == Tok::Star ? rhs.r.den : rhs.r.num;
            // normalize cross factors first to keep products small
            const Rational x = reduce(n1, d2);
            const Rational y = reduce(n2, d1);
            if (mul_overflows(x.num, y.num) || mul_overflows(x.den, y.den)) {
                error(op, "arithmetic overflow in constant expression");
                ok = false;
                return acc;
            }
            acc.r = reduce(x.num * y.num, x.den * y.den);
            acc.pi_pow += op.kind == Tok::Star ? rhs.pi_pow : -rhs.pi_pow;
        }
        return acc;
    }

    ArgValue parse_term(bool& ok) {
        if (peek().kind == Tok::Minus) {
            advance();
            ArgValue v = parse_term(ok);
            if (ok && v.is_symbol) {
                error(peek(), "cannot negate an identifier");
                ok = false;
            }
            v.r.num = -v.r.num;
            return v;
        }
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            if (!t.number_ok) {
                error(t, "malformed number '" + t.text + "'");
                ok = false;
                advance();
                return {};
            }
            ArgValue v;
            v.r = t.number;
            advance();
            return v;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "pi") {
                ArgValue v;
                v.r = {1, 1};
                v.pi_pow = 1;
                advance();
                return v;
            }
            ArgValue v;
            v.is_symbol = true;
            v.symbol = t.text;
            advance();
            return v;
        }
        error(t, "expected a value, got '" + t.text + "'");
        ok = false;
        if (!at_line_end()) advance();
        return {};
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    BenchSpec& out_;
};

}  // namespace

double ArgValue::to_double() const {
    double v = static_cast<double>(r.num) / static_cast<double>(r.den);
    for (int i = 0; i < pi_pow; ++i) v *= kPi;
    for (int i = 0; i > pi_pow; --i) v /= kPi;
    return v;
}

const Arg* Statement::find(const std::string& key) const {
    for (const Arg& a : args) {
        if (a.key == key) return &a;
    }
    return nullptr;
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
    std::ostringstream os;
    os << file << ':' << d.line << ':' << d.col << ": " << d.message;
    return os.str();
}

BenchSpec parse(const std::string& text) {
    BenchSpec spec;
    int bl = 1, bc = 1;
    if (!valid_utf8(text, &bl, &bc)) {
        spec.diagnostics.push_back({bl, bc, "invalid UTF-8 encoding"});
        return spec;
    }
    Parser parser(lex(text, spec.diagnostics), spec);
    parser.run();
    return spec;
}

namespace {

void semantic_error(LowerResult& res, const Statement& s,
                    const std::string& msg) {
    res.diagnostics.push_back({s.line, s.col, msg});
}

std::optional<Pol> pol_from_symbol(const std::string& sym) {
    if (sym == "H") return Pol::H;
    if (sym == "V") return Pol::V;
    return std::nullopt;
}

}  // namespace

LowerResult lower(const BenchSpec& spec) {
    if (!spec.diagnostics.empty()) {
        throw std::invalid_argument("lower: spec has parse errors");
    }
    LowerResult res;
    Circuit circuit;

    // space: declared, or the default rule
    int band = 0;
    bool has_paths_user = false;
    for (const Statement& s : spec.statements) {
        if (s.name == "qplate") {
            const double q = s.find("q")->value.to_double();
            band += std::abs(static_cast<int>(std::llround(2.0 * q)));
        }
        if (s.name == "pbs" || s.name == "postselect") has_paths_user = true;
    }
    if (spec.decl) {
        if (spec.decl->lmax < 0 || (spec.decl->paths && *spec.decl->paths < 1)) {
            res.diagnostics.push_back({spec.decl->line, spec.decl->col,
                                       "space bounds must be positive"});
            return res;
        }
        circuit.space = Space{spec.decl->lmax, spec.decl->paths.value_or(1)};
    } else {
        circuit.space = Space{2 + band, has_paths_user ? 2 : 1};
    }

    bool have_postselect = false;
    for (const Statement& s : spec.statements) {
        auto num = [&s](const char* key) {
            return s.find(key)->value.to_double();
        };
        if (s.name == "hwp") {
            circuit.elements.push_back({Hwp{num("theta")}});
        } else if (s.name == "qwp") {
            circuit.elements.push_back({Qwp{num("theta")}});
        } else if (s.name == "dove") {
            circuit.elements.push_back({DovePrism{num("gamma")}});
        } else if (s.name == "sagnac") {
            circuit.elements.push_back({SagnacPsi{num("gamma")}});
        } else if (s.name == "qplate") {
            const double q = num("q");
            const double twice = 2.0 * q;
            if (std::abs(twice - std::round(twice)) > 1e-12 ||
                std::round(twice) == 0.0) {
                semantic_error(res, s,
                               "q-plate charge must be a nonzero half-integer");
                continue;
            }
            const double delta = num("delta");
            if (delta < 0.0 || delta >= 2.0 * kPi) {
                semantic_error(res, s, "delta must lie in [0, 2*pi)");
                continue;
            }
            circuit.elements.push_back({QPlate{q, delta}});
        } else if (s.name == "pbs") {
            if (circuit.space.n_paths < 2) {
                semantic_error(res, s, "pbs needs a space with paths >= 2");
                continue;
            }
            circuit.elements.push_back({Pbs{0, 1}});
        } else if (s.name == "mirror") {
            circuit.elements.push_back({Mirror{}});
        } else if (s.name == "phase") {
            ModeFilter filter;
            if (const Arg* a = s.find("pol")) {
                const auto pol = pol_from_symbol(a->value.symbol);
                if (!pol) {
                    res.diagnostics.push_back(
                        {a->line, a->col, "pol must be H or V"});
                    continue;
                }
                filter.pol = *pol;
            }
            if (const Arg* a = s.find("oam")) {
                if (!a->value.is_integer()) {
                    res.diagnostics.push_back(
                        {a->line, a->col, "oam filter must be an integer"});
                    continue;
                }
                filter.oam = static_cast<int>(a->value.r.num);
            }
            if (const Arg* a = s.find("path")) {
                if (!a->value.is_integer() || a->value.r.num < 0 ||
                    a->value.r.num >= circuit.space.n_paths) {
                    res.diagnostics.push_back(
                        {a->line, a->col, "path filter outside declared paths"});
                    continue;
                }
                filter.path = static_cast<int>(a->value.r.num);
            }
            circuit.elements.push_back({PhaseShift{num("phi"), filter}});
        } else if (s.name == "att") {
            const double eta = num("eta");
            if (eta < 0.0 || eta > 1.0) {
                semantic_error(res, s, "eta must lie in [0, 1]");
                continue;
            }
            OpticalElement e{Attenuator{eta}};
            e.transmittance = eta;
            circuit.elements.push_back(e);
        } else if (s.name == "postselect") {
            if (have_postselect) {
                semantic_error(res, s, "duplicate postselect statement");
                continue;
            }
            const auto pol = pol_from_symbol(s.find("pol")->value.symbol);
            if (!pol) {
                semantic_error(res, s, "pol must be H or V");
                continue;
            }
            const ArgValue& pv = s.find("path")->value;
            if (!pv.is_integer() || pv.r.num < 0 ||
                pv.r.num >= circuit.space.n_paths) {
                semantic_error(res, s, "postselect path outside declared paths");
                continue;
            }
            circuit.postselect =
                Postselection{*pol, static_cast<int>(pv.r.num)};
            have_postselect = true;
        }
    }
    if (res.diagnostics.empty()) res.circuit = std::move(circuit);
    return res;
}

namespace {

std::string format_value(const ArgValue& v) {
    if (v.is_symbol) return v.symbol;
    if (v.r.num == 0) return "0";
    const bool neg = v.r.num < 0;
    const long long n = neg ? -v.r.num : v.r.num;
    std::string s;
    if (v.pi_pow > 0) {
        if (n != 1) s = std::to_string(n);
        for (int i = 0; i < v.pi_pow; ++i) {
            if (!s.empty()) s += '*';
            s += "pi";
        }
    } else {
        s = std::to_string(n);
    }
    if (v.r.den != 1) s += '/' + std::to_string(v.r.den);
    for (int i = 0; i > v.pi_pow; --i) s += "/pi";
    return neg ? "-" + s : s;
}

}  // namespace

std::string pretty_print(const BenchSpec& spec) {
    std::ostringstream os;
    if (spec.decl) {
        os << "space lmax=" << spec.decl->lmax;
        if (spec.decl->paths) os << " paths=" << *spec.decl->paths;
        os << '\n';
    }
    for (const Statement& s : spec.statements) {
        os << s.name;
        const StmtSpec* schema = find_schema(s.name);
        // canonical key order from the schema
        if (schema != nullptr) {
            for (const KeySpec& k : schema->keys) {
                if (const Arg* a = s.find(k.key)) {
                    os << ' ' << k.key << '=' << format_value(a->value);
                }
            }
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace oamsim
