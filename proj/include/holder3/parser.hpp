#pragma once

// Recursive-descent parser for defining functions and curves.
//
// Grammar (whitespace-insensitive, '#' starts a line comment):
//   expr    := term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' INTEGER)?
//   atom    := NUMBER ('/' NUMBER)? | 'i' | VAR | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := conj | Re | Im | abs2          (abs2(e) = e*conj(e))
//   VAR     := z1 | z2 | z3                    (defining functions)
//              t                               (curve components)
// Number literals are exact: integers, decimals (0.25 -> 1/4) and integer
// ratios (3/7).  '/' is not a general operator.

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "holder3/curve.hpp"
#include "holder3/mixed_poly.hpp"

namespace holder3 {

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size()) {
            char ch = src_[pos_];
            if (ch == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            if (ch == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++col_;
                ++pos_;
                continue;
            }
            break;
        }
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, "", line_, col_};
            return;
        }
        char ch = src_[pos_];
        auto single = [&](Tok k) {
            cur_ = {k, std::string(1, ch), line_, col_};
            ++pos_;
            ++col_;
        };
        switch (ch) {
            case '+': single(Tok::Plus); return;
            case '-': single(Tok::Minus); return;
            case '*': single(Tok::Star); return;
            case '/': single(Tok::Slash); return;
            case '^': single(Tok::Caret); return;
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string s;
            int c0 = col_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '.')) {
                s += src_[pos_++];
                ++col_;
            }
            cur_ = {Tok::Number, s, line_, c0};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string s;
            int c0 = col_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_')) {
                s += src_[pos_++];
                ++col_;
            }
            cur_ = {Tok::Ident, s, line_, c0};
            return;
        }
        throw ParseError(std::string("unexpected character '") + ch + "'", line_, col_);
    }

    std::string src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_{Tok::End, ""};
};

}  // namespace detail

class ExprParser {
  public:
    // mode: 3 complex variables z1..z3, or the single curve parameter t.
    enum class Mode { Domain, Curve };

    ExprParser(const std::string& src, Mode mode, int degree_cap)
        : lex_(src), mode_(mode), cap_(degree_cap) {}

    PolyQ parse() {
        PolyQ p = expr();
        const auto& t = lex_.peek();
        if (t.kind != detail::Tok::End)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.col);
        return p;
    }

  private:
    using Tok = detail::Tok;

    PolyQ expr() {
        PolyQ p = term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            auto op = lex_.take();
            PolyQ q = term();
            p = (op.kind == Tok::Plus) ? p + q : p - q;
        }
        return p;
    }

    PolyQ term() {
        PolyQ p = factor();
        while (lex_.peek().kind == Tok::Star) {
            lex_.take();
            p = check_cap(p * factor());
        }
        return p;
    }

    PolyQ factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return -factor();
        }
        return powered();
    }

    PolyQ powered() {
        PolyQ base = atom();
        if (lex_.peek().kind == Tok::Caret) {
            auto caret = lex_.take();
            auto t = lex_.peek();
            if (t.kind != Tok::Number || t.text.find('.') != std::string::npos)
                throw ParseError("exponent must be an integer literal", caret.line,
                                 caret.col);
            lex_.take();
            long e = std::stol(t.text);
            return check_cap(power(base, static_cast<int>(e)));
        }
        return base;
    }

    PolyQ atom() {
        auto t = lex_.peek();
        switch (t.kind) {
            case Tok::Number: {
                lex_.take();
                Rational v = number_value(t);
                if (lex_.peek().kind == Tok::Slash) {
                    lex_.take();
                    auto d = lex_.peek();
                    if (d.kind != Tok::Number || d.text.find('.') != std::string::npos)
                        throw ParseError("denominator must be an integer literal", d.line,
                                         d.col);
                    lex_.take();
                    Rational den(d.text);
                    if (sgn(den) == 0) throw ParseError("division by zero", d.line, d.col);
                    v /= den;
                }
                return PolyQ::constant(CRat(v), cap_);
            }
            case Tok::LParen: {
                lex_.take();
                PolyQ p = expr();
                expect(Tok::RParen, ")");
                return p;
            }
            case Tok::Ident:
                return ident();
            default:
                throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
        }
    }

    PolyQ ident() {
        auto t = lex_.take();
        const std::string& s = t.text;
        if (s == "i") return PolyQ::constant(CRat::i(), cap_);
        if (mode_ == Mode::Domain) {
            if (s == "z1") return PolyQ::variable(0, cap_);
            if (s == "z2") return PolyQ::variable(1, cap_);
            if (s == "z3") return PolyQ::variable(2, cap_);
        } else {
            if (s == "t") return PolyQ::variable(0, cap_);
            if (s == "conj" || s == "Re" || s == "Im" || s == "abs2")
                throw ParseError("'" + s + "' is not allowed in a holomorphic curve",
                                 t.line, t.col);
        }
        if (s == "conj" || s == "Re" || s == "Im" || s == "abs2") {
            expect(Tok::LParen, "(");
            PolyQ arg = expr();
            expect(Tok::RParen, ")");
            if (s == "conj") return arg.conjugated();
            if (s == "abs2") return check_cap(arg * arg.conjugated());
            if (s == "Re") return (arg + arg.conjugated()).scaled(CRat(Rational(1, 2)));
            // Im(e) = (e - conj(e)) / (2i)
            return (arg - arg.conjugated()).scaled(CRat(Rational(0), Rational(-1, 2)));
        }
        throw ParseError("unknown identifier '" + s + "'", t.line, t.col);
    }

    Rational number_value(const detail::Token& t) {
        auto dot = t.text.find('.');
        if (dot == std::string::npos) return Rational(t.text);
        std::string ip = t.text.substr(0, dot), fp = t.text.substr(dot + 1);
        if (fp.find('.') != std::string::npos)
            throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
        if (ip.empty()) ip = "0";
        return rational_from_decimal(ip, fp);
    }

    PolyQ check_cap(PolyQ p) {
        if (p.truncated())
            throw ParseError("expression degree exceeds the jet cap " +
                                 std::to_string(cap_),
                             lex_.peek().line, lex_.peek().col);
        return p;
    }

    void expect(Tok k, const char* what) {
        auto t = lex_.peek();
        if (t.kind != k) throw ParseError(std::string("expected '") + what + "'",
                                          t.line, t.col);
        lex_.take();
    }

    detail::Lexer lex_;
    Mode mode_;
    int cap_;
};

// Parses a defining function and verifies real-valuedness (Hermitian scan).
inline PolyQ parse_defining_function(const std::string& text, int degree_cap) {
    PolyQ p = ExprParser(text, ExprParser::Mode::Domain, degree_cap).parse();
    if (!p.is_hermitian())
        throw ParseError("expression is not real-valued (Hermitian scan failed)", 1, 1);
    return p;
}

// A curve file holds three component expressions in t, separated by newlines
// or semicolons.
inline CurveJet parse_curve(const std::string& text, int jet_order) {
    std::vector<std::string> parts;
    std::string cur;
    bool in_comment = false;
    for (char ch : text) {
        if (ch == '#') in_comment = true;
        if (ch == '\n' || ch == ';') {
            in_comment = false;
            parts.push_back(cur);
            cur.clear();
            continue;
        }
        if (!in_comment) cur += ch;
    }
    parts.push_back(cur);
    std::vector<std::string> comps;
    for (auto& s : parts)
        if (s.find_first_not_of(" \t\r") != std::string::npos) comps.push_back(s);
    if (comps.size() != 3)
        throw ParseError("curve needs exactly 3 components, got " +
                             std::to_string(comps.size()),
                         1, 1);
    CurveJet g;
    g.jet_order = jet_order;
    for (int i = 0; i < 3; ++i)
        g.comp[i] = ExprParser(comps[i], ExprParser::Mode::Curve, jet_order).parse();
    if (!g.vanishes_at_origin())
        throw ParseError("curve must pass through the origin (gamma(0) = 0)", 1, 1);
    return g;
}

}  // namespace holder3
