#pragma once

#include "jetspace.hpp"

#include <cctype>
#include <map>
#include <string>

namespace jetvar {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t offset)
        : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

/// Names visible to the expression grammar: the bundle coordinates and
/// functions plus named definitions, which are inlined as they are parsed.
struct ParseContext {
    const BundleSpec* bundle = nullptr;
    std::map<std::string, Expr> definitions;
};

namespace detail {

class ExprParser {
public:
    ExprParser(const std::string& text, const ParseContext& ctx) : text_(text), ctx_(ctx) {}

    Expr parse_full() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    Expr parse_expr() {
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (text_[pos_++] == '-');
        Expr acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Expr t = parse_term();
                acc = (c == '+') ? acc + t : acc - t;
            } else
                break;
        }
        return acc;
    }

    Expr parse_term() {
        Expr acc = parse_factor();
        while (true) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos_;
                size_t at = pos_;
                Expr f = parse_factor();
                if (c == '*') acc = acc * f;
                else {
                    auto q = f.as_constant();
                    if (!q) throw ParseError("division by a non-constant", at);
                    if (*q == 0) throw ParseError("division by zero", at);
                    acc = (Rational(1) / *q) * acc;
                }
            } else
                break;
        }
        return acc;
    }

    Expr parse_factor() {
        Expr base = parse_base();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            size_t at = pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError("expected positive integer exponent", at);
            long n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                n = n * 10 + (text_[pos_++] - '0');
            if (n < 1) throw ParseError("expected positive integer exponent", at);
            return base.pow(static_cast<int>(n));
        }
        return base;
    }

    Expr parse_base() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                num += text_[pos_++];
            return Expr(Rational(Integer(num)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail("expected a number, name or '('");
    }

    std::string read_name() {
        skip_ws();
        if (pos_ >= text_.size() ||
            !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            fail("expected a name");
        std::string s;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            s += text_[pos_++];
        return s;
    }

    Expr parse_ident() {
        size_t at = pos_;
        std::string name = read_name();
        const BundleSpec& b = *ctx_.bundle;

        if (peek() == '[') {
            ++pos_;
            MultiIndex rec(b.m);
            while (true) {
                size_t axat = pos_;
                std::string ax = read_name();
                int axis = b.base_axis(ax);
                if (axis < 0) throw ParseError("'" + ax + "' is not a base coordinate", axat);
                rec = rec.incremented(axis);
                if (consume(',')) continue;
                if (consume(']')) break;
                fail("expected ',' or ']'");
            }
            if (int fib = b.fiber_index(name); fib >= 0) {
                if (rec.order() > b.k)
                    throw ParseError("derivative order exceeds the declared jet order", at);
                return Expr(Atom::jet_coord(fib, rec));
            }
            if (const OpaqueFnDecl* fn = b.function(name)) {
                for (int i = 0; i < b.m; ++i)
                    if (rec[i] > 0 && !b.fn_depends_on(name, i))
                        throw ParseError("function '" + name + "' does not depend on '" +
                                             b.base_names[static_cast<size_t>(i)] + "'",
                                         at);
                return Expr(Atom::opaque(name, rec));
            }
            throw ParseError("'" + name + "' does not take derivative indices", at);
        }

        if (int axis = b.base_axis(name); axis >= 0) return Expr(Atom::base_coord(axis));
        if (int fib = b.fiber_index(name); fib >= 0)
            return Expr(Atom::jet_coord(fib, MultiIndex(b.m)));
        if (b.function(name)) return Expr(Atom::opaque(name, MultiIndex(b.m)));
        if (auto it = ctx_.definitions.find(name); it != ctx_.definitions.end())
            return it->second;
        throw ParseError("unknown identifier '" + name + "'", at);
    }

    const std::string& text_;
    const ParseContext& ctx_;
    size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expr(const std::string& text, const ParseContext& ctx) {
    if (!ctx.bundle) throw std::invalid_argument("parse context requires a bundle");
    return detail::ExprParser(text, ctx).parse_full();
}

} // namespace jetvar
