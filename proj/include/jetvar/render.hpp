#pragma once

#include "equations.hpp"
#include "jetspace.hpp"

#include <sstream>
#include <string>

namespace jetvar {

enum class Format { text, latex, json };

inline Format format_from_string(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "latex") return Format::latex;
    if (s == "json") return Format::json;
    throw std::invalid_argument("unknown format '" + s + "' (expected text, latex or json)");
}

namespace detail {

inline std::string momentum_letter(int fiber) {
    if (fiber == 0) return "p";
    if (fiber == 1) return "q";
    return "p" + std::to_string(fiber);
}

inline std::string coeff_letter(int fiber) {
    if (fiber == 0) return "B";
    if (fiber == 1) return "D";
    return "B" + std::to_string(fiber);
}

inline std::string axes_word(const MultiIndex& I, const BundleSpec& b) {
    std::string s;
    for (int i = 0; i < I.size(); ++i)
        for (int r = 0; r < I[i]; ++r) s += b.base_names[static_cast<size_t>(i)];
    return s;
}

inline std::string axes_list(const MultiIndex& I, const BundleSpec& b) {
    std::string s;
    for (int i = 0; i < I.size(); ++i)
        for (int r = 0; r < I[i]; ++r) {
            if (!s.empty()) s += ',';
            s += b.base_names[static_cast<size_t>(i)];
        }
    return s;
}

inline std::string atom_text(const Atom& a, const BundleSpec& b) {
    switch (a.kind) {
        case AtomKind::base:
            return b.base_names[static_cast<size_t>(a.axis)];
        case AtomKind::jet: {
            std::string s = b.fiber_names[static_cast<size_t>(a.fiber)];
            if (!a.index.is_zero()) s += "[" + axes_list(a.index, b) + "]";
            return s;
        }
        case AtomKind::momentum:
            return momentum_letter(a.fiber) + "^" + axes_word(a.index, b) +
                   b.base_names[static_cast<size_t>(a.axis)];
        case AtomKind::energy:
            return "p";
        case AtomKind::multiplier_base: {
            std::string s = a.name;
            if (!a.index.is_zero()) s += "[" + axes_list(a.index, b) + "]";
            return s;
        }
        case AtomKind::multiplier_fiber:
            return a.name;
        case AtomKind::opaque: {
            std::string s = a.name;
            if (!a.index.is_zero()) s += "[" + axes_list(a.index, b) + "]";
            return s;
        }
        case AtomKind::coefficient:
            switch (a.cc) {
                case CoeffClass::A:
                    return "A^" + b.fiber_names[static_cast<size_t>(a.fiber)] + "_{" +
                           (a.index.is_zero() ? "0" : axes_word(a.index, b)) + "|" +
                           b.base_names[static_cast<size_t>(a.j)] + "}";
                case CoeffClass::B:
                    return coeff_letter(a.fiber) + "^" + axes_word(a.index, b) +
                           b.base_names[static_cast<size_t>(a.axis)] + "_" +
                           b.base_names[static_cast<size_t>(a.j)];
                case CoeffClass::C:
                    return "C_" + b.base_names[static_cast<size_t>(a.j)];
            }
    }
    return "?";
}

inline std::string latex_sym(const std::string& name) {
    static const std::map<std::string, std::string> greek = {
        {"nu", "\\nu"},   {"Pi", "\\Pi"},     {"pi", "\\pi"},     {"mu", "\\mu"},
        {"rho", "\\rho"}, {"sigma", "\\sigma"}, {"tau", "\\tau"}, {"phi", "\\phi"},
        {"psi", "\\psi"}, {"theta", "\\theta"}, {"eps", "\\epsilon"}};
    auto it = greek.find(name);
    return it == greek.end() ? name : it->second;
}

inline std::string multiplier_latex(const std::string& tag) {
    if (tag.rfind("lam", 0) == 0) {
        std::string rest = tag.substr(3);
        if (!rest.empty() && rest[0] == '_') rest = rest.substr(1);
        return rest.empty() ? "\\lambda" : "\\lambda_{" + rest + "}";
    }
    return latex_sym(tag);
}

inline std::string atom_latex(const Atom& a, const BundleSpec& b) {
    switch (a.kind) {
        case AtomKind::base:
            return b.base_names[static_cast<size_t>(a.axis)];
        case AtomKind::jet: {
            std::string s = latex_sym(b.fiber_names[static_cast<size_t>(a.fiber)]);
            if (!a.index.is_zero()) s += "_{" + axes_word(a.index, b) + "}";
            return s;
        }
        case AtomKind::momentum:
            return momentum_letter(a.fiber) + "^{" + axes_word(a.index, b) +
                   b.base_names[static_cast<size_t>(a.axis)] + "}";
        case AtomKind::energy:
            return "p";
        case AtomKind::multiplier_base: {
            std::string s = multiplier_latex(a.name);
            if (!a.index.is_zero())
                s = "\\partial^{" + std::to_string(a.index.order()) + "}_{" +
                    axes_word(a.index, b) + "}" + s;
            return s;
        }
        case AtomKind::multiplier_fiber:
            return multiplier_latex(a.name);
        case AtomKind::opaque: {
            std::string s = latex_sym(a.name);
            if (!a.index.is_zero())
                s = "\\partial^{" + std::to_string(a.index.order()) + "}_{" +
                    axes_word(a.index, b) + "}" + s;
            return s;
        }
        case AtomKind::coefficient:
            switch (a.cc) {
                case CoeffClass::A:
                    return "A^{" + latex_sym(b.fiber_names[static_cast<size_t>(a.fiber)]) +
                           "}_{" + axes_word(a.index, b) +
                           b.base_names[static_cast<size_t>(a.j)] + "}";
                case CoeffClass::B:
                    return coeff_letter(a.fiber) + "^{" + axes_word(a.index, b) +
                           b.base_names[static_cast<size_t>(a.axis)] + "}_{" +
                           b.base_names[static_cast<size_t>(a.j)] + "}";
                case CoeffClass::C:
                    return "C_{" + b.base_names[static_cast<size_t>(a.j)] + "}";
            }
    }
    return "?";
}

inline std::string rational_text(const Rational& q) { return q.str(); }

inline std::string rational_latex(const Rational& q) {
    Integer num = boost::multiprecision::numerator(q);
    Integer den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    std::string sign = num < 0 ? "-" : "";
    if (num < 0) num = -num;
    return sign + "\\tfrac{" + num.str() + "}{" + den.str() + "}";
}

} // namespace detail

inline std::string render_text(const Expr& e, const BundleSpec& b) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, coef] : e.terms()) {
        Rational c = coef;
        if (first) {
            if (c < 0) { os << "-"; c = -c; }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool needs_coeff = (c != 1) || mono.empty();
        if (needs_coeff) os << detail::rational_text(c);
        bool started = needs_coeff;
        for (const auto& [a, exp] : mono) {
            if (started) os << "*";
            os << detail::atom_text(a, b);
            if (exp > 1) os << "^" << exp;
            started = true;
        }
    }
    return os.str();
}

inline std::string render_latex(const Expr& e, const BundleSpec& b) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, coef] : e.terms()) {
        Rational c = coef;
        if (first) {
            if (c < 0) { os << "-"; c = -c; }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool needs_coeff = (c != 1) || mono.empty();
        if (needs_coeff) os << detail::rational_latex(c);
        bool started = needs_coeff;
        for (const auto& [a, exp] : mono) {
            if (started) os << " ";
            os << detail::atom_latex(a, b);
            if (exp > 1) os << "^{" << exp << "}";
            started = true;
        }
    }
    return os.str();
}

inline std::string render_expr(const Expr& e, const BundleSpec& b, Format f) {
    return f == Format::latex ? render_latex(e, b) : render_text(e, b);
}

inline std::string render_equation(const Equation& eq, const BundleSpec& b, Format f) {
    if (f == Format::latex)
        return render_latex(eq.lhs, b) + " &= " + render_latex(eq.rhs, b);
    return render_text(eq.lhs, b) + " = " + render_text(eq.rhs, b);
}

} // namespace jetvar
