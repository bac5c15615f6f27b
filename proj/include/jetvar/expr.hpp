#pragma once

#include "symbols.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace jetvar {

/// A power product of atoms: factors sorted by atom, exponents >= 1.
using Monomial = std::vector<std::pair<Atom, int>>;

inline int monomial_degree(const Monomial& m) {
    int d = 0;
    for (const auto& [a, e] : m) d += e;
    return d;
}

/// Graded lexicographic order over the fixed atom order; greater = leading.
inline std::strong_ordering monomial_order(const Monomial& x, const Monomial& y) {
    if (auto c = monomial_degree(x) <=> monomial_degree(y); c != 0) return c;
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i].first != y[i].first)
            // the monomial holding the smaller atom dominates
            return (x[i].first < y[i].first) ? std::strong_ordering::greater
                                             : std::strong_ordering::less;
        if (x[i].second != y[i].second) return x[i].second <=> y[i].second;
    }
    return x.size() <=> y.size();
}

namespace detail {
struct MonoDescCmp {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return monomial_order(a, b) == std::strong_ordering::greater;
    }
};
} // namespace detail

/// Canonical multivariate polynomial over atoms with exact rational
/// coefficients. Terms are kept sorted leading-first with no zero
/// coefficients, so two expressions are mathematically equal iff their
/// representations are identical.
class Expr {
public:
    using Term = std::pair<Monomial, Rational>;

    Expr() = default;
    Expr(const Rational& c) { if (c != 0) terms_.emplace_back(Monomial{}, c); }
    Expr(int c) : Expr(Rational(c)) {}
    Expr(const Atom& a) { terms_.emplace_back(Monomial{{a, 1}}, Rational(1)); }

    static Expr from_map(std::map<Monomial, Rational, detail::MonoDescCmp>&& acc) {
        Expr e;
        for (auto& [m, c] : acc)
            if (c != 0) e.terms_.emplace_back(m, std::move(c));
        return e;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t num_terms() const { return terms_.size(); }

    std::optional<Rational> as_constant() const {
        if (terms_.empty()) return Rational(0);
        if (terms_.size() == 1 && terms_[0].first.empty()) return terms_[0].second;
        return std::nullopt;
    }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
        return d;
    }

    Rational leading_coefficient() const {
        return terms_.empty() ? Rational(0) : terms_.front().second;
    }
    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw std::logic_error("leading monomial of zero expression");
        return terms_.front().first;
    }

    bool operator==(const Expr& o) const { return terms_ == o.terms_; }

    Expr operator-() const {
        Expr r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Expr& operator+=(const Expr& o) { *this = *this + o; return *this; }
    Expr& operator-=(const Expr& o) { *this = *this + (-o); return *this; }
    Expr& operator*=(const Expr& o) { *this = *this * o; return *this; }

    friend Expr operator+(const Expr& x, const Expr& y) {
        std::map<Monomial, Rational, detail::MonoDescCmp> acc;
        for (const auto& [m, c] : x.terms_) acc[m] += c;
        for (const auto& [m, c] : y.terms_) acc[m] += c;
        return from_map(std::move(acc));
    }
    friend Expr operator-(const Expr& x, const Expr& y) { return x + (-y); }

    friend Expr operator*(const Expr& x, const Expr& y) {
        std::map<Monomial, Rational, detail::MonoDescCmp> acc;
        for (const auto& [mx, cx] : x.terms_)
            for (const auto& [my, cy] : y.terms_) acc[mul(mx, my)] += cx * cy;
        return from_map(std::move(acc));
    }

    friend Expr operator*(const Rational& c, const Expr& x) {
        if (c == 0) return Expr();
        Expr r = x;
        for (auto& [m, coef] : r.terms_) coef *= c;
        return r;
    }
    friend Expr operator*(const Expr& x, const Rational& c) { return c * x; }

    Expr pow(int n) const {
        if (n < 0) throw std::invalid_argument("negative exponent");
        Expr r(1);
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    /// Formal partial derivative treating all distinct atoms as independent.
    Expr partial(const Atom& s) const {
        std::map<Monomial, Rational, detail::MonoDescCmp> acc;
        for (const auto& [m, c] : terms_)
            for (size_t i = 0; i < m.size(); ++i) {
                if (!(m[i].first == s)) continue;
                Monomial d = m;
                Rational coef = c * m[i].second;
                if (d[i].second == 1) d.erase(d.begin() + static_cast<long>(i));
                else d[i].second -= 1;
                acc[d] += coef;
                break; // atoms are unique within a monomial
            }
        return from_map(std::move(acc));
    }

    /// Simultaneous substitution of atoms by expressions, then
    /// canonicalization. Bindings must be acyclic.
    Expr substitute(const std::map<Atom, Expr>& bindings) const {
        check_acyclic(bindings);
        std::map<Monomial, Rational, detail::MonoDescCmp> acc;
        for (const auto& [m, c] : terms_) {
            Expr prod(c);
            for (const auto& [a, e] : m) {
                auto it = bindings.find(a);
                Expr basee = (it == bindings.end()) ? Expr(a) : it->second;
                prod = prod * basee.pow(e);
            }
            for (const auto& [pm, pc] : prod.terms_) acc[pm] += pc;
        }
        return from_map(std::move(acc));
    }

    std::set<Atom> atoms() const {
        std::set<Atom> s;
        for (const auto& [m, c] : terms_)
            for (const auto& [a, e] : m) s.insert(a);
        return s;
    }

    bool contains_kind(AtomKind k) const {
        for (const auto& [m, c] : terms_)
            for (const auto& [a, e] : m)
                if (a.kind == k) return true;
        return false;
    }

    /// Highest |J| over jet atoms; 0 when no jet atom occurs. This is the
    /// minimal jet order the expression lives on.
    int max_jet_order() const {
        int r = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [a, e] : m)
                if (a.kind == AtomKind::jet) r = std::max(r, a.index.order());
        return r;
    }

private:
    static Monomial mul(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].first == b[j].first) {
                r.emplace_back(a[i].first, a[i].second + b[j].second);
                ++i; ++j;
            } else if (a[i].first < b[j].first) r.push_back(a[i++]);
            else r.push_back(b[j++]);
        }
        for (; i < a.size(); ++i) r.push_back(a[i]);
        for (; j < b.size(); ++j) r.push_back(b[j]);
        return r;
    }

    static void check_acyclic(const std::map<Atom, Expr>& bindings) {
        // edge a -> b when the image of a mentions the bound atom b;
        // an exact identity binding (a -> a) is a harmless no-op
        std::map<Atom, int> state; // 0 unvisited, 1 on stack, 2 done
        std::function<void(const Atom&)> visit = [&](const Atom& a) {
            int& st = state[a];
            if (st == 1) throw std::invalid_argument("cyclic substitution bindings");
            if (st == 2) return;
            st = 1;
            const Expr& img = bindings.at(a);
            if (!(img == Expr(a)))
                for (const Atom& b : img.atoms())
                    if (bindings.count(b)) visit(b);
            state[a] = 2;
        };
        for (const auto& [a, img] : bindings)
            if (state[a] == 0) visit(a);
    }

    std::vector<Term> terms_;
};

/// Representation identity; with canonical expressions this is mathematical
/// polynomial equality over the atoms.
inline bool equal_canonical(const Expr& a, const Expr& b) { return a == b; }

/// Returns c != 0 with a = c*b when such a rational exists.
inline std::optional<Rational> equal_up_to_scale(const Expr& a, const Expr& b) {
    if (a.is_zero() && b.is_zero()) return Rational(1);
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    if (a.num_terms() != b.num_terms()) return std::nullopt;
    Rational c = a.leading_coefficient() / b.leading_coefficient();
    if (a == c * b) return c;
    return std::nullopt;
}

/// Exact division of polynomials: returns q with n = q*d. Throws when the
/// division is not exact. Used by fraction-free elimination.
inline Expr divide_exact(const Expr& n, const Expr& d) {
    if (d.is_zero()) throw std::domain_error("division by zero expression");
    Expr rem = n, quot;
    while (!rem.is_zero()) {
        const Monomial& lm = rem.leading_monomial();
        const Monomial& dm = d.leading_monomial();
        // leading-term quotient
        Monomial qm;
        size_t i = 0, j = 0;
        bool divisible = true;
        while (j < dm.size()) {
            if (i >= lm.size()) { divisible = false; break; }
            if (lm[i].first == dm[j].first) {
                if (lm[i].second < dm[j].second) { divisible = false; break; }
                if (lm[i].second > dm[j].second) qm.emplace_back(lm[i].first, lm[i].second - dm[j].second);
                ++i; ++j;
            } else if (lm[i].first < dm[j].first) {
                qm.push_back(lm[i]);
                ++i;
            } else { divisible = false; break; }
        }
        if (!divisible) throw std::domain_error("inexact polynomial division");
        for (; i < lm.size(); ++i) qm.push_back(lm[i]);
        Expr qt;
        {
            std::map<Monomial, Rational, detail::MonoDescCmp> one;
            one[qm] = rem.leading_coefficient() / d.leading_coefficient();
            qt = Expr::from_map(std::move(one));
        }
        quot += qt;
        rem -= qt * d;
    }
    return quot;
}

} // namespace jetvar
