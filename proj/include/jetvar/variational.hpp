#pragma once

#include "jetspace.hpp"

#include <set>
#include <string>
#include <vector>

namespace jetvar {

inline void validate_lagrangian(const Expr& L, const BundleSpec& b) {
    for (const Atom& a : L.atoms()) {
        switch (a.kind) {
            case AtomKind::base:
            case AtomKind::opaque:
                break;
            case AtomKind::jet:
                if (a.index.order() > b.k)
                    throw std::invalid_argument("Lagrangian references jet order above k");
                break;
            default:
                throw std::invalid_argument("Lagrangian may only reference base, jet and "
                                            "declared-function atoms");
        }
    }
}

namespace detail {

/// Multi-indexes J for which d/du^alpha_J of any listed expression is
/// non-zero, per fiber index.
inline std::vector<std::set<MultiIndex>> jet_index_support(const std::vector<const Expr*>& exprs,
                                                           const BundleSpec& b) {
    std::vector<std::set<MultiIndex>> byfiber(static_cast<size_t>(b.n));
    for (const Expr* e : exprs)
        for (const Atom& a : e->atoms())
            if (a.kind == AtomKind::jet) byfiber[static_cast<size_t>(a.fiber)].insert(a.index);
    return byfiber;
}

} // namespace detail

/// EL_alpha(L) = sum_{|J|<=k} (-1)^{|J|} D^J (dL/du^alpha_J), one expression
/// per fiber index, written as "expression = 0".
inline std::vector<Expr> euler_lagrange(const Expr& L, const BundleSpec& b) {
    validate_lagrangian(L, b);
    std::vector<Expr> out(static_cast<size_t>(b.n));
    auto support = detail::jet_index_support({&L}, b);
    for (int alpha = 0; alpha < b.n; ++alpha) {
        Expr acc;
        for (const MultiIndex& J : support[static_cast<size_t>(alpha)]) {
            Expr dL = L.partial(Atom::jet_coord(alpha, J));
            Expr term = total_derivative_multi(dL, J, b);
            acc += (J.order() % 2 == 0) ? term : -term;
        }
        out[static_cast<size_t>(alpha)] = acc;
    }
    return out;
}

/// The natural-boundary set { D^I (dL/du^alpha_J) = 0 : 0 <= |I| < |J| <= k },
/// canonicalized, with vanishing and duplicate entries dropped.
inline std::vector<Expr> boundary_conditions(const Expr& L, const BundleSpec& b) {
    validate_lagrangian(L, b);
    std::vector<Expr> out;
    auto support = detail::jet_index_support({&L}, b);
    for (int alpha = 0; alpha < b.n; ++alpha)
        for (const MultiIndex& J : support[static_cast<size_t>(alpha)]) {
            if (J.order() < 1) continue;
            Expr dL = L.partial(Atom::jet_coord(alpha, J));
            for (const MultiIndex& I : multiindexes_up_to(b.m, J.order() - 1)) {
                Expr cond = total_derivative_multi(dL, I, b);
                if (cond.is_zero()) continue;
                bool dup = false;
                for (const Expr& seen : out)
                    if (seen == cond) { dup = true; break; }
                if (!dup) out.push_back(cond);
            }
        }
    return out;
}

/// First-variation decomposition: the variation density
/// sum_J (D^J xi^alpha)(dL/du^alpha_J) split into the interior part
/// xi^alpha EL_alpha(L) and per-axis boundary currents assembled with the
/// integration-by-parts coefficients.
struct VariationReport {
    Expr variation_density;
    std::vector<Expr> interior;          // per fiber index
    std::vector<Expr> boundary_currents; // per base axis
    int order = 0;

    Expr interior_total() const {
        Expr t;
        for (const Expr& e : interior) t += e;
        return t;
    }
};

inline VariationReport first_variation(const Expr& L, const VectorFieldSpec& xi,
                                       const BundleSpec& b) {
    validate_lagrangian(L, b);
    xi.validate(b);
    if (!xi.is_vertical())
        throw std::invalid_argument("first_variation requires a vertical variation field");

    VariationReport rep;
    rep.interior.resize(static_cast<size_t>(b.n));
    rep.boundary_currents.assign(static_cast<size_t>(b.m), Expr());

    std::vector<Expr> el = euler_lagrange(L, b);
    auto support = detail::jet_index_support({&L}, b);
    for (int alpha = 0; alpha < b.n; ++alpha) {
        const Expr& xia = xi.xi_fiber[static_cast<size_t>(alpha)];
        rep.interior[static_cast<size_t>(alpha)] = xia * el[static_cast<size_t>(alpha)];
        for (const MultiIndex& J : support[static_cast<size_t>(alpha)]) {
            Expr dL = L.partial(Atom::jet_coord(alpha, J));
            rep.variation_density += total_derivative_multi(xia, J, b) * dL;
            for (const auto& [Jm, i] : decompositions(J)) {
                // I_xi + I_L = J - 1_i
                for (const MultiIndex& If : multiindexes_up_to(b.m, Jm.order())) {
                    bool fits = true;
                    for (int ax = 0; ax < b.m; ++ax)
                        if (If[ax] > Jm[ax]) { fits = false; break; }
                    if (!fits || If.order() > Jm.order()) continue;
                    const MultiIndex Ig = mi_sub(Jm, If);
                    rep.boundary_currents[static_cast<size_t>(i)] +=
                        Expr(ibp_lambda(If, Ig, J)) * total_derivative_multi(xia, If, b) *
                        total_derivative_multi(dL, Ig, b);
                }
            }
        }
    }
    rep.order = rep.variation_density.max_jet_order();
    return rep;
}

/// Rational axis-aligned box, one closed interval per base coordinate.
using Box = std::vector<std::pair<Rational, Rational>>;

namespace detail {

inline void validate_base_polynomial(const Expr& e) {
    for (const Atom& a : e.atoms())
        if (a.kind != AtomKind::base)
            throw std::invalid_argument("expected a polynomial in the base coordinates");
}

/// Exact integral of a base-coordinate polynomial over the box.
inline Rational integrate_over_box(const Expr& e, const Box& box) {
    Rational total = 0;
    for (const auto& [mono, coef] : e.terms()) {
        Rational t = coef;
        std::vector<int> exps(box.size(), 0);
        for (const auto& [a, p] : mono) exps[static_cast<size_t>(a.axis)] = p;
        for (size_t i = 0; i < box.size(); ++i) {
            const auto& [lo, hi] = box[i];
            int p = exps[i] + 1;
            Rational hip = 1, lop = 1;
            for (int r = 0; r < p; ++r) { hip *= hi; lop *= lo; }
            t *= (hip - lop) / p;
        }
        total += t;
    }
    return total;
}

inline Expr evaluate_axis(const Expr& e, int axis, const Rational& v) {
    std::map<Atom, Expr> bind;
    bind[Atom::base_coord(axis)] = Expr(v);
    return e.substitute(bind);
}

/// Face integral along axis i with the outward orientation convention of
/// d^{m-1}x_i: top face minus bottom face, integrated over the other axes.
inline Rational face_integral(const Expr& e, int axis, const Box& box) {
    Box rest;
    for (size_t j = 0; j < box.size(); ++j)
        if (static_cast<int>(j) != axis) rest.push_back(box[j]);
    auto collapse = [&](const Rational& v) {
        Expr slice = evaluate_axis(e, axis, v);
        // remaining polynomial is in the other axes; reindex for integration
        Rational total = 0;
        for (const auto& [mono, coef] : slice.terms()) {
            Rational t = coef;
            std::vector<int> exps(rest.size(), 0);
            for (const auto& [a, p] : mono) {
                int pos = a.axis < axis ? a.axis : a.axis - 1;
                exps[static_cast<size_t>(pos)] = p;
            }
            for (size_t i = 0; i < rest.size(); ++i) {
                const auto& [lo, hi] = rest[i];
                int p = exps[i] + 1;
                Rational hip = 1, lop = 1;
                for (int r = 0; r < p; ++r) { hip *= hi; lop *= lo; }
                t *= (hip - lop) / p;
            }
            total += t;
        }
        return total;
    };
    return collapse(box[static_cast<size_t>(axis)].second) -
           collapse(box[static_cast<size_t>(axis)].first);
}

} // namespace detail

/// Checks the higher-order integration-by-parts identity by exact symbolic
/// integration of both sides over the box.
inline bool ibp_verify(const Expr& f, const Expr& g, const MultiIndex& J, const Box& box,
                       const BundleSpec& b) {
    detail::validate_base_polynomial(f);
    detail::validate_base_polynomial(g);
    if (static_cast<int>(box.size()) != b.m || J.size() != b.m)
        throw std::invalid_argument("box/multi-index dimension mismatch");
    for (const auto& [lo, hi] : box)
        if (lo >= hi) throw std::invalid_argument("box must be non-degenerate");

    auto dmulti = [&](const Expr& e, const MultiIndex& I) {
        Expr r = e;
        for (int i = 0; i < I.size(); ++i)
            for (int c = 0; c < I[i]; ++c) r = base_partial(r, i, b);
        return r;
    };

    Rational lhs = detail::integrate_over_box(dmulti(f, J) * g, box);
    Rational rhs = detail::integrate_over_box(f * dmulti(g, J), box);
    if (J.order() % 2 != 0) rhs = -rhs;
    for (const auto& [Jm, i] : decompositions(J))
        for (const MultiIndex& If : multiindexes_up_to(b.m, Jm.order())) {
            bool fits = true;
            for (int ax = 0; ax < b.m; ++ax)
                if (If[ax] > Jm[ax]) { fits = false; break; }
            if (!fits) continue;
            const MultiIndex Ig = mi_sub(Jm, If);
            rhs += ibp_lambda(If, Ig, J) *
                   detail::face_integral(dmulti(f, If) * dmulti(g, Ig), i, box);
        }
    return lhs == rhs;
}

/// Constrained Euler-Lagrange system: EL with dL/du^alpha_J replaced by
/// dL/du^alpha_J - lambda_mu dPsi^mu/du^alpha_J, the multipliers being opaque
/// functions of the base coordinates.
struct ConstrainedEL {
    std::vector<Expr> equations;   // one per fiber index, "expression = 0"
    std::vector<Atom> multipliers; // one base multiplier per constraint
};

inline ConstrainedEL constrained_euler_lagrange(const Expr& L, const std::vector<Expr>& psis,
                                                const BundleSpec& b,
                                                const std::vector<std::string>& tags = {}) {
    validate_lagrangian(L, b);
    for (const Expr& psi : psis) validate_lagrangian(psi, b);
    if (!tags.empty() && tags.size() != psis.size())
        throw std::invalid_argument("one multiplier tag per constraint");

    ConstrainedEL out;
    for (size_t mu = 0; mu < psis.size(); ++mu) {
        std::string tag = tags.empty() ? (psis.size() == 1 ? "lam" : "lam" + std::to_string(mu))
                                       : tags[mu];
        out.multipliers.push_back(Atom::multiplier_base(tag, MultiIndex(b.m)));
    }

    std::vector<const Expr*> all{&L};
    for (const Expr& psi : psis) all.push_back(&psi);
    auto support = detail::jet_index_support(all, b);

    out.equations.resize(static_cast<size_t>(b.n));
    for (int alpha = 0; alpha < b.n; ++alpha) {
        Expr acc;
        for (const MultiIndex& J : support[static_cast<size_t>(alpha)]) {
            const Atom uJ = Atom::jet_coord(alpha, J);
            Expr modified = L.partial(uJ);
            for (size_t mu = 0; mu < psis.size(); ++mu)
                modified -= Expr(out.multipliers[mu]) * psis[mu].partial(uJ);
            Expr term = total_derivative_multi(modified, J, b);
            acc += (J.order() % 2 == 0) ? term : -term;
        }
        out.equations[static_cast<size_t>(alpha)] = acc;
    }
    return out;
}

} // namespace jetvar
