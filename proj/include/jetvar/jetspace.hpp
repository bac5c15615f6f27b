#pragma once

#include "expr.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace jetvar {

/// A declared base function (pressure, viscosity, ...) kept opaque: the
/// engine only tracks which base coordinates it depends on and how often it
/// has been differentiated along each.
struct OpaqueFnDecl {
    std::string name;
    std::vector<int> deps; // base axes the function depends on
};

struct BundleSpec {
    int m = 1; // base dimension
    int n = 1; // fiber dimension
    int k = 1; // jet order
    std::vector<std::string> base_names;
    std::vector<std::string> fiber_names;
    std::vector<OpaqueFnDecl> functions;

    int base_axis(const std::string& s) const {
        for (size_t i = 0; i < base_names.size(); ++i)
            if (base_names[i] == s) return static_cast<int>(i);
        return -1;
    }
    int fiber_index(const std::string& s) const {
        for (size_t i = 0; i < fiber_names.size(); ++i)
            if (fiber_names[i] == s) return static_cast<int>(i);
        return -1;
    }
    const OpaqueFnDecl* function(const std::string& s) const {
        for (const auto& f : functions)
            if (f.name == s) return &f;
        return nullptr;
    }
    bool fn_depends_on(const std::string& fn, int axis) const {
        const OpaqueFnDecl* d = function(fn);
        if (!d) return true; // unknown functions are treated as fully dependent
        for (int a : d->deps)
            if (a == axis) return true;
        return false;
    }

    void validate() const {
        if (m < 1 || n < 1 || k < 1)
            throw std::invalid_argument("bundle requires m, n, k >= 1");
        if (static_cast<int>(base_names.size()) != m ||
            static_cast<int>(fiber_names.size()) != n)
            throw std::invalid_argument("coordinate name count mismatch");
        std::set<std::string> seen;
        for (const auto& s : base_names)
            if (!seen.insert(s).second) throw std::invalid_argument("duplicate name: " + s);
        for (const auto& s : fiber_names)
            if (!seen.insert(s).second) throw std::invalid_argument("duplicate name: " + s);
        for (const auto& f : functions)
            if (!seen.insert(f.name).second) throw std::invalid_argument("duplicate name: " + f.name);
    }
};

/// dim J^k pi = m + n * sum_{l=0}^{k} binom(m-1+l, m-1).
inline Integer jet_dimension(int m, int n, int k) {
    if (m < 1 || n < 1 || k < 0) throw std::invalid_argument("jet_dimension requires m, n >= 1, k >= 0");
    Integer s = 0;
    for (int l = 0; l <= k; ++l) s += binomial(m - 1 + l, m - 1);
    return Integer(m) + Integer(n) * s;
}

/// All x^i, then all u^alpha_J with |J| <= r, fiber-major in canonical order.
inline std::vector<Atom> jet_coordinates(const BundleSpec& b, int r) {
    if (r < 0 || r > b.k) throw std::invalid_argument("jet order out of range");
    std::vector<Atom> out;
    for (int i = 0; i < b.m; ++i) out.push_back(Atom::base_coord(i));
    for (int alpha = 0; alpha < b.n; ++alpha)
        for (const auto& J : multiindexes_up_to(b.m, r))
            out.push_back(Atom::jet_coord(alpha, J));
    return out;
}

/// Partial derivative along base axis i of a function on jet space:
/// differentiates explicit base-coordinate occurrences and advances the
/// derivative records of opaque functions and base multipliers. Jet
/// coordinates are independent of x^i here; the chain terms belong to the
/// total derivative.
inline Expr base_partial(const Expr& e, int i, const BundleSpec& b) {
    Expr out;
    for (const auto& [mono, coef] : e.terms()) {
        for (size_t f = 0; f < mono.size(); ++f) {
            const Atom& a = mono[f].first;
            Expr dfactor;
            switch (a.kind) {
                case AtomKind::base:
                    dfactor = (a.axis == i) ? Expr(1) : Expr();
                    break;
                case AtomKind::jet:
                    continue;
                case AtomKind::opaque:
                    if (!b.fn_depends_on(a.name, i)) continue;
                    dfactor = Expr(Atom::opaque(a.name, a.index.incremented(i)));
                    break;
                case AtomKind::multiplier_base:
                    dfactor = Expr(Atom::multiplier_base(a.name, a.index.incremented(i)));
                    break;
                default:
                    throw std::domain_error(
                        "base-coordinate derivative undefined for velocity-momentum atoms");
            }
            if (dfactor.is_zero()) continue;
            Expr rest(coef * Rational(mono[f].second));
            for (size_t g = 0; g < mono.size(); ++g) {
                int exp = mono[g].second - (g == f ? 1 : 0);
                if (exp > 0) rest = rest * Expr(mono[g].first).pow(exp);
            }
            out += rest * dfactor;
        }
    }
    return out;
}

/// The coordinate total derivative D_i = d/dx^i + u^alpha_{I+1_i} d/du^alpha_I.
/// Defined on expressions in base, jet, opaque and base-multiplier atoms; the
/// result lives one jet order higher.
inline Expr total_derivative(const Expr& e, int i, const BundleSpec& b) {
    for (const Atom& a : e.atoms())
        if (!is_differentiable_by_base(a))
            throw std::domain_error("total derivative is defined on jet coordinates and base "
                                    "functions only");
    Expr out = base_partial(e, i, b);
    for (const Atom& a : e.atoms())
        if (a.kind == AtomKind::jet)
            out += Expr(Atom::jet_coord(a.fiber, a.index.incremented(i))) * e.partial(a);
    return out;
}

/// D applied once per unit of J, in axis order. Total derivatives commute, so
/// the application order is immaterial.
inline Expr total_derivative_multi(Expr e, const MultiIndex& J, const BundleSpec& b) {
    for (int i = 0; i < J.size(); ++i)
        for (int r = 0; r < J[i]; ++r) e = total_derivative(e, i, b);
    return e;
}

struct VectorFieldSpec {
    std::vector<Expr> xi_base;  // xi^i over base coordinates and opaque atoms
    std::vector<Expr> xi_fiber; // xi^alpha on J^0

    bool is_vertical() const {
        for (const auto& e : xi_base)
            if (!e.is_zero()) return false;
        return true;
    }
    void validate(const BundleSpec& b) const {
        if (static_cast<int>(xi_base.size()) != b.m ||
            static_cast<int>(xi_fiber.size()) != b.n)
            throw std::invalid_argument("vector field component count mismatch");
        for (const auto& e : xi_base)
            for (const Atom& a : e.atoms())
                if (a.kind != AtomKind::base && a.kind != AtomKind::opaque)
                    throw std::invalid_argument("xi^i must live over the base");
        for (const auto& e : xi_fiber) {
            for (const Atom& a : e.atoms()) {
                bool ok = a.kind == AtomKind::base || a.kind == AtomKind::opaque ||
                          (a.kind == AtomKind::jet && a.index.is_zero());
                if (!ok) throw std::invalid_argument("xi^alpha must live on J^0");
            }
        }
    }
};

/// Components xi^alpha_J of the r-th lift, via the recursion
/// xi^alpha_{I+1_i} = D_i xi^alpha_I - u^alpha_{I+1_j} D_i xi^j.
struct ProlongedField {
    std::map<std::pair<int, MultiIndex>, Expr> components; // (alpha, J) -> xi^alpha_J
};

inline ProlongedField prolong_vector_field(const VectorFieldSpec& xi, int r, const BundleSpec& b) {
    xi.validate(b);
    if (r < 0 || r > b.k) throw std::invalid_argument("prolongation order out of range");
    ProlongedField out;
    for (int alpha = 0; alpha < b.n; ++alpha)
        out.components[{alpha, MultiIndex(b.m)}] = xi.xi_fiber[static_cast<size_t>(alpha)];
    for (int l = 1; l <= r; ++l)
        for (const auto& J : multiindexes_of_order(b.m, l))
            for (int alpha = 0; alpha < b.n; ++alpha) {
                const auto [I, i] = decompositions(J).front();
                Expr comp = total_derivative(out.components.at({alpha, I}), i, b);
                for (int j = 0; j < b.m; ++j) {
                    Expr dxj = total_derivative(xi.xi_base[static_cast<size_t>(j)], i, b);
                    if (!dxj.is_zero())
                        comp -= Expr(Atom::jet_coord(alpha, I.incremented(j))) * dxj;
                }
                out.components[{alpha, J}] = comp;
            }
    return out;
}

/// A section x -> u(x) with polynomial components over the base coordinates.
struct PolynomialSection {
    std::vector<Expr> components; // one per fiber coordinate, base atoms only

    void validate(const BundleSpec& b) const {
        if (static_cast<int>(components.size()) != b.n)
            throw std::invalid_argument("section component count mismatch");
        for (const auto& e : components)
            for (const Atom& a : e.atoms())
                if (a.kind != AtomKind::base && a.kind != AtomKind::opaque)
                    throw std::invalid_argument("section components must be polynomial in the "
                                                "base coordinates");
    }
};

/// u^alpha_J composed with the lift of the section: the J-th partial
/// derivative of the section component.
inline Expr section_jet_value(const PolynomialSection& s, int alpha, const MultiIndex& J,
                              const BundleSpec& b) {
    Expr e = s.components.at(static_cast<size_t>(alpha));
    for (int i = 0; i < J.size(); ++i)
        for (int r = 0; r < J[i]; ++r) e = base_partial(e, i, b);
    return e;
}

/// Evaluate a jet-space expression along the lift of a section: every
/// u^alpha_J is replaced by the corresponding derivative of the section.
inline Expr evaluate_on_section(const Expr& e, const PolynomialSection& s, const BundleSpec& b) {
    std::map<Atom, Expr> bind;
    for (const Atom& a : e.atoms())
        if (a.kind == AtomKind::jet)
            bind[a] = section_jet_value(s, a.fiber, a.index, b);
    return e.substitute(bind);
}

/// A one-form c_{alpha,I} du^alpha_I + c_i dx^i given by its coefficient
/// functions; used to express pullback checks without form calculus.
struct OneFormSpec {
    std::map<std::pair<int, MultiIndex>, Expr> du_coeffs;
    std::vector<Expr> dx_coeffs;
};

/// Coefficients of dx^i in the pullback of the form by the lifted section.
inline std::vector<Expr> one_form_pullback_residual(const OneFormSpec& form,
                                                    const PolynomialSection& s,
                                                    const BundleSpec& b) {
    s.validate(b);
    std::vector<Expr> res(static_cast<size_t>(b.m));
    for (int i = 0; i < b.m; ++i) {
        Expr r;
        if (!form.dx_coeffs.empty())
            r += evaluate_on_section(form.dx_coeffs.at(static_cast<size_t>(i)), s, b);
        for (const auto& [key, coeff] : form.du_coeffs) {
            const auto& [alpha, I] = key;
            Expr c = evaluate_on_section(coeff, s, b);
            r += c * base_partial(section_jet_value(s, alpha, I, b), i, b);
        }
        res[static_cast<size_t>(i)] = r;
    }
    return res;
}

/// Whether the contact form theta^alpha_I = du^alpha_I - u^alpha_{I+1_i} dx^i
/// pulls back to zero along the lift of the section.
inline bool contact_pullback_check(int alpha, const MultiIndex& I, const PolynomialSection& s,
                                   const BundleSpec& b) {
    if (I.order() > b.k - 1) throw std::invalid_argument("contact form index must have |I| <= k-1");
    OneFormSpec theta;
    theta.du_coeffs[{alpha, I}] = Expr(1);
    theta.dx_coeffs.assign(static_cast<size_t>(b.m), Expr());
    for (int i = 0; i < b.m; ++i)
        theta.dx_coeffs[static_cast<size_t>(i)] = -Expr(Atom::jet_coord(alpha, I.incremented(i)));
    for (const Expr& r : one_form_pullback_residual(theta, s, b))
        if (!r.is_zero()) return false;
    return true;
}

} // namespace jetvar
