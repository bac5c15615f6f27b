#pragma once

#include "equations.hpp"
#include "variational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jetvar {

/// A solved-form constraint u^alphahat_Jhat = Phi(x^i, free jet coordinates).
struct SolvedConstraint {
    int fiber = 0;
    MultiIndex index;
    Expr rhs; // Phi
    std::string tag;
};

struct ImplicitConstraint {
    std::string tag;
    Expr psi;
};

struct ConstraintSet {
    std::vector<SolvedConstraint> solved;
    std::vector<ImplicitConstraint> implicit;

    bool empty() const { return solved.empty() && implicit.empty(); }

    bool is_hat(int fiber, const MultiIndex& J) const {
        for (const auto& sc : solved)
            if (sc.fiber == fiber && sc.index == J) return true;
        return false;
    }

    void validate(const BundleSpec& b) const {
        for (const auto& sc : solved) {
            if (sc.fiber < 0 || sc.fiber >= b.n || sc.index.size() != b.m ||
                sc.index.order() > b.k)
                throw std::invalid_argument("solved constraint coordinate out of range");
            validate_lagrangian(sc.rhs, b);
            for (const auto& other : solved)
                for (const Atom& a : sc.rhs.atoms())
                    if (a.kind == AtomKind::jet && a.fiber == other.fiber &&
                        a.index == other.index)
                        throw std::invalid_argument(
                            "solved constraint right-hand sides may not reference dependent "
                            "coordinates");
            // fibering condition: a lower-order dependent coordinate may not be
            // expressed through top-order coordinates
            if (sc.index.order() < b.k && sc.rhs.max_jet_order() >= b.k)
                throw std::invalid_argument("constraint set does not fiber over order k-1: "
                                            "lower-order solved constraint uses order-k "
                                            "coordinates");
        }
        std::map<std::pair<int, std::string>, int> seen;
        for (const auto& sc : solved)
            if (seen[{sc.fiber, sc.index.str()}]++)
                throw std::invalid_argument("duplicate dependent coordinate");
        for (const auto& ic : implicit) validate_lagrangian(ic.psi, b);
    }

    /// Constraint functions Psi = u^hat - Phi, then the implicit entries.
    std::vector<ImplicitConstraint> as_implicit() const {
        std::vector<ImplicitConstraint> out;
        for (const auto& sc : solved)
            out.push_back({sc.tag, Expr(Atom::jet_coord(sc.fiber, sc.index)) - sc.rhs});
        for (const auto& ic : implicit) out.push_back(ic);
        return out;
    }

    std::map<Atom, Expr> solved_bindings() const {
        std::map<Atom, Expr> bind;
        for (const auto& sc : solved) bind[Atom::jet_coord(sc.fiber, sc.index)] = sc.rhs;
        return bind;
    }

    /// Free coordinate pairs (alpha, J) of the given order.
    std::vector<std::pair<int, MultiIndex>> check_pairs(int order, const BundleSpec& b) const {
        std::vector<std::pair<int, MultiIndex>> out;
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& J : multiindexes_of_order(b.m, order))
                if (!is_hat(alpha, J)) out.emplace_back(alpha, J);
        return out;
    }
};

namespace detail {

inline Expr momentum_sum(int alpha, const MultiIndex& J) {
    Expr s;
    for (const auto& [I, i] : decompositions(J)) s += Expr(Atom::momentum(alpha, I, i));
    return s;
}

inline Expr b_trace(int alpha, const MultiIndex& J, const BundleSpec& b) {
    Expr s;
    for (int j = 0; j < b.m; ++j) s += Expr(Atom::coeff_B(alpha, J, j, j));
    return s;
}

inline std::string level_name(int order, int k) {
    if (order == 0) return "bottom";
    return order == k ? "top" : "mid";
}

inline EqClass level_class(int order, int k) {
    if (order == 0) return EqClass::dynamics_bottom;
    return order == k ? EqClass::dynamics_top : EqClass::dynamics_mid;
}

} // namespace detail

/// H = p + p^{Ii}_alpha u^alpha_{I+1_i} - L.
inline Expr hamiltonian(const Expr& L, const BundleSpec& b) {
    validate_lagrangian(L, b);
    Expr h(Atom::energy());
    for (int alpha = 0; alpha < b.n; ++alpha)
        for (const auto& I : multiindexes_up_to(b.m, b.k - 1))
            for (int i = 0; i < b.m; ++i)
                h += Expr(Atom::momentum(alpha, I, i)) *
                     Expr(Atom::jet_coord(alpha, I.incremented(i)));
    return h - L;
}

/// The relation p = L - p^{Ii}_alpha u^alpha_{I+1_i} cutting out W_0.
inline Equation w0_relation(const Expr& L, const BundleSpec& b) {
    Equation eq;
    eq.cls = EqClass::submanifold_w0;
    eq.lhs = Expr(Atom::energy());
    eq.rhs = L - (hamiltonian(Expr(), b) - Expr(Atom::energy()));
    return eq;
}

namespace detail {

inline void emit_holonomy(EquationSet& out, const BundleSpec& b) {
    for (int alpha = 0; alpha < b.n; ++alpha)
        for (const auto& I : multiindexes_up_to(b.m, b.k - 1))
            for (int i = 0; i < b.m; ++i) {
                Equation eq;
                eq.cls = EqClass::holonomy;
                eq.indices = {{"alpha", b.fiber_names[static_cast<size_t>(alpha)]},
                              {"I", I.str()},
                              {"i", b.base_names[static_cast<size_t>(i)]}};
                eq.lhs = Expr(Atom::coeff_A(alpha, I, i));
                eq.rhs = Expr(Atom::jet_coord(alpha, I.incremented(i)));
                out.equations.push_back(std::move(eq));
            }
}

/// Shared generator for the dynamics and base tangency families; the
/// unconstrained system is the empty-constraint case.
inline void emit_dynamics_and_tangency(EquationSet& out, const Expr& L,
                                       const std::vector<ImplicitConstraint>& cons,
                                       const BundleSpec& b, bool strict_paper) {
    std::vector<Atom> lam;
    for (const auto& ic : cons) lam.push_back(Atom::multiplier_fiber(ic.tag));

    auto modified_partial = [&](const Atom& s) {
        Expr r = L.partial(s);
        for (size_t mu = 0; mu < cons.size(); ++mu)
            r -= Expr(lam[mu]) * cons[mu].psi.partial(s);
        return r;
    };
    auto modified_base_partial = [&](int j) {
        Expr r = base_partial(L, j, b);
        for (size_t mu = 0; mu < cons.size(); ++mu)
            r -= Expr(lam[mu]) * base_partial(cons[mu].psi, j, b);
        return r;
    };

    // equations of dynamics, concise form, classified by |J|
    for (int order = 0; order <= b.k; ++order)
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& J : multiindexes_of_order(b.m, order)) {
                Equation eq;
                eq.cls = level_class(order, b.k);
                eq.indices = {{"alpha", b.fiber_names[static_cast<size_t>(alpha)]},
                              {"J", J.str()},
                              {"level", level_name(order, b.k)}};
                eq.lhs = momentum_sum(alpha, J);
                eq.rhs = modified_partial(Atom::jet_coord(alpha, J));
                if (order < b.k) eq.rhs -= b_trace(alpha, J, b);
                out.equations.push_back(std::move(eq));
            }

    // tangency along W_1: only meaningful without multipliers (the
    // unconstrained system); with constraints the W_1-type condition lives in
    // the multiplier-free system instead
    if (cons.empty()) {
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& K : multiindexes_of_order(b.m, b.k))
                for (int j = 0; j < b.m; ++j) {
                    Equation eq;
                    eq.cls = EqClass::tangency_w1;
                    eq.indices = {{"alpha", b.fiber_names[static_cast<size_t>(alpha)]},
                                  {"K", K.str()},
                                  {"j", b.base_names[static_cast<size_t>(j)]}};
                    for (const auto& [I, i] : decompositions(K))
                        eq.lhs += Expr(Atom::coeff_B(alpha, I, i, j));
                    const Atom uK = Atom::jet_coord(alpha, K);
                    Expr dLK = L.partial(uK);
                    eq.rhs = base_partial(dLK, j, b);
                    for (int beta = 0; beta < b.n; ++beta) {
                        for (const auto& I : multiindexes_up_to(b.m, b.k - 1))
                            eq.rhs += Expr(Atom::jet_coord(beta, I.incremented(j))) *
                                      dLK.partial(Atom::jet_coord(beta, I));
                        for (const auto& R : multiindexes_of_order(b.m, b.k))
                            eq.rhs += Expr(Atom::coeff_A(beta, R, j)) *
                                      dLK.partial(Atom::jet_coord(beta, R));
                    }
                    out.equations.push_back(std::move(eq));
                }
    }

    // tangency to W_0 (the energy direction)
    auto h0_equation = [&](int j, bool literal) {
        Equation eq;
        eq.cls = EqClass::tangency_h0;
        eq.indices = {{"j", b.base_names[static_cast<size_t>(j)]}};
        if (literal) eq.indices["variant"] = "paper-literal";
        eq.lhs = Expr(Atom::coeff_C(j));
        eq.rhs = modified_base_partial(j);
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& J : multiindexes_up_to(b.m, b.k - 1)) {
                Expr paren = -momentum_sum(alpha, J);
                if (!literal) {
                    paren += modified_partial(Atom::jet_coord(alpha, J));
                } else {
                    // alternate reading: the L-derivative follows the
                    // momentum decomposition index
                    for (const auto& [I, i] : decompositions(J))
                        paren += L.partial(Atom::jet_coord(alpha, I));
                    for (size_t mu = 0; mu < cons.size(); ++mu)
                        paren -= Expr(lam[mu]) *
                                 cons[mu].psi.partial(Atom::jet_coord(alpha, J));
                }
                eq.rhs += Expr(Atom::jet_coord(alpha, J.incremented(j))) * paren;
            }
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& I : multiindexes_up_to(b.m, b.k - 1))
                for (int i = 0; i < b.m; ++i)
                    eq.rhs -= Expr(Atom::jet_coord(alpha, I.incremented(i))) *
                              Expr(Atom::coeff_B(alpha, I, i, j));
        return eq;
    };
    for (int j = 0; j < b.m; ++j) {
        out.equations.push_back(h0_equation(j, false));
        if (strict_paper) out.equations.push_back(h0_equation(j, true));
    }
}

inline void emit_tangency_constraint(EquationSet& out, const ConstraintSet& c,
                                     const BundleSpec& b) {
    for (const auto& sc : c.solved)
        for (int j = 0; j < b.m; ++j) {
            Equation eq;
            eq.cls = EqClass::tangency_constraint;
            eq.indices = {{"alpha", b.fiber_names[static_cast<size_t>(sc.fiber)]},
                          {"J", sc.index.str()},
                          {"j", b.base_names[static_cast<size_t>(j)]}};
            eq.lhs = Expr(Atom::coeff_A(sc.fiber, sc.index, j));
            eq.rhs = base_partial(sc.rhs, j, b);
            for (const Atom& a : sc.rhs.atoms())
                if (a.kind == AtomKind::jet)
                    eq.rhs += Expr(Atom::coeff_A(a.fiber, a.index, j)) * sc.rhs.partial(a);
            out.equations.push_back(std::move(eq));
        }
}

} // namespace detail

/// The unconstrained velocity-momentum equation system: holonomy, dynamics
/// (bottom/mid/top; the top family cuts out W_1) and the two tangency
/// families, under the normalization eta(X) = 1.
inline EquationSet sr_equations(const Expr& L, const BundleSpec& b, bool strict_paper = false) {
    validate_lagrangian(L, b);
    EquationSet out;
    detail::emit_holonomy(out, b);
    detail::emit_dynamics_and_tangency(out, L, {}, b, strict_paper);
    return out;
}

/// The constrained system: multiplier-bearing dynamics and tangency families;
/// for solved-form entries additionally the constraint tangency family
/// expressing the dependent A coefficients through the free ones.
inline EquationSet constrained_sr_equations(const Expr& L, const ConstraintSet& c,
                                            const BundleSpec& b, bool strict_paper = false) {
    validate_lagrangian(L, b);
    c.validate(b);
    if (c.empty()) return sr_equations(L, b, strict_paper);
    EquationSet out;
    detail::emit_holonomy(out, b);
    detail::emit_dynamics_and_tangency(out, L, c.as_implicit(), b, strict_paper);
    detail::emit_tangency_constraint(out, c, b);
    return out;
}

namespace detail {

/// dL^C/du for a free coordinate: the chain-rule shorthand
/// dL/du + sum_hats dL/du^hat dPhi/du, written on the ambient coordinates.
inline Expr restricted_partial(const Expr& L, const ConstraintSet& c, const Atom& s) {
    Expr r = L.partial(s);
    for (const auto& sc : c.solved)
        r += L.partial(Atom::jet_coord(sc.fiber, sc.index)) * sc.rhs.partial(s);
    return r;
}

inline Expr restricted_base_partial(const Expr& L, const ConstraintSet& c, int j,
                                    const BundleSpec& b) {
    Expr r = base_partial(L, j, b);
    for (const auto& sc : c.solved)
        r += L.partial(Atom::jet_coord(sc.fiber, sc.index)) * base_partial(sc.rhs, j, b);
    return r;
}

} // namespace detail

/// Multiplier-free reduced system for solved-form constraints, together with
/// the three groups of relations cutting out W^C_2.
inline EquationSet eliminate_multipliers(const Expr& L, const ConstraintSet& c,
                                         const BundleSpec& b) {
    validate_lagrangian(L, b);
    c.validate(b);
    if (!c.implicit.empty())
        throw std::invalid_argument("multiplier elimination requires solved-form constraints");
    if (c.solved.empty())
        throw std::invalid_argument("no constraints to eliminate");

    EquationSet out;

    // dynamics freed of the multipliers, one equation per free coordinate
    for (int order = 0; order <= b.k; ++order)
        for (const auto& [alpha, J] : c.check_pairs(order, b)) {
            const Atom uJ = Atom::jet_coord(alpha, J);
            Equation eq;
            eq.cls = EqClass::multiplier_free;
            eq.indices = {{"alpha", b.fiber_names[static_cast<size_t>(alpha)]},
                          {"J", J.str()},
                          {"level", detail::level_name(order, b.k)}};
            eq.lhs = detail::momentum_sum(alpha, J);
            eq.rhs = detail::restricted_partial(L, c, uJ);
            if (order < b.k) eq.rhs -= detail::b_trace(alpha, J, b);
            for (const auto& sc : c.solved) {
                Expr dphi = sc.rhs.partial(uJ);
                if (dphi.is_zero()) continue;
                eq.lhs += detail::momentum_sum(sc.fiber, sc.index) * dphi;
                if (sc.index.order() < b.k)
                    eq.rhs -= detail::b_trace(sc.fiber, sc.index, b) * dphi;
            }
            out.equations.push_back(std::move(eq));
        }

    detail::emit_tangency_constraint(out, c, b);

    // tangency to W_0 on the constrained space
    for (int j = 0; j < b.m; ++j) {
        Equation eq;
        eq.cls = EqClass::tangency_h0;
        eq.indices = {{"j", b.base_names[static_cast<size_t>(j)]}};
        eq.lhs = Expr(Atom::coeff_C(j));
        eq.rhs = detail::restricted_base_partial(L, c, j, b);
        for (int order = 0; order <= b.k - 1; ++order)
            for (const auto& [alpha, J] : c.check_pairs(order, b))
                eq.rhs += Expr(Atom::jet_coord(alpha, J.incremented(j))) *
                          (detail::restricted_partial(L, c, Atom::jet_coord(alpha, J)) -
                           detail::momentum_sum(alpha, J));
        for (const auto& sc : c.solved) {
            if (sc.index.order() <= b.k - 1)
                eq.rhs -= Expr(Atom::jet_coord(sc.fiber, sc.index.incremented(j))) *
                          detail::momentum_sum(sc.fiber, sc.index);
            else
                eq.rhs -= base_partial(sc.rhs, j, b) *
                          detail::momentum_sum(sc.fiber, sc.index);
        }
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& I : multiindexes_up_to(b.m, b.k - 1))
                for (int i = 0; i < b.m; ++i)
                    eq.rhs -= Expr(Atom::jet_coord(alpha, I.incremented(i))) *
                              Expr(Atom::coeff_B(alpha, I, i, j));
        out.equations.push_back(std::move(eq));
    }

    // tangency along the reduced W_1: the coefficient matrix here is the
    // constrained regularity matrix
    const Expr Lc = L.substitute(c.solved_bindings());
    auto hessian_entry = [&](const Atom& uR, const Atom& uK) {
        Expr r = Lc.partial(uK).partial(uR);
        for (const auto& sc : c.solved)
            if (sc.index.order() == b.k)
                r -= detail::momentum_sum(sc.fiber, sc.index) *
                     sc.rhs.partial(uK).partial(uR);
        return r;
    };
    for (const auto& [alpha, K] : c.check_pairs(b.k, b))
        for (int j = 0; j < b.m; ++j) {
            const Atom uK = Atom::jet_coord(alpha, K);
            Equation eq;
            eq.cls = EqClass::tangency_w1;
            eq.indices = {{"alpha", b.fiber_names[static_cast<size_t>(alpha)]},
                          {"K", K.str()},
                          {"j", b.base_names[static_cast<size_t>(j)]}};
            for (const auto& [I, i] : decompositions(K))
                eq.lhs += Expr(Atom::coeff_B(alpha, I, i, j));
            eq.rhs = base_partial(Lc.partial(uK), j, b);
            for (const auto& sc : c.solved)
                if (sc.index.order() == b.k)
                    eq.rhs -= detail::momentum_sum(sc.fiber, sc.index) *
                              base_partial(sc.rhs.partial(uK), j, b);
            for (int order = 0; order <= b.k; ++order)
                for (const auto& [beta, J] : c.check_pairs(order, b))
                    eq.rhs += Expr(Atom::coeff_A(beta, J, j)) *
                              hessian_entry(Atom::jet_coord(beta, J), uK);
            for (const auto& sc : c.solved) {
                if (sc.index.order() != b.k) continue;
                Expr dphi = sc.rhs.partial(uK);
                if (dphi.is_zero()) continue;
                Expr bsum;
                for (const auto& [I, i] : decompositions(sc.index))
                    bsum += Expr(Atom::coeff_B(sc.fiber, I, i, j));
                eq.rhs -= bsum * dphi;
            }
            out.equations.push_back(std::move(eq));
        }

    // the three groups cutting out W^C_2
    for (const auto& sc : c.solved) {
        Equation eq;
        eq.cls = EqClass::submanifold_wc2;
        eq.indices = {{"group", "constraint"},
                      {"alpha", b.fiber_names[static_cast<size_t>(sc.fiber)]},
                      {"J", sc.index.str()}};
        eq.lhs = Expr(Atom::jet_coord(sc.fiber, sc.index));
        eq.rhs = sc.rhs;
        out.equations.push_back(std::move(eq));
    }
    {
        Equation w0 = w0_relation(L, b);
        w0.indices = {{"group", "energy"}};
        out.equations.push_back(std::move(w0));
    }
    std::vector<Equation> top_relations;
    for (const auto& e : out.equations)
        if (e.cls == EqClass::multiplier_free && e.indices.at("level") == "top")
            top_relations.push_back(e);
    for (Equation& eq : top_relations) {
        eq.cls = EqClass::submanifold_wc2;
        eq.indices["group"] = "momenta";
        out.equations.push_back(std::move(eq));
    }

    return out;
}

/// The regularity matrix: second derivatives of the (restricted) Lagrangian
/// with respect to the top-order free velocities, with the momentum-weighted
/// curvature of the constraints subtracted in the constrained case. Rank is
/// computed by fraction-free elimination with generic-point pivoting: any
/// canonically non-zero polynomial entry counts as invertible.
struct HessianReport {
    std::vector<std::pair<int, MultiIndex>> coordinates; // row/column labels
    std::vector<std::vector<Expr>> matrix;
    int rank = 0;

    bool regular() const {
        return rank == static_cast<int>(coordinates.size());
    }
};

inline int symbolic_rank(std::vector<std::vector<Expr>> a) {
    const int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(a[0].size());
    int rank = 0;
    Expr prev(1);
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!a[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(a[static_cast<size_t>(rank)], a[static_cast<size_t>(piv)]);
        const Expr& pivot = a[static_cast<size_t>(rank)][static_cast<size_t>(col)];
        for (int r = rank + 1; r < rows; ++r) {
            for (int c2 = col + 1; c2 < cols; ++c2)
                a[static_cast<size_t>(r)][static_cast<size_t>(c2)] = divide_exact(
                    pivot * a[static_cast<size_t>(r)][static_cast<size_t>(c2)] -
                        a[static_cast<size_t>(r)][static_cast<size_t>(col)] *
                            a[static_cast<size_t>(rank)][static_cast<size_t>(c2)],
                    prev);
            a[static_cast<size_t>(r)][static_cast<size_t>(col)] = Expr();
        }
        prev = pivot;
        rank += 1;
    }
    return rank;
}

inline HessianReport regularity_hessian(const Expr& L, const ConstraintSet* c,
                                        const BundleSpec& b, bool momentum_symbolic = true,
                                        const std::map<Atom, Expr>& momentum_values = {}) {
    validate_lagrangian(L, b);
    HessianReport rep;
    Expr Lc = L;
    std::vector<const SolvedConstraint*> top_hats;
    if (c) {
        c->validate(b);
        if (!c->implicit.empty())
            throw std::invalid_argument("regularity matrix requires solved-form constraints");
        Lc = L.substitute(c->solved_bindings());
        for (const auto& sc : c->solved)
            if (sc.index.order() == b.k) top_hats.push_back(&sc);
        rep.coordinates = c->check_pairs(b.k, b);
    } else {
        for (int alpha = 0; alpha < b.n; ++alpha)
            for (const auto& K : multiindexes_of_order(b.m, b.k))
                rep.coordinates.emplace_back(alpha, K);
    }

    const size_t d = rep.coordinates.size();
    rep.matrix.assign(d, std::vector<Expr>(d));
    for (size_t r = 0; r < d; ++r)
        for (size_t cidx = 0; cidx < d; ++cidx) {
            const Atom uR = Atom::jet_coord(rep.coordinates[r].first, rep.coordinates[r].second);
            const Atom uK = Atom::jet_coord(rep.coordinates[cidx].first,
                                            rep.coordinates[cidx].second);
            Expr entry = Lc.partial(uK).partial(uR);
            for (const SolvedConstraint* sc : top_hats)
                entry -= detail::momentum_sum(sc->fiber, sc->index) *
                         sc->rhs.partial(uK).partial(uR);
            if (!momentum_symbolic) entry = entry.substitute(momentum_values);
            rep.matrix[r][cidx] = std::move(entry);
        }
    rep.rank = symbolic_rank(rep.matrix);
    return rep;
}

} // namespace jetvar
