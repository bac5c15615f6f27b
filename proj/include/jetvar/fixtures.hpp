#pragma once

#include "problem.hpp"
#include "prolong.hpp"

#include <functional>
#include <string>
#include <vector>

namespace jetvar {

/// Optimal control of an ideal planar fluid (first order).
/// Note: the original statement of the incompressibility condition misprints
/// it as u_x + u_y = 0; every derived table uses the divergence-free form
/// u_x + v_y = 0, which is what this fixture encodes.
inline const char* euler_fixture_text() {
    return R"(# Optimal control of an ideal (zero-viscosity) planar fluid.
# The incompressibility condition is encoded in solved form, v_y = -u_x;
# the original statement misprints it once as u_x + u_y = 0, but all derived
# tables use u_x + v_y = 0.
[bundle]
base = t x y
fiber = u v
order = 1
[functions]
Pi : t x y
[definitions]
F = u[t] + u*u[x] + v*u[y] + Pi[x]
G = v[t] + u*v[x] + v*v[y] + Pi[y]
[lagrangian]
L = (F^2 + G^2)/2
[constraints]
solve lam : v[y] = -u[x]
)";
}

/// Optimal control of a viscous incompressible planar fluid (second order).
inline const char* navier_stokes_fixture_text() {
    return R"(# Optimal control of a viscous incompressible planar fluid.
# The divergence-free condition and its consequences to second order, in
# solved form.
[bundle]
base = t x y
fiber = u v
order = 2
[functions]
Pi : t x y
nu : t x y
[definitions]
F = u[t] + u*u[x] + v*u[y] + Pi[x] - nu*(u[x,x] + u[y,y])
G = v[t] + u*v[x] + v*v[y] + Pi[y] - nu*(v[x,x] + v[y,y])
[lagrangian]
L = (F^2 + G^2)/2
[constraints]
solve lam : v[y] = -u[x]
solve lam_t : v[t,y] = -u[t,x]
solve lam_x : v[x,y] = -u[x,x]
solve lam_y : v[y,y] = -u[x,y]
)";
}

/// The divergence-free condition alone on the second-order bundle; input for
/// prolongation demonstrations.
inline const char* divergence_fixture_text() {
    return R"(# Divergence-free velocity constraint on the second-order bundle.
[bundle]
base = t x y
fiber = u v
order = 2
[lagrangian]
L = (u[t]^2 + v[t]^2)/2
[constraints]
implicit div : u[x] + v[y]
)";
}

inline FieldProblem euler_fixture() { return parse_problem(euler_fixture_text()); }
inline FieldProblem navier_stokes_fixture() { return parse_problem(navier_stokes_fixture_text()); }
inline FieldProblem divergence_fixture() { return parse_problem(divergence_fixture_text()); }

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace fixture_detail {

struct EulerRefs {
    FieldProblem p;
    Expr F, G, u, v, ux, uy, vx, vy;
    Atom lamW;  // velocity-momentum space multiplier
    Atom mom(int fiber, int axis) const { return Atom::momentum(fiber, MultiIndex(3), axis); }
};

inline EulerRefs euler_refs() {
    EulerRefs r;
    r.p = euler_fixture();
    r.F = r.p.definitions.at("F");
    r.G = r.p.definitions.at("G");
    r.u = Expr(Atom::jet_coord(0, MultiIndex(3)));
    r.v = Expr(Atom::jet_coord(1, MultiIndex(3)));
    r.ux = Expr(Atom::jet_coord(0, MultiIndex{0, 1, 0}));
    r.uy = Expr(Atom::jet_coord(0, MultiIndex{0, 0, 1}));
    r.vx = Expr(Atom::jet_coord(1, MultiIndex{0, 1, 0}));
    r.vy = Expr(Atom::jet_coord(1, MultiIndex{0, 0, 1}));
    r.lamW = Atom::multiplier_fiber("lam");
    return r;
}

struct NavierStokesRefs {
    FieldProblem p;
    Expr F, G, u, v, ux, uy, vx, vy, nu;
    Atom lamW, lamWt, lamWx, lamWy;
    Expr mom2(int fiber, const MultiIndex& K) const {
        Expr s;
        for (const auto& [I, i] : decompositions(K)) s += Expr(Atom::momentum(fiber, I, i));
        return s;
    }
};

inline NavierStokesRefs navier_stokes_refs() {
    NavierStokesRefs r;
    r.p = navier_stokes_fixture();
    r.F = r.p.definitions.at("F");
    r.G = r.p.definitions.at("G");
    r.u = Expr(Atom::jet_coord(0, MultiIndex(3)));
    r.v = Expr(Atom::jet_coord(1, MultiIndex(3)));
    r.ux = Expr(Atom::jet_coord(0, MultiIndex{0, 1, 0}));
    r.uy = Expr(Atom::jet_coord(0, MultiIndex{0, 0, 1}));
    r.vx = Expr(Atom::jet_coord(1, MultiIndex{0, 1, 0}));
    r.vy = Expr(Atom::jet_coord(1, MultiIndex{0, 0, 1}));
    r.nu = Expr(Atom::opaque("nu", MultiIndex(3)));
    r.lamW = Atom::multiplier_fiber("lam");
    r.lamWt = Atom::multiplier_fiber("lam_t");
    r.lamWx = Atom::multiplier_fiber("lam_x");
    r.lamWy = Atom::multiplier_fiber("lam_y");
    return r;
}

inline Expr dmulti(const Expr& e, const MultiIndex& J, const BundleSpec& b) {
    return total_derivative_multi(e, J, b);
}

inline Expr lam_base(const std::string& tag, const MultiIndex& rec) {
    return Expr(Atom::multiplier_base(tag, rec));
}

/// The two stored constrained Euler-Lagrange equations of the ideal-fluid
/// table, as "expression = 0".
inline std::vector<Expr> euler_expected_cel() {
    EulerRefs r = euler_refs();
    const BundleSpec& b = r.p.bundle;
    const MultiIndex dt{1, 0, 0}, dx{0, 1, 0}, dy{0, 0, 1};
    Expr eq_u = dmulti(r.F, dt, b) + r.u * dmulti(r.F, dx, b) + r.v * dmulti(r.F, dy, b) +
                r.vy * r.F - r.vx * r.G - lam_base("lam", dx);
    Expr eq_v = dmulti(r.G, dt, b) + r.u * dmulti(r.G, dx, b) + r.v * dmulti(r.G, dy, b) +
                r.ux * r.G - r.uy * r.F - lam_base("lam", dy);
    return {eq_u, eq_v};
}

/// The six stored top-level dynamics relations of the ideal-fluid table, as
/// residuals lhs - rhs.
inline std::vector<Expr> euler_expected_csr_top() {
    EulerRefs r = euler_refs();
    Expr lam(r.lamW);
    auto P = [&](int axis) { return Expr(r.mom(0, axis)); };
    auto Q = [&](int axis) { return Expr(r.mom(1, axis)); };
    return {
        P(0) - r.F,                  // p^t = F
        P(1) - (r.u * r.F - lam),    // p^x = uF - lam
        P(2) - r.v * r.F,            // p^y = vF
        Q(0) - r.G,                  // q^t = G
        Q(1) - r.u * r.G,            // q^x = uG
        Q(2) - (r.v * r.G - lam),    // q^y = vG - lam
    };
}

/// The multiplier-free top-level relations of the ideal-fluid table, in free
/// coordinate order (u_t, u_x, u_y, v_t, v_x).
inline std::vector<Expr> euler_expected_eliminate_top() {
    EulerRefs r = euler_refs();
    auto P = [&](int axis) { return Expr(r.mom(0, axis)); };
    auto Q = [&](int axis) { return Expr(r.mom(1, axis)); };
    return {
        P(0) - r.F,
        P(1) - Q(2) - (r.u * r.F - r.v * r.G), // p^x - q^y = uF - vG
        P(2) - r.v * r.F,
        Q(0) - r.G,
        Q(1) - r.u * r.G,
    };
}

/// The stored 5x5 regularity matrix of the ideal-fluid table.
inline std::vector<std::vector<Expr>> euler_expected_hessian() {
    EulerRefs r = euler_refs();
    const Expr u = r.u, v = r.v, z = Expr(), one = Expr(1);
    return {
        {one, u, v, z, z},
        {u, u * u + v * v, u * v, -v, -(u * v)},
        {v, u * v, v * v, z, z},
        {z, -v, z, one, u},
        {z, -(u * v), z, u, u * u},
    };
}

/// The four stored prolonged divergence constraints.
inline std::vector<Expr> ns_expected_prolonged() {
    NavierStokesRefs r = navier_stokes_refs();
    auto jet = [&](int f, MultiIndex J) { return Expr(Atom::jet_coord(f, std::move(J))); };
    return {
        r.ux + r.vy,
        jet(0, {1, 1, 0}) + jet(1, {1, 0, 1}), // u_tx + v_ty
        jet(0, {0, 2, 0}) + jet(1, {0, 1, 1}), // u_xx + v_xy
        jet(0, {0, 1, 1}) + jet(1, {0, 0, 2}), // u_xy + v_yy
    };
}

/// The twelve stored top-level dynamics relations of the viscous-fluid table,
/// as residuals, in coordinate order (u then v, graded canonical multi-index).
inline std::vector<Expr> ns_expected_csr_top() {
    NavierStokesRefs r = navier_stokes_refs();
    const MultiIndex tt{2, 0, 0}, tx{1, 1, 0}, ty{1, 0, 1}, xx{0, 2, 0}, xy{0, 1, 1},
        yy{0, 0, 2};
    Expr lt(r.lamWt), lx(r.lamWx), ly(r.lamWy);
    return {
        r.mom2(0, tt),                            // p^tt = 0
        r.mom2(0, tx) + lt,                       // p^tx + p^xt = -lam_t
        r.mom2(0, ty),                            // p^ty + p^yt = 0
        r.mom2(0, xx) + r.nu * r.F + lx,          // p^xx = -nu F - lam_x
        r.mom2(0, xy) + ly,                       // p^xy + p^yx = -lam_y
        r.mom2(0, yy) + r.nu * r.F,               // p^yy = -nu F
        r.mom2(1, tt),                            // q^tt = 0
        r.mom2(1, tx),                            // q^tx + q^xt = 0
        r.mom2(1, ty) + lt,                       // q^ty + q^yt = -lam_t
        r.mom2(1, xx) + r.nu * r.G,               // q^xx = -nu G
        r.mom2(1, xy) + lx,                       // q^xy + q^yx = -lam_x
        r.mom2(1, yy) + r.nu * r.G + ly,          // q^yy = -nu G - lam_y
    };
}

/// The multiplier-free top relations of the viscous-fluid table, as
/// residuals, in free coordinate order (u: tt,tx,ty,xx,xy,yy; v: tt,tx,xx).
inline std::vector<Expr> ns_expected_eliminate_top() {
    NavierStokesRefs r = navier_stokes_refs();
    const MultiIndex tt{2, 0, 0}, tx{1, 1, 0}, ty{1, 0, 1}, xx{0, 2, 0}, xy{0, 1, 1},
        yy{0, 0, 2};
    return {
        r.mom2(0, tt),
        r.mom2(0, tx) - r.mom2(1, ty),                 // p^tx+p^xt = q^ty+q^yt
        r.mom2(0, ty),
        r.mom2(0, xx) + r.nu * r.F - r.mom2(1, xy),    // p^xx + nu F = q^xy+q^yx
        r.mom2(0, xy) - r.mom2(1, yy) - r.nu * r.G,    // p^xy+p^yx = q^yy + nu G
        r.mom2(0, yy) + r.nu * r.F,
        r.mom2(1, tt),
        r.mom2(1, tx),
        r.mom2(1, xx) + r.nu * r.G,
    };
}

/// The two stored constrained Euler-Lagrange equations of the viscous-fluid
/// table, exactly as published, as "expression = 0".
inline std::vector<Expr> ns_expected_cel_published() {
    NavierStokesRefs r = navier_stokes_refs();
    const BundleSpec& b = r.p.bundle;
    const MultiIndex dt{1, 0, 0}, dx{0, 1, 0}, dy{0, 0, 1}, dxx{0, 2, 0}, dyy{0, 0, 2},
        dtx{1, 1, 0}, dty{1, 0, 1}, dxy{0, 1, 1};
    Expr eq_u = Rational(2) * lam_base("lam_t", dtx) + lam_base("lam_x", dxx) +
                Rational(2) * lam_base("lam_y", dxy) - lam_base("lam", dx) -
                dmulti(r.nu * r.F, dxx, b) - dmulti(r.nu * r.F, dyy, b) +
                dmulti(r.F, dt, b) + r.u * dmulti(r.F, dx, b) + r.v * dmulti(r.F, dy, b) +
                r.vy * r.F - r.vx * r.G;
    Expr eq_v = Rational(2) * lam_base("lam_t", dty) + Rational(2) * lam_base("lam_x", dxy) +
                lam_base("lam_y", dyy) - lam_base("lam", dy) -
                dmulti(r.nu * r.G, dxx, b) - dmulti(r.nu * r.G, dyy, b) +
                dmulti(r.G, dt, b) + r.u * dmulti(r.G, dx, b) + r.v * dmulti(r.G, dy, b) +
                r.ux * r.G - r.uy * r.F;
    return {eq_u, eq_v};
}

} // namespace fixture_detail

/// Runs the stored-table checks for both built-in fixtures and reports each.
inline VerifyReport verify_paper() {
    VerifyReport rep;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        rep.checks.push_back({name, ok, detail});
    };

    // ---- ideal fluid ----
    {
        FieldProblem p = euler_fixture();
        const BundleSpec& b = p.bundle;

        std::vector<Expr> psis;
        std::vector<std::string> tags;
        for (const auto& ic : p.constraints.as_implicit()) {
            psis.push_back(ic.psi);
            tags.push_back(ic.tag);
        }
        ConstrainedEL cel = constrained_euler_lagrange(p.lagrangian, psis, b, tags);
        auto expected_cel = fixture_detail::euler_expected_cel();
        for (int alpha = 0; alpha < 2; ++alpha) {
            auto scale = equal_up_to_scale(cel.equations[static_cast<size_t>(alpha)],
                                           expected_cel[static_cast<size_t>(alpha)]);
            check("euler/cel/" + b.fiber_names[static_cast<size_t>(alpha)], scale.has_value(),
                  scale ? "scale " + to_string(*scale) : "no rational scale matches");
        }

        EquationSet csr = constrained_sr_equations(p.lagrangian, p.constraints, b);
        auto top = csr.by_class(EqClass::dynamics_top);
        auto expected_top = fixture_detail::euler_expected_csr_top();
        bool ok = top.size() == expected_top.size();
        std::string det;
        for (size_t i = 0; ok && i < top.size(); ++i)
            if (!(top[i]->residual() == expected_top[i])) {
                ok = false;
                det = "relation " + std::to_string(i) + " differs";
            }
        check("euler/csr-top", ok, det);

        EquationSet elim = eliminate_multipliers(p.lagrangian, p.constraints, b);
        check("euler/eliminate/no-multipliers",
              !elim.contains_atom_kind(AtomKind::multiplier_fiber) &&
                  !elim.contains_atom_kind(AtomKind::multiplier_base));
        std::vector<const Equation*> mftop;
        for (const auto& e : elim.equations)
            if (e.cls == EqClass::multiplier_free && e.indices.at("level") == "top")
                mftop.push_back(&e);
        auto expected_elim = fixture_detail::euler_expected_eliminate_top();
        ok = mftop.size() == expected_elim.size();
        det.clear();
        for (size_t i = 0; ok && i < mftop.size(); ++i)
            if (!(mftop[i]->residual() == expected_elim[i])) {
                ok = false;
                det = "relation " + std::to_string(i) + " differs";
            }
        check("euler/eliminate-top", ok, det);

        HessianReport h = regularity_hessian(p.lagrangian, &p.constraints, b);
        auto expected_h = fixture_detail::euler_expected_hessian();
        ok = h.matrix.size() == 5;
        for (size_t r = 0; ok && r < 5; ++r)
            for (size_t c = 0; ok && c < 5; ++c)
                if (!(h.matrix[r][c] == expected_h[r][c])) {
                    ok = false;
                    det = "entry (" + std::to_string(r) + "," + std::to_string(c) + ") differs";
                }
        check("euler/hessian-entries", ok, det);
        check("euler/hessian-rank", h.rank == 2, "rank " + std::to_string(h.rank));
    }

    // ---- viscous fluid ----
    {
        FieldProblem p = navier_stokes_fixture();
        const BundleSpec& b = p.bundle;

        Expr divergence = fixture_detail::navier_stokes_refs().ux +
                          fixture_detail::navier_stokes_refs().vy;
        ProlongationResult pr = prolong_constraints({divergence}, 2, b);
        auto expected_pro = fixture_detail::ns_expected_prolonged();
        bool ok = pr.generators.size() == expected_pro.size();
        std::string det;
        if (ok) {
            RationalRowSpace expected_space;
            for (const Expr& e : expected_pro) expected_space.reduce_and_insert(e);
            RationalRowSpace got_space;
            for (const Expr& e : pr.generators) got_space.reduce_and_insert(e);
            ok = expected_space.same_space(got_space);
            if (!ok) det = "row spaces differ";
        } else
            det = "expected 4 generators, got " + std::to_string(pr.generators.size());
        check("navier-stokes/prolong", ok, det);

        EquationSet csr = constrained_sr_equations(p.lagrangian, p.constraints, b);
        auto top = csr.by_class(EqClass::dynamics_top);
        auto expected_top = fixture_detail::ns_expected_csr_top();
        ok = top.size() == expected_top.size();
        det.clear();
        for (size_t i = 0; ok && i < top.size(); ++i)
            if (!(top[i]->residual() == expected_top[i])) {
                ok = false;
                det = "relation " + std::to_string(i) + " differs";
            }
        check("navier-stokes/csr-top", ok, det);

        EquationSet elim = eliminate_multipliers(p.lagrangian, p.constraints, b);
        std::vector<const Equation*> mftop;
        for (const auto& e : elim.equations)
            if (e.cls == EqClass::multiplier_free && e.indices.at("level") == "top")
                mftop.push_back(&e);
        auto expected_elim = fixture_detail::ns_expected_eliminate_top();
        ok = mftop.size() == expected_elim.size();
        det.clear();
        for (size_t i = 0; ok && i < mftop.size(); ++i)
            if (!(mftop[i]->residual() == expected_elim[i])) {
                ok = false;
                det = "relation " + std::to_string(i) + " differs";
            }
        check("navier-stokes/eliminate-top", ok, det);

        std::vector<Expr> psis;
        std::vector<std::string> tags;
        for (const auto& ic : p.constraints.as_implicit()) {
            psis.push_back(ic.psi);
            tags.push_back(ic.tag);
        }
        ConstrainedEL cel = constrained_euler_lagrange(p.lagrangian, psis, b, tags);
        auto expected_cel = fixture_detail::ns_expected_cel_published();
        for (int alpha = 0; alpha < 2; ++alpha) {
            auto scale = equal_up_to_scale(cel.equations[static_cast<size_t>(alpha)],
                                           expected_cel[static_cast<size_t>(alpha)]);
            check("navier-stokes/cel/" + b.fiber_names[static_cast<size_t>(alpha)],
                  scale.has_value(),
                  scale ? "scale " + to_string(*scale)
                        : "stored table disagrees with the derived equation: the stored form "
                          "doubles the mixed-derivative multiplier terms and flips the sign of "
                          "the viscosity terms; see the derivation cross-checks in the test "
                          "suite");
        }
    }

    return rep;
}

} // namespace jetvar
