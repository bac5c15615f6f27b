#include <jetvar/fixtures.hpp>
#include <jetvar/prolong.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace jetvar;

namespace {

BundleSpec bundle(int m, int n, int k) {
    BundleSpec b;
    b.m = m;
    b.n = n;
    b.k = k;
    const char* bases[] = {"t", "x", "y", "z"};
    const char* fibers[] = {"u", "v", "w"};
    for (int i = 0; i < m; ++i) b.base_names.push_back(bases[i]);
    for (int i = 0; i < n; ++i) b.fiber_names.push_back(fibers[i]);
    b.validate();
    return b;
}

Expr jet(int fiber, std::initializer_list<int> J) {
    return Expr(Atom::jet_coord(fiber, MultiIndex(J)));
}

} // namespace

TEST_CASE("divergence constraint prolongs to the full second-order set", "[prolong]") {
    BundleSpec b = bundle(3, 2, 2);
    Expr psi = jet(0, {0, 1, 0}) + jet(1, {0, 0, 1}); // u_x + v_y
    auto pr = prolong_constraints({psi}, 2, b);
    CHECK(pr.affine);
    CHECK(pr.iterations == 2);
    REQUIRE(pr.generators.size() == 4);
    CHECK(pr.generators[0] == psi);
    CHECK(pr.generators[1] == jet(0, {1, 1, 0}) + jet(1, {1, 0, 1}));
    CHECK(pr.generators[2] == jet(0, {0, 2, 0}) + jet(1, {0, 1, 1}));
    CHECK(pr.generators[3] == jet(0, {0, 1, 1}) + jet(1, {0, 0, 2}));
    CHECK(pr.derivative_tags[1] == MultiIndex{1, 0, 0});
    CHECK(pr.derivative_tags[3] == MultiIndex{0, 0, 1});
}

TEST_CASE("top-order constraints are already closed", "[prolong]") {
    BundleSpec b = bundle(2, 1, 2);
    Expr psi = jet(0, {2, 0}) + jet(0, {0, 2});
    auto pr = prolong_constraints({psi}, 2, b);
    CHECK(pr.iterations == 1);
    REQUIRE(pr.generators.size() == 1);
    CHECK(pr.generators[0] == psi);
}

TEST_CASE("ordinary differential constraint gains one consequence", "[prolong]") {
    BundleSpec b = bundle(1, 1, 2);
    Expr psi = jet(0, {1}) - jet(0, {0}); // u_t - u
    auto pr = prolong_constraints({psi}, 2, b);
    REQUIRE(pr.generators.size() == 2);
    CHECK(pr.generators[0] == psi);
    CHECK(pr.generators[1] == jet(0, {2}) - jet(0, {1}));
}

TEST_CASE("target order below the constraint order is rejected", "[prolong]") {
    BundleSpec b = bundle(2, 1, 2);
    CHECK_THROWS_AS(prolong_constraints({jet(0, {2, 0})}, 1, b), std::invalid_argument);
}

TEST_CASE("a single first-order linear constraint gives 1+m generators at order two",
          "[prolong]") {
    for (int m = 1; m <= 3; ++m) {
        BundleSpec b = bundle(m, 2, 2);
        Expr psi;
        for (int i = 0; i < m; ++i) psi += Expr(Atom::jet_coord(0, MultiIndex::unit(m, i)));
        psi += Expr(Atom::jet_coord(1, MultiIndex(m)));
        auto pr = prolong_constraints({psi}, 2, b);
        CHECK(pr.generators.size() == static_cast<size_t>(1 + m));
    }
}

TEST_CASE("affine prolongation is idempotent and spans the derivative lattice", "[prolong]") {
    BundleSpec b = bundle(3, 2, 2);
    Expr psi = jet(0, {0, 1, 0}) + jet(1, {0, 0, 1});
    auto first = prolong_constraints({psi}, 2, b);
    auto second = prolong_constraints(first.generators, 2, b);

    RationalRowSpace s1, s2;
    for (const Expr& e : first.generators) s1.reduce_and_insert(e);
    for (const Expr& e : second.generators) s2.reduce_and_insert(e);
    CHECK(s1.same_space(s2));

    // every generator is a rational combination of plain derivatives of the
    // inputs: reduce against the full derivative lattice
    RationalRowSpace lattice;
    for (const auto& D : multiindexes_up_to(b.m, 1))
        lattice.reduce_and_insert(total_derivative_multi(psi, D, b));
    for (const Expr& e : first.generators) CHECK(lattice.reduce(e).is_zero());
}

TEST_CASE("redundant affine generators are eliminated", "[prolong]") {
    BundleSpec b = bundle(2, 1, 2);
    Expr psi = jet(0, {1, 0}) + jet(0, {0, 1});
    // feeding the same constraint twice (scaled) must not duplicate the row space
    auto pr = prolong_constraints({psi, Rational(3) * psi}, 2, b);
    auto single = prolong_constraints({psi}, 2, b);
    CHECK(pr.generators.size() == single.generators.size());
}

TEST_CASE("nonlinear constraints keep every generator and stabilize syntactically",
          "[prolong]") {
    BundleSpec b = bundle(1, 1, 2);
    Expr psi = jet(0, {1}).pow(2) - jet(0, {0}); // u_t^2 - u
    auto pr = prolong_constraints({psi}, 2, b);
    CHECK_FALSE(pr.affine);
    REQUIRE(pr.generators.size() == 2);
    CHECK(pr.generators[1] ==
          Rational(2) * jet(0, {1}) * jet(0, {2}) - jet(0, {1}));

    auto again = prolong_constraints(pr.generators, 2, b);
    CHECK(again.generators.size() == pr.generators.size());
    for (size_t i = 0; i < again.generators.size(); ++i)
        CHECK(again.generators[i] == pr.generators[i]);
}

TEST_CASE("prolongation matches the stored viscous-fluid constraint set", "[prolong][fixture]") {
    BundleSpec b = navier_stokes_fixture().bundle;
    Expr psi = jet(0, {0, 1, 0}) + jet(1, {0, 0, 1});
    auto pr = prolong_constraints({psi}, 2, b);
    auto expected = fixture_detail::ns_expected_prolonged();
    REQUIRE(pr.generators.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) CHECK(pr.generators[i] == expected[i]);
}
