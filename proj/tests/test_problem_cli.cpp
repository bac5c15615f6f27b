#include <jetvar/cli.hpp>
#include <jetvar/jetvar.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

using namespace jetvar;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("fixture problems parse to the expected shapes", "[problem]") {
    FieldProblem euler = euler_fixture();
    CHECK(euler.bundle.m == 3);
    CHECK(euler.bundle.n == 2);
    CHECK(euler.bundle.k == 1);
    CHECK(euler.constraints.solved.size() == 1);
    CHECK(euler.constraints.implicit.empty());
    CHECK(euler.constraints.solved[0].tag == "lam");

    FieldProblem ns = navier_stokes_fixture();
    CHECK(ns.bundle.m == 3);
    CHECK(ns.bundle.n == 2);
    CHECK(ns.bundle.k == 2);
    CHECK(ns.constraints.solved.size() == 4);
    CHECK(ns.constraints.solved[1].tag == "lam_t");
    CHECK(ns.lagrangian.max_jet_order() == 2);
}

TEST_CASE("bundled problem files match the built-in fixtures", "[problem]") {
    const std::string dir = std::string(JETVAR_SOURCE_DIR) + "/fixtures/";
    CHECK(parse_problem(slurp(dir + "euler.jv")).same_resolved(euler_fixture()));
    CHECK(parse_problem(slurp(dir + "navier_stokes.jv")).same_resolved(navier_stokes_fixture()));
    CHECK(parse_problem(slurp(dir + "divergence.jv")).same_resolved(divergence_fixture()));
}

TEST_CASE("problem-file diagnostics", "[problem]") {
    auto expect_error = [&](const std::string& text, const std::string& needle) {
        try {
            parse_problem(text);
            FAIL("expected a problem error for: " + needle);
        } catch (const ProblemError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_error("[bundle]\nbase = x\nfiber = u\norder = 0\n[lagrangian]\nL = u\n",
                 "order must be a positive integer");
    expect_error("[bundle]\nbase = x\nfiber = u\norder = 1\n[lagrangian]\nL = u + wobble\n",
                 "unknown identifier");
    expect_error("[bundle]\nbase = x\nfiber = u\norder = 1\n", "missing [lagrangian]");
    expect_error("[lagrangian]\nL = 1\n", "must come first");
    expect_error("[bundle]\nbase = x\nfiber = u\norder = 1\n[definitions]\nA = B\n"
                 "[lagrangian]\nL = u\n",
                 "unknown identifier 'B'"); // forward references are impossible
    expect_error("[bundle]\nbase = x\nfiber = u\norder = 1\n[definitions]\nu = 1\n"
                 "[lagrangian]\nL = u\n",
                 "already taken");
    expect_error("[bundle]\nbase = x x\nfiber = u\norder = 1\n[lagrangian]\nL = u\n",
                 "duplicate name");
    expect_error("[bundle]\nbase = x\nfiber = u\norder = 1\n[lagrangian]\nL = u[x,x]\n",
                 "exceeds the declared jet order");
    expect_error("[bundle]\nbase = x\nfiber = u\norder = 1\n[constraints]\nsolve u + 1 = 0\n"
                 "[lagrangian]\nL = u\n",
                 "single jet coordinate");
}

TEST_CASE("rendering a problem is a parsing fixed point", "[problem]") {
    for (const FieldProblem& p :
         {euler_fixture(), navier_stokes_fixture(), divergence_fixture()}) {
        std::string once = render_problem(p);
        FieldProblem q = parse_problem(once);
        CHECK(q.same_resolved(p));
        CHECK(render_problem(q) == once);
    }
}

TEST_CASE("command dispatch", "[cli]") {
    CliOptions opt;

    SECTION("el prints the expected equation text") {
        FieldProblem p = parse_problem(
            "[bundle]\nbase = x\nfiber = u\norder = 1\n[lagrangian]\nL = u[x]^2/2\n");
        CliResult r = run_command("el", p, opt);
        CHECK(r.exit_code == 0);
        CHECK(r.output == "-u[x,x] = 0\n");
    }

    SECTION("cel on an unconstrained problem equals el") {
        FieldProblem p = parse_problem(
            "[bundle]\nbase = x\nfiber = u\norder = 1\n[lagrangian]\nL = u[x]^2/2\n");
        CHECK(run_command("cel", p, opt).output == run_command("el", p, opt).output);
    }

    SECTION("bc lists the natural boundary conditions") {
        FieldProblem p = parse_problem(
            "[bundle]\nbase = x\nfiber = u\norder = 2\n[lagrangian]\nL = u[x,x]^2/2\n");
        CliResult r = run_command("bc", p, opt);
        CHECK(r.output == "u[x,x] = 0\nu[x,x,x] = 0\n");
    }

    SECTION("unknown commands exit with an input error") {
        CHECK(run_command("frobnicate", euler_fixture(), opt).exit_code == 2);
    }

    SECTION("eliminate requires solved form") {
        CliResult r = run_command("eliminate", divergence_fixture(), opt);
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("solved-form") != std::string::npos);
    }

    SECTION("prolong renders a paste-ready constraint block") {
        CliOptions o2;
        o2.order = 2;
        CliResult r = run_command("prolong", divergence_fixture(), o2);
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("[constraints]") != std::string::npos);
        CHECK(r.output.find("implicit div_t : u[t,x] + v[t,y]") != std::string::npos);

        // the block parses back inside a problem file
        std::string problem = "[bundle]\nbase = t x y\nfiber = u v\norder = 2\n"
                              "[lagrangian]\nL = u[t]^2/2\n" +
                              r.output.substr(r.output.find("[constraints]"));
        CHECK(parse_problem(problem).constraints.implicit.size() == 4);
    }

    SECTION("prolong beyond the bundle order is an input error") {
        CliOptions o2;
        o2.order = 3;
        CHECK(run_command("prolong", divergence_fixture(), o2).exit_code == 2);
    }

    SECTION("hessian on the ideal fluid reports the degenerate rank") {
        CliResult r = run_command("hessian", euler_fixture(), opt);
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("rank = 2 (degenerate)") != std::string::npos);
    }

    SECTION("strict mode surfaces both tangency readings") {
        CliOptions o2;
        o2.strict_paper = true;
        CliResult r = run_command("sr", euler_fixture(), o2);
        CHECK(r.output.find("variant=paper-literal") != std::string::npos);
    }
}

TEST_CASE("json output parses back to the same canonical expressions", "[cli][json]") {
    CliOptions opt;
    opt.format = Format::json;

    SECTION("equation commands") {
        FieldProblem p = euler_fixture();
        for (const std::string cmd : {"el", "cel", "bc", "sr", "csr", "eliminate"}) {
            CliResult r = run_command(cmd, p, opt, "euler.jv");
            REQUIRE(r.exit_code == 0);
            Json j = Json::parse(r.output);
            CHECK(j.at("command") == cmd);
            CHECK(j.at("problem") == "euler.jv");
            REQUIRE(j.contains("equations"));

            // recompute through the library and compare expression by expression
            EquationSet expected;
            if (cmd == "el")
                for (const Expr& e : euler_lagrange(p.lagrangian, p.bundle))
                    expected.equations.push_back({EqClass::el, {}, e, Expr()});
            else if (cmd == "bc")
                for (const Expr& e : boundary_conditions(p.lagrangian, p.bundle))
                    expected.equations.push_back({EqClass::boundary, {}, e, Expr()});
            else if (cmd == "cel") {
                std::vector<Expr> psis;
                std::vector<std::string> tags;
                for (const auto& ic : p.constraints.as_implicit()) {
                    psis.push_back(ic.psi);
                    tags.push_back(ic.tag);
                }
                for (const Expr& e :
                     constrained_euler_lagrange(p.lagrangian, psis, p.bundle, tags).equations)
                    expected.equations.push_back({EqClass::el, {}, e, Expr()});
            } else if (cmd == "sr") {
                expected = sr_equations(p.lagrangian, p.bundle);
                expected.equations.push_back(w0_relation(p.lagrangian, p.bundle));
            } else if (cmd == "csr") {
                expected = constrained_sr_equations(p.lagrangian, p.constraints, p.bundle);
                expected.equations.push_back(w0_relation(p.lagrangian, p.bundle));
            } else {
                expected = eliminate_multipliers(p.lagrangian, p.constraints, p.bundle);
            }

            const auto& eqs = j.at("equations");
            REQUIRE(eqs.size() == expected.equations.size());
            for (size_t i = 0; i < eqs.size(); ++i) {
                CHECK(expr_from_json(eqs[static_cast<int>(i)].at("lhs")) ==
                      expected.equations[i].lhs);
                CHECK(expr_from_json(eqs[static_cast<int>(i)].at("rhs")) ==
                      expected.equations[i].rhs);
            }
        }
    }

    SECTION("hessian command") {
        CliResult r = run_command("hessian", euler_fixture(), opt, "euler.jv");
        Json j = Json::parse(r.output);
        CHECK(j.at("rank") == 2);
        CHECK(j.at("matrix").size() == 5);
        auto expected = fixture_detail::euler_expected_hessian();
        for (int rr = 0; rr < 5; ++rr)
            for (int cc = 0; cc < 5; ++cc)
                CHECK(expr_from_json(j.at("matrix")[rr][cc]) ==
                      expected[static_cast<size_t>(rr)][static_cast<size_t>(cc)]);
    }
}

TEST_CASE("latex rendering", "[cli]") {
    CliOptions opt;
    opt.format = Format::latex;
    CliResult r = run_command("csr", euler_fixture(), opt);
    CHECK(r.output.find("\\begin{align*}") != std::string::npos);
    CHECK(r.output.find("\\lambda") != std::string::npos);
    CHECK(r.output.find("p^{x}") != std::string::npos);

    BundleSpec b = navier_stokes_fixture().bundle;
    Expr e = Expr(Atom::opaque("nu", MultiIndex{0, 2, 0})) * Expr(Atom::jet_coord(0, MultiIndex{1, 0, 0}));
    CHECK(render_latex(e, b) == "u_{t} \\partial^{2}_{xx}\\nu");
}

TEST_CASE("stored-table verification reports the known state", "[cli][fixture]") {
    VerifyReport rep = verify_paper();
    for (const auto& c : rep.checks) {
        bool expected_pass = c.name.rfind("navier-stokes/cel/", 0) != 0;
        INFO(c.name << ": " << c.detail);
        CHECK(c.pass == expected_pass);
    }
    CliResult r = run_verify_paper(Format::text);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL  navier-stokes/cel/u") != std::string::npos);
}
