#pragma once

#include "fixtures.hpp"
#include "jsonio.hpp"

#include <sstream>
#include <string>

namespace jetvar {

struct CliOptions {
    Format format = Format::text;
    bool strict_paper = false;
    int order = -1; // prolongation target; defaults to the bundle order
};

struct CliResult {
    std::string output;
    int exit_code = 0; // 0 ok, 1 verification mismatch, 2 input error
};

namespace cli_detail {

inline std::string equations_text(const EquationSet& set, const BundleSpec& b, bool with_class) {
    std::ostringstream os;
    for (const auto& d : set.diagnostics) os << "# " << d << "\n";
    for (const auto& e : set.equations) {
        if (with_class) {
            os << eqclass_name(e.cls);
            if (!e.indices.empty()) {
                os << "[";
                bool first = true;
                for (const auto& [k, v] : e.indices) {
                    if (!first) os << ", ";
                    os << k << "=" << v;
                    first = false;
                }
                os << "]";
            }
            os << ": ";
        }
        os << render_equation(e, b, Format::text) << "\n";
    }
    return os.str();
}

inline std::string equations_latex(const EquationSet& set, const BundleSpec& b) {
    std::ostringstream os;
    os << "\\begin{align*}\n";
    for (const auto& e : set.equations)
        os << render_equation(e, b, Format::latex) << " \\\\\n";
    os << "\\end{align*}\n";
    return os.str();
}

inline CliResult render_set(const EquationSet& set, const BundleSpec& b,
                            const std::string& command, const std::string& problem_name,
                            const CliOptions& opt, bool with_class) {
    switch (opt.format) {
        case Format::text: return {equations_text(set, b, with_class), 0};
        case Format::latex: return {equations_latex(set, b), 0};
        case Format::json:
            return {equationset_to_json(set, b, command, problem_name).dump(2) + "\n", 0};
    }
    return {"", 2};
}

inline EquationSet as_el_set(const std::vector<Expr>& eqs, const BundleSpec& b, EqClass cls) {
    EquationSet set;
    for (size_t i = 0; i < eqs.size(); ++i) {
        Equation e;
        e.cls = cls;
        if (cls == EqClass::el && i < b.fiber_names.size())
            e.indices["alpha"] = b.fiber_names[i];
        e.lhs = eqs[i];
        e.rhs = Expr();
        set.equations.push_back(std::move(e));
    }
    return set;
}

} // namespace cli_detail

namespace cli_detail {
CliResult run_command_impl(const std::string& command, const FieldProblem& p,
                           const CliOptions& opt, const std::string& problem_name);
}

inline CliResult run_command(const std::string& command, const FieldProblem& p,
                             const CliOptions& opt, const std::string& problem_name = "") {
    try {
        return cli_detail::run_command_impl(command, p, opt, problem_name);
    } catch (const std::exception& e) {
        return {std::string("error: ") + e.what() + "\n", 2};
    }
}

inline CliResult cli_detail::run_command_impl(const std::string& command, const FieldProblem& p,
                                              const CliOptions& opt,
                                              const std::string& problem_name) {
    const BundleSpec& b = p.bundle;

    if (command == "el") {
        auto set = cli_detail::as_el_set(euler_lagrange(p.lagrangian, b), b, EqClass::el);
        return cli_detail::render_set(set, b, command, problem_name, opt, false);
    }

    if (command == "bc") {
        auto set = cli_detail::as_el_set(boundary_conditions(p.lagrangian, b), b,
                                         EqClass::boundary);
        return cli_detail::render_set(set, b, command, problem_name, opt, false);
    }

    if (command == "cel") {
        std::vector<Expr> psis;
        std::vector<std::string> tags;
        for (const auto& ic : p.constraints.as_implicit()) {
            psis.push_back(ic.psi);
            tags.push_back(ic.tag);
        }
        ConstrainedEL cel = constrained_euler_lagrange(p.lagrangian, psis, b, tags);
        auto set = cli_detail::as_el_set(cel.equations, b, EqClass::el);
        std::string mul;
        for (const Atom& lam : cel.multipliers) mul += " " + lam.name;
        if (!mul.empty()) set.diagnostics.push_back("multipliers:" + mul);
        for (size_t mu = 0; mu < psis.size(); ++mu)
            if (psis[mu].is_zero())
                set.diagnostics.push_back("constraint '" + tags[mu] +
                                          "' is identically zero; its multiplier is "
                                          "unconstrained");
        return cli_detail::render_set(set, b, command, problem_name, opt, false);
    }

    if (command == "sr" || command == "csr") {
        EquationSet set = (command == "sr")
                              ? sr_equations(p.lagrangian, b, opt.strict_paper)
                              : constrained_sr_equations(p.lagrangian, p.constraints, b,
                                                         opt.strict_paper);
        set.equations.push_back(w0_relation(p.lagrangian, b));
        set.diagnostics.push_back("H = " + render_text(hamiltonian(p.lagrangian, b), b));
        return cli_detail::render_set(set, b, command, problem_name, opt, true);
    }

    if (command == "eliminate") {
        EquationSet set = eliminate_multipliers(p.lagrangian, p.constraints, b);
        return cli_detail::render_set(set, b, command, problem_name, opt, true);
    }

    if (command == "prolong") {
        int target = opt.order < 0 ? b.k : opt.order;
        if (target > b.k)
            return {"error: prolongation order exceeds the bundle order\n", 2};
        std::vector<Expr> psis;
        std::vector<std::string> tags;
        for (const auto& ic : p.constraints.as_implicit()) {
            psis.push_back(ic.psi);
            tags.push_back(ic.tag);
        }
        if (psis.empty()) return {"error: the problem declares no constraints\n", 2};
        ProlongationResult pr = prolong_constraints(psis, target, b);
        std::vector<ImplicitConstraint> cons;
        for (size_t i = 0; i < pr.generators.size(); ++i) {
            std::string tag = tags[static_cast<size_t>(pr.origin[i])];
            std::string suffix = detail::axes_word(pr.derivative_tags[i], b);
            if (!suffix.empty()) tag += "_" + suffix;
            cons.push_back({tag, pr.generators[i]});
        }
        if (opt.format == Format::json) {
            Json j;
            j["problem"] = problem_name;
            j["command"] = command;
            j["order"] = target;
            j["iterations"] = pr.iterations;
            j["affine"] = pr.affine;
            Json arr = Json::array();
            for (const auto& ic : cons)
                arr.push_back(Json{{"tag", ic.tag}, {"psi", expr_to_json(ic.psi, b)},
                                   {"text", render_text(ic.psi, b)}});
            j["constraints"] = std::move(arr);
            return {j.dump(2) + "\n", 0};
        }
        std::ostringstream os;
        os << "# prolonged to order " << target << " in " << pr.iterations << " sweep(s)\n";
        if (opt.format == Format::latex) {
            os << "\\begin{align*}\n";
            for (const auto& ic : cons) os << render_latex(ic.psi, b) << " &= 0 \\\\\n";
            os << "\\end{align*}\n";
        } else
            os << render_constraint_block(cons, b);
        return {os.str(), 0};
    }

    if (command == "hessian") {
        HessianReport rep = regularity_hessian(
            p.lagrangian, p.constraints.empty() ? nullptr : &p.constraints, b);
        if (opt.format == Format::json) {
            Json j;
            j["problem"] = problem_name;
            j["command"] = command;
            Json coords = Json::array();
            for (const auto& [alpha, K] : rep.coordinates)
                coords.push_back(
                    render_text(Expr(Atom::jet_coord(alpha, K)), b));
            j["coordinates"] = std::move(coords);
            Json rows = Json::array();
            for (const auto& row : rep.matrix) {
                Json r = Json::array();
                for (const Expr& e : row) r.push_back(expr_to_json(e, b));
                rows.push_back(std::move(r));
            }
            j["matrix"] = std::move(rows);
            j["rank"] = rep.rank;
            j["regular"] = rep.regular();
            return {j.dump(2) + "\n", 0};
        }
        std::ostringstream os;
        os << "# coordinates:";
        for (const auto& [alpha, K] : rep.coordinates)
            os << " " << render_text(Expr(Atom::jet_coord(alpha, K)), b);
        os << "\n";
        if (opt.format == Format::latex) {
            os << "\\begin{pmatrix}\n";
            for (const auto& row : rep.matrix) {
                for (size_t c = 0; c < row.size(); ++c)
                    os << render_latex(row[c], b) << (c + 1 < row.size() ? " & " : "");
                os << " \\\\\n";
            }
            os << "\\end{pmatrix}\n";
        } else {
            for (const auto& row : rep.matrix) {
                os << "[ ";
                for (size_t c = 0; c < row.size(); ++c)
                    os << render_text(row[c], b) << (c + 1 < row.size() ? ", " : "");
                os << " ]\n";
            }
        }
        os << "rank = " << rep.rank << (rep.regular() ? " (regular)" : " (degenerate)") << "\n";
        return {os.str(), 0};
    }

    return {"error: unknown command '" + command + "'\n", 2};
}

inline CliResult run_verify_paper(Format format) {
    VerifyReport rep = verify_paper();
    if (format == Format::json) {
        Json arr = Json::array();
        for (const auto& c : rep.checks)
            arr.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        Json j{{"command", "verify-paper"}, {"checks", std::move(arr)},
               {"all_pass", rep.all_pass()}};
        return {j.dump(2) + "\n", rep.all_pass() ? 0 : 1};
    }
    std::ostringstream os;
    for (const auto& c : rep.checks) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
    }
    os << (rep.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
    return {os.str(), rep.all_pass() ? 0 : 1};
}

} // namespace jetvar
