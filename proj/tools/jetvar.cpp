// jetvar: derive Euler-Lagrange and unified velocity-momentum equation
// systems for higher-order field theories with constraints.

#include <jetvar/jetvar.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic variational calculus on higher-order jet bundles"};
    app.require_subcommand(1);

    std::string format_name = "text";
    app.add_option("--format", format_name, "output format: text, latex or json")
        ->envname("JETVAR_FORMAT")
        ->check(CLI::IsMember({"text", "latex", "json"}));

    struct Sub {
        CLI::App* cmd;
        std::string problem_path;
        bool strict_paper = false;
        int order = -1;
    };
    std::map<std::string, Sub> subs;
    auto add = [&](const std::string& name, const std::string& desc, bool needs_file,
                   bool has_strict, bool has_order) {
        Sub s;
        s.cmd = app.add_subcommand(name, desc);
        if (needs_file)
            s.cmd->add_option("problem", s.problem_path, "problem file")->required();
        if (has_strict)
            s.cmd->add_flag("--strict-paper", s.strict_paper,
                            "also emit the literal variant of the energy tangency equation");
        if (has_order)
            s.cmd->add_option("--order", s.order, "target jet order for the prolongation");
        subs[name] = std::move(s);
    };

    add("el", "higher-order Euler-Lagrange equations", true, false, false);
    add("cel", "constrained Euler-Lagrange equations", true, false, false);
    add("bc", "natural boundary conditions", true, false, false);
    add("sr", "unconstrained velocity-momentum equation system", true, true, false);
    add("csr", "constrained velocity-momentum equation system", true, true, false);
    add("eliminate", "multiplier-free reduced equations (solved-form constraints)", true, false,
        false);
    add("prolong", "close the constraint set under total derivatives", true, false, true);
    add("hessian", "regularity matrix and its symbolic rank", true, false, false);
    add("verify-paper", "check the built-in fixtures against their stored tables", false, false,
        false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        jetvar::Format format = jetvar::format_from_string(format_name);
        for (auto& [name, s] : subs) {
            if (!s.cmd->parsed()) continue;
            jetvar::CliResult res;
            if (name == "verify-paper") {
                res = jetvar::run_verify_paper(format);
            } else {
                jetvar::FieldProblem p = jetvar::parse_problem(read_file(s.problem_path));
                jetvar::CliOptions opt;
                opt.format = format;
                opt.strict_paper = s.strict_paper;
                opt.order = s.order;
                res = jetvar::run_command(name, p, opt, s.problem_path);
            }
            if (res.exit_code == 2) std::cerr << res.output;
            else std::cout << res.output;
            return res.exit_code;
        }
        std::cerr << "error: no command given\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
