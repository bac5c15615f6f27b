#pragma once

#include "parse.hpp"
#include "render.hpp"
#include "skinnerrusk.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace jetvar {

class ProblemError : public std::runtime_error {
public:
    ProblemError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A fully resolved problem: bundle, Lagrangian (definitions inlined at parse
/// time) and the declared constraint set.
struct FieldProblem {
    BundleSpec bundle;
    std::map<std::string, Expr> definitions; // kept for reference; already inlined
    Expr lagrangian;
    ConstraintSet constraints;

    ParseContext context() const { return ParseContext{&bundle, definitions}; }

    void validate() const {
        bundle.validate();
        validate_lagrangian(lagrangian, bundle);
        constraints.validate(bundle);
    }

    /// Resolved-content equality; definitions are parse-time sugar and do not
    /// participate.
    bool same_resolved(const FieldProblem& o) const {
        if (bundle.m != o.bundle.m || bundle.n != o.bundle.n || bundle.k != o.bundle.k)
            return false;
        if (bundle.base_names != o.bundle.base_names ||
            bundle.fiber_names != o.bundle.fiber_names)
            return false;
        if (!(lagrangian == o.lagrangian)) return false;
        if (constraints.solved.size() != o.constraints.solved.size() ||
            constraints.implicit.size() != o.constraints.implicit.size())
            return false;
        for (size_t i = 0; i < constraints.solved.size(); ++i) {
            const auto& a = constraints.solved[i];
            const auto& b2 = o.constraints.solved[i];
            if (a.fiber != b2.fiber || !(a.index == b2.index) || !(a.rhs == b2.rhs) ||
                a.tag != b2.tag)
                return false;
        }
        for (size_t i = 0; i < constraints.implicit.size(); ++i)
            if (constraints.implicit[i].tag != o.constraints.implicit[i].tag ||
                !(constraints.implicit[i].psi == o.constraints.implicit[i].psi))
                return false;
        return true;
    }
};

namespace detail {

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

} // namespace detail

inline FieldProblem parse_problem(const std::string& text) {
    FieldProblem p;
    enum class Section { none, bundle, functions, definitions, lagrangian, constraints };
    Section sec = Section::none;
    bool have_bundle = false, have_base = false, have_fiber = false, have_order = false;
    bool have_lagrangian = false;
    int auto_tag = 0;
    int total_constraint_lines = 0;
    {
        // count constraints first so single-constraint files get the bare tag
        std::istringstream pre(text);
        std::string l;
        bool in_cons = false;
        while (std::getline(pre, l)) {
            std::string s = detail::strip(l.substr(0, l.find('#')));
            if (s.empty()) continue;
            if (s.front() == '[') { in_cons = (s == "[constraints]"); continue; }
            if (in_cons) ++total_constraint_lines;
        }
    }

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    auto next_tag = [&]() {
        if (total_constraint_lines == 1) return std::string("lam");
        return "lam" + std::to_string(auto_tag++);
    };

    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = detail::strip(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[bundle]") sec = Section::bundle;
            else if (line == "[functions]") sec = Section::functions;
            else if (line == "[definitions]") sec = Section::definitions;
            else if (line == "[lagrangian]") sec = Section::lagrangian;
            else if (line == "[constraints]") sec = Section::constraints;
            else throw ProblemError("unknown section " + line, lineno);
            if (sec != Section::bundle && !have_bundle)
                throw ProblemError("the [bundle] section must come first", lineno);
            continue;
        }

        try {
            switch (sec) {
                case Section::none:
                    throw ProblemError("content before any section", lineno);
                case Section::bundle: {
                    auto eq = line.find('=');
                    if (eq == std::string::npos)
                        throw ProblemError("expected 'key = value'", lineno);
                    std::string key = detail::strip(line.substr(0, eq));
                    std::string val = detail::strip(line.substr(eq + 1));
                    if (key == "base") {
                        p.bundle.base_names = detail::split_words(val);
                        p.bundle.m = static_cast<int>(p.bundle.base_names.size());
                        have_base = true;
                    } else if (key == "fiber") {
                        p.bundle.fiber_names = detail::split_words(val);
                        p.bundle.n = static_cast<int>(p.bundle.fiber_names.size());
                        have_fiber = true;
                    } else if (key == "order") {
                        try {
                            p.bundle.k = std::stoi(val);
                        } catch (const std::exception&) {
                            throw ProblemError("order must be a positive integer", lineno);
                        }
                        if (p.bundle.k < 1)
                            throw ProblemError("order must be a positive integer", lineno);
                        have_order = true;
                    } else
                        throw ProblemError("unknown bundle key '" + key + "'", lineno);
                    if (have_base && have_fiber && have_order) {
                        p.bundle.validate();
                        have_bundle = true;
                    }
                    break;
                }
                case Section::functions: {
                    auto colon = line.find(':');
                    if (colon == std::string::npos)
                        throw ProblemError("expected 'name : dependencies'", lineno);
                    OpaqueFnDecl fn;
                    fn.name = detail::strip(line.substr(0, colon));
                    for (const std::string& w : detail::split_words(line.substr(colon + 1))) {
                        int axis = p.bundle.base_axis(w);
                        if (axis < 0)
                            throw ProblemError("'" + w + "' is not a base coordinate", lineno);
                        fn.deps.push_back(axis);
                    }
                    p.bundle.functions.push_back(std::move(fn));
                    p.bundle.validate();
                    break;
                }
                case Section::definitions: {
                    auto eq = line.find('=');
                    if (eq == std::string::npos)
                        throw ProblemError("expected 'name = expression'", lineno);
                    std::string name = detail::strip(line.substr(0, eq));
                    if (name.empty()) throw ProblemError("missing definition name", lineno);
                    if (p.bundle.base_axis(name) >= 0 || p.bundle.fiber_index(name) >= 0 ||
                        p.bundle.function(name) || p.definitions.count(name))
                        throw ProblemError("name '" + name + "' is already taken", lineno);
                    p.definitions[name] = parse_expr(line.substr(eq + 1), p.context());
                    break;
                }
                case Section::lagrangian: {
                    auto eq = line.find('=');
                    if (eq == std::string::npos || detail::strip(line.substr(0, eq)) != "L")
                        throw ProblemError("expected 'L = expression'", lineno);
                    if (have_lagrangian) throw ProblemError("duplicate Lagrangian", lineno);
                    p.lagrangian = parse_expr(line.substr(eq + 1), p.context());
                    have_lagrangian = true;
                    break;
                }
                case Section::constraints: {
                    auto words = detail::split_words(line);
                    if (words.empty()) break;
                    std::string rest = detail::strip(line.substr(words[0].size()));
                    std::string tag;
                    if (auto colon = rest.find(':'); colon != std::string::npos &&
                                                     rest.find('=') > colon) {
                        tag = detail::strip(rest.substr(0, colon));
                        rest = detail::strip(rest.substr(colon + 1));
                    }
                    if (tag.empty()) tag = next_tag();
                    if (words[0] == "solve") {
                        auto eq = rest.find('=');
                        if (eq == std::string::npos)
                            throw ProblemError("expected 'solve coordinate = expression'", lineno);
                        Expr lhs = parse_expr(rest.substr(0, eq), p.context());
                        Expr rhs = parse_expr(rest.substr(eq + 1), p.context());
                        const auto& lt = lhs.terms();
                        if (lt.size() != 1 || lt[0].second != 1 || lt[0].first.size() != 1 ||
                            lt[0].first[0].second != 1 ||
                            lt[0].first[0].first.kind != AtomKind::jet)
                            throw ProblemError("left side must be a single jet coordinate",
                                               lineno);
                        const Atom& hat = lt[0].first[0].first;
                        p.constraints.solved.push_back({hat.fiber, hat.index, rhs, tag});
                    } else if (words[0] == "implicit") {
                        p.constraints.implicit.push_back({tag, parse_expr(rest, p.context())});
                    } else
                        throw ProblemError("expected 'solve' or 'implicit'", lineno);
                    break;
                }
            }
        } catch (const ParseError& pe) {
            throw ProblemError(pe.what(), lineno);
        } catch (const std::invalid_argument& ia) {
            throw ProblemError(ia.what(), lineno);
        }
    }

    if (!have_bundle) throw ProblemError("missing or incomplete [bundle] section", lineno);
    if (!have_lagrangian) throw ProblemError("missing [lagrangian] section", lineno);
    p.validate();
    return p;
}

/// Canonical rendering in the problem-file grammar. Definitions are inlined
/// when read, so the output states the Lagrangian and constraints explicitly;
/// parsing the result reproduces the same resolved problem.
inline std::string render_problem(const FieldProblem& p) {
    std::ostringstream os;
    os << "[bundle]\n";
    os << "base =";
    for (const auto& s : p.bundle.base_names) os << " " << s;
    os << "\nfiber =";
    for (const auto& s : p.bundle.fiber_names) os << " " << s;
    os << "\norder = " << p.bundle.k << "\n";
    if (!p.bundle.functions.empty()) {
        os << "[functions]\n";
        for (const auto& fn : p.bundle.functions) {
            os << fn.name << " :";
            for (int a : fn.deps) os << " " << p.bundle.base_names[static_cast<size_t>(a)];
            os << "\n";
        }
    }
    os << "[lagrangian]\n";
    os << "L = " << render_text(p.lagrangian, p.bundle) << "\n";
    if (!p.constraints.empty()) {
        os << "[constraints]\n";
        for (const auto& sc : p.constraints.solved)
            os << "solve " << sc.tag << " : "
               << render_text(Expr(Atom::jet_coord(sc.fiber, sc.index)), p.bundle) << " = "
               << render_text(sc.rhs, p.bundle) << "\n";
        for (const auto& ic : p.constraints.implicit)
            os << "implicit " << ic.tag << " : " << render_text(ic.psi, p.bundle) << "\n";
    }
    return os.str();
}

/// Renders an implicit constraint block in the problem-file grammar, so
/// prolongation output can be pasted back into an input file.
inline std::string render_constraint_block(const std::vector<ImplicitConstraint>& cons,
                                           const BundleSpec& b) {
    std::ostringstream os;
    os << "[constraints]\n";
    for (const auto& ic : cons)
        os << "implicit " << ic.tag << " : " << render_text(ic.psi, b) << "\n";
    return os.str();
}

} // namespace jetvar
