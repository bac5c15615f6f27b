#pragma once

#include "equations.hpp"
#include "jetspace.hpp"
#include "render.hpp"

#include <json.hpp>

#include <string>

namespace jetvar {

using Json = nlohmann::json;

inline Json multiindex_to_json(const MultiIndex& I) {
    Json j = Json::array();
    for (int v : I.components()) j.push_back(v);
    return j;
}

inline MultiIndex multiindex_from_json(const Json& j) {
    std::vector<int> c;
    for (const auto& v : j) c.push_back(v.get<int>());
    return MultiIndex(std::move(c));
}

inline Json atom_to_json(const Atom& a, const BundleSpec& b) {
    Json j;
    switch (a.kind) {
        case AtomKind::base:
            j["kind"] = "base";
            j["axis"] = a.axis;
            j["name"] = b.base_names[static_cast<size_t>(a.axis)];
            break;
        case AtomKind::jet:
            j["kind"] = "jet";
            j["fiber"] = a.fiber;
            j["name"] = b.fiber_names[static_cast<size_t>(a.fiber)];
            j["index"] = multiindex_to_json(a.index);
            break;
        case AtomKind::momentum:
            j["kind"] = "momentum";
            j["fiber"] = a.fiber;
            j["index"] = multiindex_to_json(a.index);
            j["axis"] = a.axis;
            break;
        case AtomKind::energy:
            j["kind"] = "energy";
            break;
        case AtomKind::multiplier_base:
            j["kind"] = "multiplier";
            j["space"] = "base";
            j["tag"] = a.name;
            j["record"] = multiindex_to_json(a.index);
            break;
        case AtomKind::multiplier_fiber:
            j["kind"] = "multiplier";
            j["space"] = "fiber";
            j["tag"] = a.name;
            break;
        case AtomKind::opaque:
            j["kind"] = "function";
            j["name"] = a.name;
            j["record"] = multiindex_to_json(a.index);
            break;
        case AtomKind::coefficient:
            j["kind"] = "coefficient";
            j["class"] = a.cc == CoeffClass::A ? "A" : (a.cc == CoeffClass::B ? "B" : "C");
            if (a.cc != CoeffClass::C) {
                j["fiber"] = a.fiber;
                j["index"] = multiindex_to_json(a.index);
            }
            if (a.cc == CoeffClass::B) j["axis"] = a.axis;
            j["j"] = a.j;
            break;
    }
    return j;
}

inline Atom atom_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "base") return Atom::base_coord(j.at("axis").get<int>());
    if (kind == "jet")
        return Atom::jet_coord(j.at("fiber").get<int>(), multiindex_from_json(j.at("index")));
    if (kind == "momentum")
        return Atom::momentum(j.at("fiber").get<int>(), multiindex_from_json(j.at("index")),
                              j.at("axis").get<int>());
    if (kind == "energy") return Atom::energy();
    if (kind == "multiplier") {
        if (j.at("space").get<std::string>() == "base")
            return Atom::multiplier_base(j.at("tag").get<std::string>(),
                                         multiindex_from_json(j.at("record")));
        return Atom::multiplier_fiber(j.at("tag").get<std::string>());
    }
    if (kind == "function")
        return Atom::opaque(j.at("name").get<std::string>(), multiindex_from_json(j.at("record")));
    if (kind == "coefficient") {
        const std::string cc = j.at("class").get<std::string>();
        if (cc == "A")
            return Atom::coeff_A(j.at("fiber").get<int>(), multiindex_from_json(j.at("index")),
                                 j.at("j").get<int>());
        if (cc == "B")
            return Atom::coeff_B(j.at("fiber").get<int>(), multiindex_from_json(j.at("index")),
                                 j.at("axis").get<int>(), j.at("j").get<int>());
        return Atom::coeff_C(j.at("j").get<int>());
    }
    throw std::invalid_argument("unknown atom kind '" + kind + "'");
}

inline Json expr_to_json(const Expr& e, const BundleSpec& b) {
    Json terms = Json::array();
    for (const auto& [mono, coef] : e.terms()) {
        Json t;
        t["coeff"] = to_string(coef);
        Json factors = Json::array();
        for (const auto& [a, exp] : mono) {
            Json f = atom_to_json(a, b);
            f["power"] = exp;
            factors.push_back(std::move(f));
        }
        t["factors"] = std::move(factors);
        terms.push_back(std::move(t));
    }
    return Json{{"terms", std::move(terms)}};
}

inline Expr expr_from_json(const Json& j) {
    Expr out;
    for (const auto& t : j.at("terms")) {
        Expr term(rational_from_string(t.at("coeff").get<std::string>()));
        for (const auto& f : t.at("factors"))
            term = term * Expr(atom_from_json(f)).pow(f.at("power").get<int>());
        out += term;
    }
    return out;
}

inline Json equation_to_json(const Equation& eq, const BundleSpec& b) {
    Json j;
    j["class"] = eqclass_name(eq.cls);
    j["indices"] = eq.indices;
    j["lhs"] = expr_to_json(eq.lhs, b);
    j["rhs"] = expr_to_json(eq.rhs, b);
    j["text"] = render_text(eq.lhs, b) + " = " + render_text(eq.rhs, b);
    return j;
}

inline Json equationset_to_json(const EquationSet& set, const BundleSpec& b,
                                const std::string& command, const std::string& problem) {
    Json eqs = Json::array();
    for (const auto& e : set.equations) eqs.push_back(equation_to_json(e, b));
    return Json{{"problem", problem},
                {"command", command},
                {"equations", std::move(eqs)},
                {"diagnostics", set.diagnostics}};
}

} // namespace jetvar
