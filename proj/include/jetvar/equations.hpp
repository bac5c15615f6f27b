#pragma once

#include "expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace jetvar {

enum class EqClass {
    el,
    boundary,
    holonomy,
    dynamics_bottom,
    dynamics_mid,
    dynamics_top,
    tangency_w1,
    tangency_h0,
    tangency_constraint,
    multiplier_free,
    submanifold_w0,
    submanifold_w1,
    submanifold_wc2,
};

inline const char* eqclass_name(EqClass c) {
    switch (c) {
        case EqClass::el: return "EL";
        case EqClass::boundary: return "boundary";
        case EqClass::holonomy: return "holonomy";
        case EqClass::dynamics_bottom: return "dynamics-bottom";
        case EqClass::dynamics_mid: return "dynamics-mid";
        case EqClass::dynamics_top: return "dynamics-top";
        case EqClass::tangency_w1: return "tangency-W1";
        case EqClass::tangency_h0: return "tangency-H0";
        case EqClass::tangency_constraint: return "tangency-constraint";
        case EqClass::multiplier_free: return "multiplier-free";
        case EqClass::submanifold_w0: return "submanifold-W0";
        case EqClass::submanifold_w1: return "submanifold-W1";
        case EqClass::submanifold_wc2: return "submanifold-WC2";
    }
    return "?";
}

struct Equation {
    EqClass cls = EqClass::el;
    std::map<std::string, std::string> indices; // alpha, J, j, level, variant ...
    Expr lhs, rhs;

    Expr residual() const { return lhs - rhs; }
};

struct EquationSet {
    std::vector<Equation> equations;
    std::vector<std::string> diagnostics;

    std::vector<const Equation*> by_class(EqClass c) const {
        std::vector<const Equation*> out;
        for (const auto& e : equations)
            if (e.cls == c) out.push_back(&e);
        return out;
    }

    bool contains_atom_kind(AtomKind k) const {
        for (const auto& e : equations)
            if (e.lhs.contains_kind(k) || e.rhs.contains_kind(k)) return true;
        return false;
    }
};

} // namespace jetvar
