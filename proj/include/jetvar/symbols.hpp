#pragma once

#include "multiindex.hpp"

#include <compare>
#include <string>
#include <tuple>

namespace jetvar {

/// Atom kinds, listed in the fixed total order used for monomials:
/// base coordinates, then jet coordinates, momenta, the energy coordinate,
/// multipliers, opaque base functions, multivector coefficients.
enum class AtomKind {
    base,             // x^i
    jet,              // u^alpha_J (J = 0 gives u^alpha itself)
    momentum,         // p^{Ii}_alpha, |I| <= k-1
    energy,           // p
    multiplier_base,  // lambda_mu : M -> R, with a partial-derivative record
    multiplier_fiber, // lambda^{Jhat}_{alphahat}, defined on the velocity-momentum space
    opaque,           // declared base function (nu, Pi, ...) with derivative record
    coefficient,      // multivector coefficients A^alpha_{Jj}, B^{Ii}_{alpha j}, C_j
};

enum class CoeffClass { A, B, C };

struct Atom {
    AtomKind kind = AtomKind::energy;
    int fiber = -1;        // alpha (jet, momentum, A, B)
    int axis = -1;         // base coordinate; the extra momentum index i; B's i
    int j = -1;            // the j index of A, B, C coefficients
    CoeffClass cc = CoeffClass::A;
    MultiIndex index;      // jet J / momentum I / derivative record / coeff multi-index
    std::string name;      // opaque function name or multiplier tag

    static Atom base_coord(int axis) {
        Atom a; a.kind = AtomKind::base; a.axis = axis; return a;
    }
    static Atom jet_coord(int fiber, MultiIndex J) {
        Atom a; a.kind = AtomKind::jet; a.fiber = fiber; a.index = std::move(J); return a;
    }
    static Atom momentum(int fiber, MultiIndex I, int i) {
        Atom a; a.kind = AtomKind::momentum; a.fiber = fiber; a.index = std::move(I); a.axis = i;
        return a;
    }
    static Atom energy() {
        Atom a; a.kind = AtomKind::energy; return a;
    }
    static Atom multiplier_base(std::string tag, MultiIndex record) {
        Atom a; a.kind = AtomKind::multiplier_base; a.name = std::move(tag);
        a.index = std::move(record); return a;
    }
    static Atom multiplier_fiber(std::string tag) {
        Atom a; a.kind = AtomKind::multiplier_fiber; a.name = std::move(tag); return a;
    }
    static Atom opaque(std::string fn, MultiIndex record) {
        Atom a; a.kind = AtomKind::opaque; a.name = std::move(fn); a.index = std::move(record);
        return a;
    }
    static Atom coeff_A(int fiber, MultiIndex J, int j) {
        Atom a; a.kind = AtomKind::coefficient; a.cc = CoeffClass::A; a.fiber = fiber;
        a.index = std::move(J); a.j = j; return a;
    }
    static Atom coeff_B(int fiber, MultiIndex I, int i, int j) {
        Atom a; a.kind = AtomKind::coefficient; a.cc = CoeffClass::B; a.fiber = fiber;
        a.index = std::move(I); a.axis = i; a.j = j; return a;
    }
    static Atom coeff_C(int j) {
        Atom a; a.kind = AtomKind::coefficient; a.cc = CoeffClass::C; a.j = j; return a;
    }

    std::strong_ordering operator<=>(const Atom& o) const {
        if (auto c = kind <=> o.kind; c != 0) return c;
        switch (kind) {
            case AtomKind::base: return axis <=> o.axis;
            case AtomKind::jet:
                if (auto c = fiber <=> o.fiber; c != 0) return c;
                return index <=> o.index;
            case AtomKind::momentum:
                if (auto c = fiber <=> o.fiber; c != 0) return c;
                if (auto c = index <=> o.index; c != 0) return c;
                return axis <=> o.axis;
            case AtomKind::energy: return std::strong_ordering::equal;
            case AtomKind::multiplier_base:
                if (auto c = name.compare(o.name) <=> 0; c != 0) return c;
                return index <=> o.index;
            case AtomKind::multiplier_fiber: return name.compare(o.name) <=> 0;
            case AtomKind::opaque:
                if (auto c = name.compare(o.name) <=> 0; c != 0) return c;
                return index <=> o.index;
            case AtomKind::coefficient:
                if (auto c = cc <=> o.cc; c != 0) return c;
                if (auto c = fiber <=> o.fiber; c != 0) return c;
                if (auto c = index <=> o.index; c != 0) return c;
                if (auto c = axis <=> o.axis; c != 0) return c;
                return j <=> o.j;
        }
        return std::strong_ordering::equal;
    }
    bool operator==(const Atom& o) const { return (*this <=> o) == 0; }
};

inline bool is_jet(const Atom& a) { return a.kind == AtomKind::jet; }
inline bool is_differentiable_by_base(const Atom& a) {
    return a.kind == AtomKind::base || a.kind == AtomKind::jet ||
           a.kind == AtomKind::multiplier_base || a.kind == AtomKind::opaque;
}

} // namespace jetvar
