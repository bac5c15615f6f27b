#pragma once

#include "jetspace.hpp"
#include "variational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace jetvar {

/// Row reduction over the rationals of expressions viewed as vectors in the
/// monomial basis. Returns the reduced rows (zero rows dropped).
class RationalRowSpace {
public:
    /// Reduces e against the current basis; returns the residue. When the
    /// residue is non-zero it is added to the basis.
    Expr reduce_and_insert(const Expr& e) {
        Expr r = reduce(e);
        if (!r.is_zero()) {
            Rational lead = r.leading_coefficient();
            rows_.push_back(Rational(1) / lead * r);
        }
        return r;
    }

    Expr reduce(Expr e) const {
        bool changed = true;
        while (changed && !e.is_zero()) {
            changed = false;
            for (const Expr& row : rows_) {
                if (e.is_zero()) break;
                // eliminate the row's leading monomial if present in e
                for (const auto& [m, c] : e.terms()) {
                    if (m == row.leading_monomial()) {
                        e -= c * row;
                        changed = true;
                        break;
                    }
                }
            }
        }
        return e;
    }

    size_t dimension() const { return rows_.size(); }
    const std::vector<Expr>& rows() const { return rows_; }

    bool same_space(const RationalRowSpace& o) const {
        if (dimension() != o.dimension()) return false;
        for (const Expr& r : rows_)
            if (!o.reduce(r).is_zero()) return false;
        return true;
    }

private:
    std::vector<Expr> rows_;
};

inline bool is_affine_in_atoms(const Expr& e) { return e.degree() <= 1; }

struct ProlongationResult {
    std::vector<Expr> generators;            // deterministic order
    std::vector<MultiIndex> derivative_tags; // D^J applied to produce each generator
    std::vector<int> origin;                 // index of the originating constraint
    int iterations = 0;                      // sweeps until stabilization
    bool affine = false;                     // affine path (redundancy eliminated)
};

/// Closure of the constraints under total derivatives up to the target jet
/// order. Affine-linear constraint systems get exact redundancy elimination
/// by row reduction over the rationals and row-space stabilization; general
/// systems keep every generator and stabilize by canonical set equality.
inline ProlongationResult prolong_constraints(const std::vector<Expr>& psis, int target_order,
                                              const BundleSpec& b) {
    for (const Expr& psi : psis) {
        validate_lagrangian(psi, b);
        if (psi.max_jet_order() > target_order)
            throw std::invalid_argument("target order below constraint order");
    }

    ProlongationResult out;
    out.affine = true;
    for (const Expr& psi : psis) out.affine = out.affine && is_affine_in_atoms(psi);

    struct Generator { Expr e; int origin; MultiIndex tag; };
    auto tag_order = [](const Generator& a, const Generator& b2) {
        if (a.origin != b2.origin) return a.origin < b2.origin;
        return a.tag < b2.tag;
    };

    std::vector<Generator> gens;
    {
        RationalRowSpace seen;
        for (size_t mu = 0; mu < psis.size(); ++mu) {
            if (out.affine && seen.reduce_and_insert(psis[mu]).is_zero())
                continue; // input already dependent on earlier inputs
            gens.push_back({psis[mu], static_cast<int>(mu), MultiIndex(b.m)});
        }
    }

    auto snapshot_rowspace = [&]() {
        RationalRowSpace rs;
        for (const Generator& g : gens) rs.reduce_and_insert(g.e);
        return rs;
    };
    auto contains_canonical = [&](const Expr& e) {
        for (const Generator& g : gens)
            if (g.e == e) return true;
        return false;
    };

    while (true) {
        out.iterations += 1;
        std::optional<RationalRowSpace> before;
        if (out.affine) before = snapshot_rowspace();
        size_t count_before = gens.size();

        std::vector<Generator> sweep;
        for (const Generator& g : gens) {
            if (g.e.max_jet_order() >= target_order) continue;
            for (int i = 0; i < b.m; ++i)
                sweep.push_back({total_derivative(g.e, i, b), g.origin, g.tag.incremented(i)});
        }
        std::sort(sweep.begin(), sweep.end(), tag_order);
        for (Generator& g : sweep) {
            if (g.e.is_zero()) continue;
            if (out.affine) {
                RationalRowSpace rs = snapshot_rowspace();
                if (rs.reduce(g.e).is_zero()) continue; // dependent on kept rows
                gens.push_back(std::move(g));
            } else {
                if (contains_canonical(g.e)) continue;
                gens.push_back(std::move(g));
            }
        }

        bool stable = out.affine ? before->same_space(snapshot_rowspace())
                                 : gens.size() == count_before;
        if (stable) break;
    }

    std::sort(gens.begin(), gens.end(), tag_order);
    for (Generator& g : gens) {
        out.generators.push_back(std::move(g.e));
        out.derivative_tags.push_back(std::move(g.tag));
        out.origin.push_back(g.origin);
    }
    return out;
}

} // namespace jetvar
