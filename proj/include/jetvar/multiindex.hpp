#pragma once

#include "rational.hpp"

#include <algorithm>
#include <compare>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jetvar {

/// An m-tuple of non-negative integers recording how many derivatives are
/// taken along each base axis. Stored dense; m is small in practice.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int m) : c_(static_cast<size_t>(m), 0) {
        if (m < 0) throw std::invalid_argument("multi-index size must be non-negative");
    }
    MultiIndex(std::initializer_list<int> vals) : c_(vals) { check_components(); }
    explicit MultiIndex(std::vector<int> vals) : c_(std::move(vals)) { check_components(); }

    static MultiIndex unit(int m, int axis) {
        MultiIndex u(m);
        if (axis < 0 || axis >= m) throw std::invalid_argument("axis out of range");
        u.c_[static_cast<size_t>(axis)] = 1;
        return u;
    }

    int size() const { return static_cast<int>(c_.size()); }
    int operator[](int i) const { return c_[static_cast<size_t>(i)]; }

    int order() const { return std::accumulate(c_.begin(), c_.end(), 0); }
    bool is_zero() const { return order() == 0; }

    Integer fact() const {
        Integer r = 1;
        for (int v : c_) r *= factorial(v);
        return r;
    }

    MultiIndex incremented(int axis) const {
        MultiIndex r = *this;
        r.c_.at(static_cast<size_t>(axis)) += 1;
        return r;
    }

    /// Canonical ordering: graded, ties broken so that derivatives along
    /// earlier axes come first (t-derivatives before x before y).
    std::strong_ordering operator<=>(const MultiIndex& o) const {
        if (auto c = size() <=> o.size(); c != 0) return c;
        if (auto c = order() <=> o.order(); c != 0) return c;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != o.c_[i]) return o.c_[i] <=> c_[i];
        return std::strong_ordering::equal;
    }
    bool operator==(const MultiIndex& o) const { return c_ == o.c_; }

    /// Renders as comma-separated components in parentheses, e.g. "(1,0,2)".
    std::string str() const {
        std::ostringstream os;
        os << '(';
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ',';
            os << c_[i];
        }
        os << ')';
        return os.str();
    }

    const std::vector<int>& components() const { return c_; }

private:
    void check_components() const {
        for (int v : c_)
            if (v < 0) throw std::invalid_argument("multi-index component must be non-negative");
    }
    std::vector<int> c_;
};

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& I) { return os << I.str(); }

inline void require_same_size(const MultiIndex& I, const MultiIndex& J) {
    if (I.size() != J.size()) throw std::invalid_argument("multi-index length mismatch");
}

inline MultiIndex mi_add(const MultiIndex& I, const MultiIndex& J) {
    require_same_size(I, J);
    std::vector<int> r(static_cast<size_t>(I.size()));
    for (int i = 0; i < I.size(); ++i) r[static_cast<size_t>(i)] = I[i] + J[i];
    return MultiIndex(std::move(r));
}

inline MultiIndex mi_sub(const MultiIndex& I, const MultiIndex& J) {
    require_same_size(I, J);
    std::vector<int> r(static_cast<size_t>(I.size()));
    for (int i = 0; i < I.size(); ++i) {
        if (I[i] < J[i]) throw std::domain_error("difference is not a multi-index");
        r[static_cast<size_t>(i)] = I[i] - J[i];
    }
    return MultiIndex(std::move(r));
}

/// All pairs (I, i) with I + 1_i = J; one pair per axis with J(i) >= 1.
inline std::vector<std::pair<MultiIndex, int>> decompositions(const MultiIndex& J) {
    std::vector<std::pair<MultiIndex, int>> out;
    for (int i = 0; i < J.size(); ++i)
        if (J[i] >= 1) {
            std::vector<int> c = J.components();
            c[static_cast<size_t>(i)] -= 1;
            out.emplace_back(MultiIndex(std::move(c)), i);
        }
    return out;
}

/// All multi-indexes of length m with |I| == order, in canonical order.
inline std::vector<MultiIndex> multiindexes_of_order(int m, int order) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int axis, int left) {
        if (axis == m - 1) {
            cur[static_cast<size_t>(axis)] = left;
            out.emplace_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[static_cast<size_t>(axis)] = v;
            rec(axis + 1, left - v);
        }
    };
    if (m >= 1) rec(0, order);
    return out;
}

/// All multi-indexes with |I| <= max_order, graded then canonical order.
inline std::vector<MultiIndex> multiindexes_up_to(int m, int max_order) {
    std::vector<MultiIndex> out;
    for (int l = 0; l <= max_order; ++l) {
        auto layer = multiindexes_of_order(m, l);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

/// The boundary coefficient of the higher-order integration by parts formula,
/// lambda(I_f, I_g, J) = (-1)^{|I_g|} (|I_f|! |I_g|! / |J|!) (J! / (I_f! I_g!)),
/// defined when I_f + I_g + 1_i = J for some axis i.
inline Rational ibp_lambda(const MultiIndex& If, const MultiIndex& Ig, const MultiIndex& J) {
    require_same_size(If, Ig);
    require_same_size(If, J);
    const MultiIndex sum = mi_add(If, Ig);
    bool ok = false;
    for (int i = 0; i < J.size() && !ok; ++i)
        ok = (sum.incremented(i) == J);
    if (!ok) throw std::domain_error("ibp_lambda requires I_f + I_g + 1_i = J for some axis i");
    Rational sign = (Ig.order() % 2 == 0) ? 1 : -1;
    Rational lengths(factorial(If.order()) * factorial(Ig.order()), factorial(J.order()));
    Rational facts(J.fact(), If.fact() * Ig.fact());
    return sign * lengths * facts;
}

} // namespace jetvar
