#pragma once

#include "multiindex.hpp"

#include <map>
#include <stdexcept>

namespace jetvar {

/// Raised when a Q family fed to the paired lower-sum identity violates the
/// side condition sum_{I+1_i=J} (I(i)+1)/(|I|+1) Q^{I,i} = 0. Kept distinct
/// from a plain identity failure, which is reported as a false return.
class QConditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class LemmaCase { fubini, identity, lower_sum, lower_paired_sum };

/// Input tables for verify_lemmas. Missing entries count as zero.
struct CoefficientTables {
    int m = 1;
    int level = 1;                                       // k for fubini, l otherwise
    MultiIndex J;                                        // identity case only
    std::map<std::pair<MultiIndex, int>, Rational> a_Ii; // fubini: a_{I,i}, |I| = level-1
    std::map<MultiIndex, Rational> a_J;                  // lower sums: a_J, |J| = level
    std::map<MultiIndex, Rational> b_J;                  // paired lower sum: b^J
    std::map<std::pair<MultiIndex, int>, Rational> q_Ii; // paired lower sum: Q^{I,i}
};

namespace detail {

template <typename Map, typename Key>
Rational lookup0(const Map& m, const Key& k) {
    auto it = m.find(k);
    return it == m.end() ? Rational(0) : it->second;
}

inline Rational weight(const MultiIndex& I, int i) {
    return Rational(I[i] + 1, I.order() + 1);
}

} // namespace detail

/// sum_{I+1_i=J} (I(i)+1)/(|I|+1) == 1 for non-zero J.
inline bool verify_identity(const MultiIndex& J) {
    if (J.is_zero()) throw std::invalid_argument("identity lemma requires a non-zero multi-index");
    Rational s = 0;
    for (const auto& [I, i] : decompositions(J)) s += detail::weight(I, i);
    return s == 1;
}

/// sum_{|I|=k-1} sum_i a_{I,i} == sum_{|J|=k} sum_{I+1_i=J} a_{I,i}.
inline bool verify_fubini(int m, int k, const std::map<std::pair<MultiIndex, int>, Rational>& a) {
    if (m < 1 || k < 1) throw std::invalid_argument("fubini lemma requires m >= 1 and k >= 1");
    Rational lhs = 0;
    for (const auto& I : multiindexes_of_order(m, k - 1))
        for (int i = 0; i < m; ++i) lhs += detail::lookup0(a, std::pair(I, i));
    Rational rhs = 0;
    for (const auto& J : multiindexes_of_order(m, k))
        for (const auto& [I, i] : decompositions(J)) rhs += detail::lookup0(a, std::pair(I, i));
    return lhs == rhs;
}

/// sum_{|J|=l} a_J == sum_{|I|=l-1} sum_i (I(i)+1)/(|I|+1) a_{I+1_i}.
inline bool verify_lower_sum(int m, int l, const std::map<MultiIndex, Rational>& a) {
    if (m < 1 || l < 1) throw std::invalid_argument("lower-sum lemma requires m >= 1 and l >= 1");
    Rational lhs = 0;
    for (const auto& J : multiindexes_of_order(m, l)) lhs += detail::lookup0(a, J);
    Rational rhs = 0;
    for (const auto& I : multiindexes_of_order(m, l - 1))
        for (int i = 0; i < m; ++i)
            rhs += detail::weight(I, i) * detail::lookup0(a, I.incremented(i));
    return lhs == rhs;
}

/// sum_{|J|=l} b^J a_J == sum_{|I|=l-1} sum_i (I(i)+1)/(|I|+1)(b^{I+1_i}+Q^{I,i}) a_{I+1_i},
/// with the Q side condition checked first.
inline bool verify_lower_paired_sum(int m, int l,
                                    const std::map<MultiIndex, Rational>& a,
                                    const std::map<MultiIndex, Rational>& b,
                                    const std::map<std::pair<MultiIndex, int>, Rational>& q) {
    if (m < 1 || l < 1) throw std::invalid_argument("paired lower-sum lemma requires m >= 1 and l >= 1");
    for (const auto& J : multiindexes_of_order(m, l)) {
        Rational s = 0;
        for (const auto& [I, i] : decompositions(J))
            s += detail::weight(I, i) * detail::lookup0(q, std::pair(I, i));
        if (s != 0)
            throw QConditionError("Q family violates the side condition at J = " + J.str());
    }
    Rational lhs = 0;
    for (const auto& J : multiindexes_of_order(m, l))
        lhs += detail::lookup0(b, J) * detail::lookup0(a, J);
    Rational rhs = 0;
    for (const auto& I : multiindexes_of_order(m, l - 1))
        for (int i = 0; i < m; ++i) {
            const MultiIndex J = I.incremented(i);
            rhs += detail::weight(I, i) *
                   (detail::lookup0(b, J) + detail::lookup0(q, std::pair(I, i))) *
                   detail::lookup0(a, J);
        }
    return lhs == rhs;
}

inline bool verify_lemmas(const CoefficientTables& t, LemmaCase which) {
    switch (which) {
        case LemmaCase::fubini: return verify_fubini(t.m, t.level, t.a_Ii);
        case LemmaCase::identity: return verify_identity(t.J);
        case LemmaCase::lower_sum: return verify_lower_sum(t.m, t.level, t.a_J);
        case LemmaCase::lower_paired_sum:
            return verify_lower_paired_sum(t.m, t.level, t.a_J, t.b_J, t.q_Ii);
    }
    throw std::invalid_argument("unknown lemma case");
}

} // namespace jetvar
