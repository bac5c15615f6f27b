#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace jetvar {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Integer binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    Integer acc = 1;
    for (int i = 0; i < r; ++i) {
        acc *= (n - i);
        acc /= (i + 1);
    }
    return acc;
}

inline std::string to_string(const Rational& q) { return q.str(); }

// "3", "-3", "3/4"
inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

} // namespace jetvar
