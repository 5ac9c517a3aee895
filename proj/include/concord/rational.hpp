#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace concord {

// Exact integer/rational arithmetic for the transition-constant algebra.
// Values are converted to double only at the measure-evaluation boundary.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rational_pow2(int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= 2;
    for (int i = 0; i > e; --i) r /= 2;
    return r;
}

} // namespace concord
