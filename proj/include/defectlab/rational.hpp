#ifndef DEFECTLAB_RATIONAL_HPP
#define DEFECTLAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "defectlab/errors.hpp"

namespace defectlab {

// Exact arbitrary-precision rational, kept in lowest terms by the backend.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rat& q) { return rat_den(q) == 1; }

// True iff the denominator of q (in lowest terms) is a power of p.
inline bool denominator_is_power_of(const Rat& q, int p) {
    Int d = rat_den(q);
    while (d % p == 0) d /= p;
    return d == 1;
}

inline Int int_pow(Int base, unsigned e) {
    Int r = 1;
    while (e--) r *= base;
    return r;
}

// "7", "-3/5". Integers may omit the denominator.
inline std::string rat_to_string(const Rat& q) {
    if (is_integer(q)) return rat_num(q).str();
    return rat_num(q).str() + "/" + rat_den(q).str();
}

inline Rat rat_from_string(const std::string& s) {
    auto bad = [&] { throw ParseError("bad rational literal: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) bad();
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat(); // unreachable
}

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace defectlab

#endif
