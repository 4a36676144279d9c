#ifndef CURVETAU_RATIONAL_HPP
#define CURVETAU_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace curvetau {

// Exact rational coefficients. mpq keeps gcd(|num|,den)=1 and den>0 canonical.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Rational make_rational(long long num, long long den) {
    if (den == 0)
        throw std::invalid_argument("rational with zero denominator");
    return Rational(Integer(num), Integer(den));
}

// "3", "-3/4"
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

inline std::string to_string(const Rational& q) { return q.str(); }

} // namespace curvetau

#endif
