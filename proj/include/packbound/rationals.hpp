#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <stdexcept>
#include <string>

namespace packbound {

namespace mp = boost::multiprecision;

using Int = mp::mpz_int;
using Rat = mp::mpq_rational;

// Binary floats with exact mantissa widths. Real256 is the precision all
// problem data is generated at; the solver may run at any of the three.
using Real113 = mp::number<mp::cpp_bin_float<113, mp::digit_base_2>, mp::et_off>;
using Real256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;

template <class Real>
inline Real to_real(const Rat& q) {
    return static_cast<Real>(q);
}

// Binary floats convert to rationals without loss.
template <class Real>
inline Rat to_rational_exact(const Real& x) {
    return static_cast<Rat>(x);
}

inline Int pow2(unsigned k) {
    Int r = 1;
    return r << k;
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Parses "p/q", integers, and decimal/scientific literals ("0.25", "1e-5")
// into exact rationals.
inline Rat rat_from_string(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("rat_from_string: empty input");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("rat_from_string: zero denominator");
        return Rat(num, den);
    }
    std::string mant = s;
    long expo = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        mant = s.substr(0, e);
        expo = std::stol(s.substr(e + 1));
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    bool neg = false;
    for (size_t i = 0; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '-' && i == 0) { neg = true; continue; }
        if (c == '+' && i == 0) continue;
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("rat_from_string: bad literal " + s);
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9')
            throw std::invalid_argument("rat_from_string: bad literal " + s);
        digits.push_back(c);
        if (seen_dot) ++frac_digits;
    }
    if (digits.empty())
        throw std::invalid_argument("rat_from_string: bad literal " + s);
    // strip leading zeros (GMP would read them as an octal prefix)
    size_t first = digits.find_first_not_of('0');
    digits = (first == std::string::npos) ? "0" : digits.substr(first);
    Int num(digits);
    if (neg) num = -num;
    Rat r(num);
    long net = expo - frac_digits;
    Int ten = 10;
    if (net > 0)
        r *= Rat(mp::pow(ten, static_cast<unsigned>(net)));
    else if (net < 0)
        r /= Rat(mp::pow(ten, static_cast<unsigned>(-net)));
    return r;
}

inline std::string rat_to_string(const Rat& q) {
    return q.str();
}

}  // namespace packbound
