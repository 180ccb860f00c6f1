#pragma once

#include "packbound/rationals.hpp"

#include <algorithm>
#include <stdexcept>

namespace packbound {

// Interval with exact rational endpoints. +,-,* are exact enclosures;
// division requires the divisor to exclude zero.
class RationalInterval {
  public:
    RationalInterval() : lo_(0), hi_(0) {}
    explicit RationalInterval(const Rat& point) : lo_(point), hi_(point) {}
    RationalInterval(Rat lo, Rat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ > hi_)
            throw std::invalid_argument("RationalInterval: lo > hi");
    }

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    Rat width() const { return hi_ - lo_; }
    Rat mid() const { return (lo_ + hi_) / 2; }

    bool contains(const Rat& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RationalInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_ <= 0 && hi_ >= 0; }
    bool is_point() const { return lo_ == hi_; }

    // Largest absolute value attained on the interval.
    Rat mag() const { return std::max(rat_abs(lo_), rat_abs(hi_)); }

    RationalInterval operator-() const { return RationalInterval(-hi_, -lo_); }

    RationalInterval& operator+=(const RationalInterval& o) {
        lo_ += o.lo_;
        hi_ += o.hi_;
        return *this;
    }
    RationalInterval& operator-=(const RationalInterval& o) {
        lo_ -= o.hi_;
        hi_ -= o.lo_;
        return *this;
    }

    friend RationalInterval operator+(RationalInterval a, const RationalInterval& b) { return a += b; }
    friend RationalInterval operator-(RationalInterval a, const RationalInterval& b) { return a -= b; }

    friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
        Rat p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        return RationalInterval(std::min(std::min(p1, p2), std::min(p3, p4)),
                                std::max(std::max(p1, p2), std::max(p3, p4)));
    }
    RationalInterval& operator*=(const RationalInterval& o) { return *this = *this * o; }

    friend RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
        if (b.contains_zero())
            throw std::domain_error("RationalInterval: division by interval containing 0");
        Rat p1 = a.lo_ / b.lo_, p2 = a.lo_ / b.hi_, p3 = a.hi_ / b.lo_, p4 = a.hi_ / b.hi_;
        return RationalInterval(std::min(std::min(p1, p2), std::min(p3, p4)),
                                std::max(std::max(p1, p2), std::max(p3, p4)));
    }

    friend bool operator==(const RationalInterval& a, const RationalInterval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

  private:
    Rat lo_, hi_;
};

inline RationalInterval operator*(const Rat& s, const RationalInterval& a) {
    return RationalInterval(s) * a;
}

inline RationalInterval interval_pow(const RationalInterval& a, unsigned k) {
    RationalInterval r{Rat(1)};
    RationalInterval base = a;
    while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

namespace detail {

// floor(2^bits * atan(1/x)) with a two-sided error bound.  The alternating
// series is summed with floored integer terms; `slack` bounds the combined
// rounding and truncation error in units of 2^-bits.
struct ScaledAtan {
    Int scaled;
    Int slack;
};

inline ScaledAtan atan_inv_scaled(unsigned long x, unsigned bits) {
    Int acc = 0;
    Int xx = Int(x) * Int(x);
    Int denom_pow = Int(x);            // x^(2i+1)
    Int top = pow2(bits);
    Int terms = 0;
    for (unsigned long i = 0;; ++i) {
        Int term = top / (Int(2 * i + 1) * denom_pow);
        if (term == 0) {
            ++terms;  // truncated tail is below one unit
            break;
        }
        if (i % 2 == 0)
            acc += term;
        else
            acc -= term;
        ++terms;
        denom_pow *= xx;
    }
    return {acc, terms + 1};
}

}  // namespace detail

// Encloses pi with width <= 2^-bits, computed from the Machin formula
// pi = 16*atan(1/5) - 4*atan(1/239) with the truncation error carried
// through the computation.  Enclosures nest: bits+1 refines bits.
inline RationalInterval pi_enclosure(unsigned bits) {
    if (bits < 1)
        throw std::invalid_argument("pi_enclosure: bits must be >= 1");
    const unsigned grid = bits + 3;
    unsigned work = grid + 24;
    for (;;) {
        auto a = detail::atan_inv_scaled(5, work);
        auto b = detail::atan_inv_scaled(239, work);
        Int lo = 16 * a.scaled - 4 * (b.scaled + b.slack) - 16 * a.slack;
        Int hi = 16 * (a.scaled + a.slack) - 4 * (b.scaled - b.slack) + 16;
        // Reduce to the grid scale; retry if the floor of pi*2^grid is not
        // yet pinned down.
        Int shift = pow2(work - grid);
        Int nlo = lo / shift;  // floor for positive values
        Int nhi = hi / shift;
        if (nlo == nhi) {
            Int g = pow2(grid);
            return RationalInterval(Rat(nlo - 1, g), Rat(nlo + 2, g));
        }
        work += 32;
    }
}

inline RationalInterval pi_power_enclosure(int k, unsigned bits) {
    if (k == 0)
        return RationalInterval(Rat(1), Rat(1));
    unsigned internal = bits + 8 * static_cast<unsigned>(k > 0 ? k : -k) + 8;
    RationalInterval p = pi_enclosure(internal);
    RationalInterval pk = interval_pow(p, static_cast<unsigned>(k > 0 ? k : -k));
    if (k > 0)
        return pk;
    return RationalInterval(Rat(1)) / pk;
}

// Enclosure of sqrt(r) for rational r >= 0 via integer square roots.
inline RationalInterval sqrt_enclosure(const Rat& r, unsigned bits) {
    if (r < 0)
        throw std::domain_error("sqrt_enclosure: negative argument");
    if (r == 0)
        return RationalInterval(Rat(0), Rat(0));
    Int p = numerator(r), q = denominator(r);
    // sqrt(p/q) = sqrt(p*q)/q
    Int n = p * q * pow2(2 * bits);
    Int s = sqrt(n);  // floor
    Int den = q * pow2(bits);
    return RationalInterval(Rat(s, den), Rat(s + 1, den));
}

inline RationalInterval sqrt_enclosure(const RationalInterval& r, unsigned bits) {
    if (r.lo() < 0)
        throw std::domain_error("sqrt_enclosure: interval reaches below 0");
    return RationalInterval(sqrt_enclosure(r.lo(), bits).lo(), sqrt_enclosure(r.hi(), bits).hi());
}

namespace detail {

// Taylor partial sum of cos (parity=0) or sin (parity=1) at a rational
// point, with an explicit tail bound added outward.
inline RationalInterval sincos_point(const Rat& m, unsigned bits, int parity) {
    Rat m2 = m * m;
    Rat term = parity ? m : Rat(1);   // first term
    Rat sum = 0;
    Rat tol(Int(1), pow2(bits + 4));
    unsigned long j = parity ? 1 : 0;  // degree of current term
    int sign = 1;
    for (;;) {
        sum += sign * term;
        Rat next = term * m2 / Rat(Int((j + 1) * (j + 2)));
        j += 2;
        sign = -sign;
        term = next;
        if (term < tol && m2 < Rat(Int(j + 1) * Int(j + 2))) {
            // remaining tail is bounded by a geometric series with
            // ratio m^2 / ((j+1)(j+2)) < 1
            Rat ratio = m2 / Rat(Int(j + 1) * Int(j + 2));
            Rat tail = term / (Rat(1) - ratio);
            return RationalInterval(sum - tail, sum + tail);
        }
    }
}

}  // namespace detail

// cos over an interval argument: evaluated at the midpoint, widened by the
// radius (cos and sin are 1-Lipschitz).
inline RationalInterval cos_enclosure(const RationalInterval& x, unsigned bits) {
    Rat m = x.mid();
    Rat rad = x.width() / 2;
    RationalInterval c = detail::sincos_point(m, bits, 0);
    RationalInterval res(c.lo() - rad, c.hi() + rad);
    // clamp to [-1, 1]
    return RationalInterval(std::max(res.lo(), Rat(-1)), std::min(res.hi(), Rat(1)));
}

inline RationalInterval sin_enclosure(const RationalInterval& x, unsigned bits) {
    Rat m = x.mid();
    Rat rad = x.width() / 2;
    RationalInterval s = detail::sincos_point(m, bits, 1);
    RationalInterval res(s.lo() - rad, s.hi() + rad);
    return RationalInterval(std::max(res.lo(), Rat(-1)), std::min(res.hi(), Rat(1)));
}

}  // namespace packbound
