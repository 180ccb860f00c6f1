#pragma once

#include "packbound/interval.hpp"
#include "packbound/rationals.hpp"

#include <map>
#include <stdexcept>

namespace packbound {

// Exact value q * pi^k.  Addition is only defined between equal powers;
// callers convert through pi_power_enclosure when powers differ.
struct ScaledRational {
    Rat q;
    int pi_power = 0;

    ScaledRational() : q(0) {}
    explicit ScaledRational(Rat v, int k = 0) : q(std::move(v)), pi_power(k) {}

    bool is_zero() const { return q == 0; }

    ScaledRational operator-() const { return ScaledRational(-q, pi_power); }

    ScaledRational& operator+=(const ScaledRational& o) {
        if (o.q == 0) return *this;
        if (q == 0) { *this = o; return *this; }
        if (pi_power != o.pi_power)
            throw std::domain_error("ScaledRational: addition across different pi powers");
        q += o.q;
        return *this;
    }
    ScaledRational& operator-=(const ScaledRational& o) { return *this += -o; }

    friend ScaledRational operator+(ScaledRational a, const ScaledRational& b) { return a += b; }
    friend ScaledRational operator-(ScaledRational a, const ScaledRational& b) { return a -= b; }

    friend ScaledRational operator*(const ScaledRational& a, const ScaledRational& b) {
        if (a.q == 0 || b.q == 0) return ScaledRational{};
        return ScaledRational(a.q * b.q, a.pi_power + b.pi_power);
    }
    ScaledRational& operator*=(const ScaledRational& o) { return *this = *this * o; }

    friend bool operator==(const ScaledRational& a, const ScaledRational& b) {
        if (a.q == 0 && b.q == 0) return true;
        return a.q == b.q && a.pi_power == b.pi_power;
    }

    RationalInterval enclosure(unsigned bits) const {
        if (q == 0) return RationalInterval{};
        return q * pi_power_enclosure(pi_power, bits);
    }

    template <class Real>
    Real value(const Real& pi) const {
        Real r = to_real<Real>(q);
        if (pi_power == 0) return r;
        int k = pi_power;
        Real p = pi;
        if (k < 0) { p = Real(1) / pi; k = -k; }
        for (int i = 0; i < k; ++i) r *= p;
        return r;
    }
};

// Finite sum of q_k * pi^k terms.  Closed under +,-,* ; exactly represents
// every coefficient that appears when Laguerre-basis data meets the
// radial Fourier inversion.
struct PiSum {
    std::map<int, Rat> terms;  // pi power -> rational coefficient

    PiSum() = default;
    explicit PiSum(const Rat& v) { if (v != 0) terms[0] = v; }
    explicit PiSum(const ScaledRational& s) { if (s.q != 0) terms[s.pi_power] = s.q; }

    bool is_zero() const { return terms.empty(); }

    void add_term(int power, const Rat& c) {
        if (c == 0) return;
        auto it = terms.find(power);
        if (it == terms.end()) {
            terms.emplace(power, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    PiSum operator-() const {
        PiSum r;
        for (auto& [k, c] : terms) r.terms.emplace(k, -c);
        return r;
    }

    PiSum& operator+=(const PiSum& o) {
        for (auto& [k, c] : o.terms) add_term(k, c);
        return *this;
    }
    PiSum& operator-=(const PiSum& o) {
        for (auto& [k, c] : o.terms) add_term(k, -c);
        return *this;
    }
    friend PiSum operator+(PiSum a, const PiSum& b) { return a += b; }
    friend PiSum operator-(PiSum a, const PiSum& b) { return a -= b; }

    friend PiSum operator*(const PiSum& a, const PiSum& b) {
        PiSum r;
        for (auto& [ka, ca] : a.terms)
            for (auto& [kb, cb] : b.terms)
                r.add_term(ka + kb, ca * cb);
        return r;
    }
    PiSum& operator*=(const PiSum& o) { return *this = *this * o; }

    friend bool operator==(const PiSum& a, const PiSum& b) { return a.terms == b.terms; }

    RationalInterval enclosure(unsigned bits) const {
        RationalInterval r;
        for (auto& [k, c] : terms)
            r += c * pi_power_enclosure(k, bits);
        return r;
    }

    template <class Real>
    Real value(const Real& pi) const {
        Real r(0);
        for (auto& [k, c] : terms)
            r += ScaledRational(c, k).value(pi);
        return r;
    }
};

// Gamma(m/2) represented exactly: a rational, times sqrt(pi) when m is odd.
struct GammaHalfValue {
    Rat q;
    bool has_sqrt_pi = false;
};

inline GammaHalfValue gamma_half(int m) {
    if (m <= 0)
        throw std::domain_error("gamma_half: m must be positive");
    GammaHalfValue g;
    g.has_sqrt_pi = (m % 2 == 1);
    g.q = 1;
    // Gamma(x+1) = x Gamma(x) down to Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).
    for (int j = m - 2; j >= 1; j -= 2)
        g.q *= Rat(j, 2);
    return g;
}

// Volume of the n-ball of rational radius r: pi^(n/2) r^n / Gamma(n/2+1),
// always an exact rational times pi^floor(n/2).
inline ScaledRational ball_volume(int n, const Rat& r) {
    if (n < 1)
        throw std::domain_error("ball_volume: dimension must be >= 1");
    if (r <= 0)
        throw std::domain_error("ball_volume: radius must be positive");
    Rat rn = 1;
    for (int i = 0; i < n; ++i) rn *= r;
    GammaHalfValue g = gamma_half(n + 2);  // Gamma(n/2 + 1)
    // Odd n: pi^(n/2) = pi^((n-1)/2) * sqrt(pi) and the sqrt(pi) cancels
    // against the Gamma value.
    return ScaledRational(rn / g.q, n / 2);
}

}  // namespace packbound
