#pragma once

#include "packbound/poly.hpp"

#include <stdexcept>
#include <vector>

namespace packbound {

// P_k^n: the Jacobi polynomial P_k^{((n-3)/2,(n-3)/2)} normalized so that
// its value at 1 equals 1.  Exact rational coefficients for all n >= 2.
inline Poly<Rat> jacobi(int n, int k) {
    if (n < 2) throw std::domain_error("jacobi: dimension must be >= 2");
    if (k < 0) throw std::domain_error("jacobi: degree must be >= 0");
    Rat a = Rat(n - 3, 2);
    std::vector<Poly<Rat>> p;
    p.reserve(k + 1);
    p.push_back(Poly<Rat>(PolyVar::X, {Rat(1)}));
    if (k >= 1)
        p.push_back(Poly<Rat>(PolyVar::X, {Rat(0), a + 1}));
    for (int j = 2; j <= k; ++j) {
        // symmetric three-term recurrence (alpha = beta = a)
        Rat d = 2 * j * (j + 2 * a) * (2 * j + 2 * a - 2);
        Rat cx = (2 * j + 2 * a - 1) * (2 * j + 2 * a) * (2 * j + 2 * a - 2) / d;
        Rat cp = 2 * (j + a - 1) * (j + a - 1) * (2 * j + 2 * a) / d;
        Poly<Rat> next = p[j - 1].shifted_up().scaled(cx) - p[j - 2].scaled(cp);
        p.push_back(std::move(next));
    }
    Rat at_one = p[k].eval(Rat(1));
    return p[k].scaled(Rat(1) / at_one);
}

// Generalized Laguerre L_k^alpha in the monomial basis, exact for any
// rational (in particular half-integer) parameter.
inline Poly<Rat> laguerre(const Rat& alpha, int k) {
    if (k < 0) throw std::domain_error("laguerre: degree must be >= 0");
    Poly<Rat> lm2(PolyVar::X, {Rat(1)});
    if (k == 0) return lm2;
    Poly<Rat> lm1(PolyVar::X, {alpha + 1, Rat(-1)});
    for (int j = 2; j <= k; ++j) {
        Poly<Rat> t = lm1.scaled(2 * j - 1 + alpha) - lm1.shifted_up() - lm2.scaled(j - 1 + alpha);
        lm2 = std::move(lm1);
        lm1 = t.scaled(Rat(1, j));
    }
    return lm1;
}

namespace detail {

inline void require_even_input(PolyVar var) {
    if (var != PolyVar::X2)
        throw std::invalid_argument("fourier_inverse_radial: polynomial has odd-degree terms");
}

// Compresses an X-tagged polynomial to X2, rejecting odd terms.
template <class T>
Poly<T> as_even(const Poly<T>& p) {
    if (p.var == PolyVar::X2) return p;
    for (size_t i = 1; i < p.c.size(); i += 2)
        if (!coeff_is_zero(p.c[i]))
            throw std::invalid_argument("fourier_inverse_radial: polynomial has odd-degree terms");
    return poly_even_part(p);
}

}  // namespace detail

// Radial Fourier inversion: if ghat(u) = p(|u|) e^{-pi |u|^2} with p even,
// then g(x) = q(|x|) e^{-pi |x|^2} where
//   q(w) = sum_k a_k k! pi^{-k} L_k^{n/2-1}(pi w^2).
// Exact over pi-graded coefficients.
inline Poly<PiSum> fourier_inverse_radial(int n, const Poly<PiSum>& p_in) {
    if (n < 1) throw std::domain_error("fourier_inverse_radial: dimension must be >= 1");
    Poly<PiSum> p = detail::as_even(p_in);
    Rat alpha = Rat(n - 2, 2);
    Poly<PiSum> q(PolyVar::X2);
    Rat factorial = 1;
    for (int k = 0; k <= p.degree_index(); ++k) {
        if (k > 0) factorial *= k;
        if (coeff_is_zero(p.c[k])) continue;
        Poly<Rat> lag = laguerre(alpha, k);
        // a_k k! pi^{-k} L_k(pi w^2): the L coefficient of x^s carries pi^s
        for (int s = 0; s <= lag.degree_index(); ++s) {
            if (lag.c[s] == 0) continue;
            PiSum scale;
            scale.add_term(s - k, lag.c[s] * factorial);
            if (q.c.size() <= static_cast<size_t>(s)) q.c.resize(s + 1);
            q.c[s] += p.c[k] * scale;
        }
    }
    q.trim();
    return q;
}

template <class Real>
Poly<Real> fourier_inverse_radial(int n, const Poly<Real>& p_in, const Real& pi) {
    if (n < 1) throw std::domain_error("fourier_inverse_radial: dimension must be >= 1");
    Poly<Real> p = detail::as_even(p_in);
    Rat alpha = Rat(n - 2, 2);
    Poly<Real> q(PolyVar::X2);
    Real pik(1);  // pi^-k accumulated
    Rat factorial = 1;
    for (int k = 0; k <= p.degree_index(); ++k) {
        if (k > 0) {
            factorial *= k;
            pik /= pi;
        }
        if (coeff_is_zero(p.c[k])) continue;
        Poly<Rat> lag = laguerre(alpha, k);
        Real pis(1);
        for (int s = 0; s <= lag.degree_index(); ++s) {
            if (s > 0) pis *= pi;
            if (lag.c[s] == 0) continue;
            if (q.c.size() <= static_cast<size_t>(s)) q.c.resize(s + 1);
            q.c[s] += p.c[k] * to_real<Real>(lag.c[s] * factorial) * pik * pis;
        }
    }
    q.trim();
    return q;
}

inline Poly<PiSum> poly_scaled_to_pisum(const Poly<ScaledRational>& p) {
    return poly_map<ScaledRational, PiSum>(p, [](const ScaledRational& s) { return PiSum(s); });
}

// ---------------------------------------------------------------------------
// Basis handling

enum class BasisFamily { JacobiN, LaguerreScaled, Custom };

// Triangular polynomial basis.  For LaguerreScaled (the solver basis for
// Euclidean problems) the elements are b_k(t) = mu_k^{-1} L_k^{n/2-1}(2 pi t)
// with exact pi-graded coefficients; mu_k is a rational snapshot of the
// largest absolute coefficient under a fixed 256-bit pi approximation and is
// deliberately not certified (any positive scaling yields the same basis).
struct BasisSpec {
    BasisFamily family = BasisFamily::Custom;
    int n = 0;
    std::vector<Rat> mu;
    std::vector<Poly<PiSum>> elems;  // var X, elems[k] of degree k

    template <class Real>
    std::vector<Poly<Real>> elements_real(const Real& pi) const {
        std::vector<Poly<Real>> out;
        out.reserve(elems.size());
        for (auto& e : elems)
            out.push_back(poly_map<PiSum, Real>(e, [&](const PiSum& s) { return s.value(pi); }));
        return out;
    }
};

inline Real256 pi_real256() {
    static const Real256 value = to_real<Real256>(pi_enclosure(300).mid());
    return value;
}

inline BasisSpec make_basis_B(int n, int d) {
    if (d < 1) throw std::domain_error("make_basis_B: degree must be >= 1");
    if (n < 1) throw std::domain_error("make_basis_B: dimension must be >= 1");
    BasisSpec spec;
    spec.family = BasisFamily::LaguerreScaled;
    spec.n = n;
    const Real256 pi = pi_real256();
    Rat alpha = Rat(n - 2, 2);
    for (int k = 0; k <= d; ++k) {
        Poly<Rat> lag = laguerre(alpha, k);
        // coefficient of t^m in L_k(2 pi t) is lag.c[m] * (2 pi)^m
        Real256 best = 0;
        Real256 p2m(1);
        for (int m = 0; m <= lag.degree_index(); ++m) {
            if (m > 0) p2m *= 2 * pi;
            Real256 mag = abs(to_real<Real256>(lag.c[m]) * p2m);
            if (mag > best) best = mag;
        }
        Rat mu = to_rational_exact(best);
        spec.mu.push_back(mu);
        Poly<PiSum> b(PolyVar::X);
        b.c.resize(k + 1);
        for (int m = 0; m <= lag.degree_index(); ++m)
            b.c[m].add_term(m, lag.c[m] * Rat(pow2(static_cast<unsigned>(m))) / mu);
        b.trim();
        spec.elems.push_back(std::move(b));
    }
    return spec;
}

inline std::vector<Poly<Rat>> jacobi_basis(int n, int top_degree) {
    std::vector<Poly<Rat>> out;
    out.reserve(top_degree + 1);
    for (int k = 0; k <= top_degree; ++k) out.push_back(jacobi(n, k));
    return out;
}

// ---------------------------------------------------------------------------
// Normalized spherical cap volume
//
// w(alpha) = [omega_{n-1}(S^{n-2}) / omega_n(S^{n-1})]
//              * integral_{cos a}^{1} (1-u^2)^{(n-3)/2} du.
// With u = cos(phi) the integral is I_{n-2}(alpha) = int_0^alpha sin^m,
// evaluated by the Wallis recurrence; the surface ratio reduces to an exact
// ScaledRational through the half-integer Gamma values.

inline ScaledRational cap_weight_surface_ratio(int n) {
    GammaHalfValue num = gamma_half(n);      // Gamma(n/2)
    GammaHalfValue den = gamma_half(n - 1);  // Gamma((n-1)/2)
    // ratio = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))
    if (num.has_sqrt_pi)  // n odd: sqrt(pi) cancels
        return ScaledRational(num.q / den.q, 0);
    return ScaledRational(num.q / den.q, -1);
}

template <class Real>
Real cap_weight(int n, const Real& alpha, const Real& pi) {
    if (n < 2) throw std::domain_error("cap_weight: dimension must be >= 2");
    if (!(alpha > 0) || alpha > pi * Real(1.0000001))
        throw std::domain_error("cap_weight: angle out of (0, pi]");
    Real c = cos(alpha), s = sin(alpha);
    int m = n - 2;
    Real i0 = alpha;         // I_0
    Real i1 = Real(1) - c;   // I_1
    if (m == 0) return cap_weight_surface_ratio(n).value(pi) * i0;
    Real prev = i0, cur = i1;
    Real spow = s;  // sin^{j-1} while computing I_j
    for (int j = 2; j <= m; ++j) {
        Real next = (-c * spow + Real(j - 1) * prev) / Real(j);
        prev = cur;
        cur = next;
        spow *= s;
    }
    Real integral = (m == 1) ? i1 : cur;
    return cap_weight_surface_ratio(n).value(pi) * integral;
}

// Certified enclosure of w(alpha) for alpha = q * pi^k given exactly.
inline RationalInterval cap_weight_enclosure(int n, const ScaledRational& alpha, unsigned bits) {
    if (n < 2) throw std::domain_error("cap_weight_enclosure: dimension must be >= 2");
    RationalInterval a = alpha.enclosure(bits + 16);
    if (!(a.lo() > 0))
        throw std::domain_error("cap_weight_enclosure: angle must be positive");
    RationalInterval c = cos_enclosure(a, bits + 16);
    RationalInterval s = sin_enclosure(a, bits + 16);
    int m = n - 2;
    RationalInterval prev = a;                                          // I_0
    RationalInterval cur = RationalInterval(Rat(1)) - c;                // I_1
    RationalInterval spow = s;
    for (int j = 2; j <= m; ++j) {
        RationalInterval next = (-c * spow + Rat(j - 1) * prev) * RationalInterval(Rat(1, j));
        prev = cur;
        cur = next;
        spow *= s;
    }
    RationalInterval integral = (m == 0) ? prev : cur;
    ScaledRational ratio = cap_weight_surface_ratio(n);
    return (ratio.q * pi_power_enclosure(ratio.pi_power, bits + 16)) * integral;
}

}  // namespace packbound
