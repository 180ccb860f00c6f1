#include <catch2/catch_amalgamated.hpp>

#include "packbound/orthopoly.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <random>

using namespace packbound;

namespace {

// Rodrigues-formula oracle for Legendre polynomials (n = 3):
// P_k = 1/(2^k k!) d^k/du^k (u^2-1)^k.
Poly<Rat> legendre_rodrigues(int k) {
    Poly<Rat> base(PolyVar::X, {Rat(-1), Rat(0), Rat(1)});  // u^2 - 1
    Poly<Rat> pw = Poly<Rat>::constant(PolyVar::X, Rat(1));
    for (int i = 0; i < k; ++i) pw = pw * base;
    for (int i = 0; i < k; ++i) pw = pw.derivative();
    Rat fact = 1;
    for (int i = 1; i <= k; ++i) fact *= i;
    return pw.scaled(Rat(1) / (Rat(pow2(k)) * fact));
}

// Series-definition oracle for generalized Laguerre polynomials:
// L_k^a(x) = sum_i (-1)^i binom(k+a, k-i) x^i / i!.
Poly<Rat> laguerre_series(const Rat& a, int k) {
    Poly<Rat> p(PolyVar::X);
    p.c.assign(k + 1, Rat(0));
    for (int i = 0; i <= k; ++i) {
        // binom(k+a, k-i) = prod_{j=1}^{k-i} (a+i+j) / j
        Rat binom = 1;
        for (int j = 1; j <= k - i; ++j) binom *= (a + i + j) / j;
        Rat fact = 1;
        for (int j = 1; j <= i; ++j) fact *= j;
        p.c[i] = (i % 2 ? -binom : binom) / fact;
    }
    p.trim();
    return p;
}

double pi_d() { return boost::math::constants::pi<double>(); }

}  // namespace

TEST_CASE("jacobi normalization and low degrees", "[polynomials]") {
    for (int n : {2, 3, 4, 5, 8}) {
        CHECK(jacobi(n, 0).c == std::vector<Rat>{Rat(1)});
        Poly<Rat> p1 = jacobi(n, 1);
        REQUIRE(p1.c.size() == 2);
        CHECK(p1.c[0] == 0);
        CHECK(p1.c[1] == 1);
    }
    Poly<Rat> p2 = jacobi(3, 2);  // Legendre: (3u^2 - 1)/2
    CHECK(p2.c == std::vector<Rat>{Rat(-1, 2), Rat(0), Rat(3, 2)});
}

TEST_CASE("jacobi against the Rodrigues oracle", "[polynomials][oracle]") {
    for (int k = 0; k <= 8; ++k) {
        Poly<Rat> ours = jacobi(3, k);
        Poly<Rat> oracle = legendre_rodrigues(k);
        CHECK(ours.c == oracle.c);
    }
}

TEST_CASE("normalized jacobi stays within [-1,1] on the interval", "[polynomials][property]") {
    for (int n : {3, 4, 5}) {
        for (int k : {1, 5, 17, 40}) {
            Poly<Rat> p = jacobi(n, k);
            // high-degree monomial evaluation needs the extended precision
            Poly<Real256> pe = poly_map<Rat, Real256>(p, [](const Rat& q) { return to_real<Real256>(q); });
            for (int s = 0; s <= 200; ++s) {
                Real256 x = Real256(-1) + Real256(2 * s) / 200;
                CHECK(abs(pe.eval(x)) <= Real256(1) + Real256("1e-40"));
            }
            CHECK(p.eval(Rat(1)) == 1);
        }
    }
}

TEST_CASE("jacobi orthogonality via quadrature", "[polynomials][property]") {
    // substitute u = sin(theta): weight becomes cos^{n-2}, integrand smooth
    for (int n : {3, 4, 5}) {
        std::vector<Poly<double>> ps;
        for (int k = 0; k <= 10; ++k)
            ps.push_back(poly_map<Rat, double>(jacobi(n, k), [](const Rat& q) { return double(q); }));
        const int N = 20000;
        for (int k = 0; k <= 10; ++k)
            for (int l = k + 1; l <= 10; ++l) {
                double acc = 0;
                for (int s = 0; s <= N; ++s) {
                    double th = -pi_d() / 2 + pi_d() * s / N;
                    double u = std::sin(th);
                    double w = std::pow(std::cos(th), n - 2);
                    double f = ps[k].eval(u) * ps[l].eval(u) * w;
                    double weight = (s == 0 || s == N) ? 1 : (s % 2 ? 4 : 2);
                    acc += weight * f;
                }
                acc *= pi_d() / N / 3.0;
                CHECK(std::abs(acc) < 1e-10);
            }
    }
}

TEST_CASE("laguerre against the series oracle", "[polynomials][oracle]") {
    CHECK(laguerre(Rat(0), 0).c == std::vector<Rat>{Rat(1)});
    for (Rat a : {Rat(0), Rat(1, 2), Rat(3, 2), Rat(2)}) {
        Poly<Rat> l1 = laguerre(a, 1);  // (1+a) - x
        CHECK(l1.c == std::vector<Rat>{a + 1, Rat(-1)});
        for (int k = 0; k <= 8; ++k) CHECK(laguerre(a, k).c == laguerre_series(a, k).c);
    }
    CHECK(laguerre(Rat(0), 2).c == std::vector<Rat>{Rat(1), Rat(-2), Rat(1, 2)});
}

TEST_CASE("fourier inverse: gaussian fixed point and exact 2d case", "[polynomials]") {
    for (int n : {1, 2, 3, 7}) {
        Poly<PiSum> one(PolyVar::X2, {PiSum(Rat(1))});
        Poly<PiSum> q = fourier_inverse_radial(n, one);
        REQUIRE(q.c.size() == 1);
        CHECK(q.c[0] == PiSum(Rat(1)));
    }
    // n=2, p = t^2  ->  q = 1/pi - w^2
    Poly<PiSum> p(PolyVar::X2);
    p.c.assign(2, PiSum{});
    p.c[1] = PiSum(Rat(1));
    Poly<PiSum> q = fourier_inverse_radial(2, p);
    REQUIRE(q.c.size() == 2);
    CHECK(q.c[0].terms == std::map<int, Rat>{{-1, Rat(1)}});
    CHECK(q.c[1].terms == std::map<int, Rat>{{0, Rat(-1)}});
}

TEST_CASE("fourier inverse against a numerical radial integral", "[polynomials][oracle]") {
    // oracle: f(x) = 2 pi int_0^inf s^3 e^{-pi s^2} J_0(2 pi s w) ds for n=2, p=t^2
    Poly<PiSum> p(PolyVar::X2);
    p.c.assign(2, PiSum{});
    p.c[1] = PiSum(Rat(1));
    Poly<PiSum> q = fourier_inverse_radial(2, p);
    double pi = pi_d();
    for (double w : {0.0, 0.5, 1.0}) {
        const int N = 40000;
        const double hi = 8.0;
        double acc = 0;
        for (int s = 0; s <= N; ++s) {
            double t = hi * s / N;
            double f = t * t * t * std::exp(-pi * t * t) * std::cyl_bessel_j(0.0, 2 * pi * t * w);
            double weight = (s == 0 || s == N) ? 1 : (s % 2 ? 4 : 2);
            acc += weight * f;
        }
        acc *= 2 * pi * hi / N / 3.0;
        double ours = 0;
        for (size_t k = 0; k < q.c.size(); ++k)
            ours += q.c[k].value(pi) * std::pow(w, 2.0 * k);
        ours *= std::exp(-pi * w * w);
        CHECK(std::abs(ours - acc) < 1e-8);
    }
}

TEST_CASE("fourier inverse linearity and involution", "[polynomials][property]") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<long> coeff(-9, 9);
    for (int round = 0; round < 20; ++round) {
        int n = 1 + round % 5;
        Poly<PiSum> p(PolyVar::X2);
        p.c.assign(4, PiSum{});
        for (auto& c : p.c) c = PiSum(Rat(coeff(rng), 3));
        p.trim();
        Poly<PiSum> q = fourier_inverse_radial(n, p);
        Poly<PiSum> q2 = fourier_inverse_radial(n, p.scaled(PiSum(Rat(2))));
        CHECK(q2.c.size() == q.c.size());
        for (size_t i = 0; i < q.c.size(); ++i) CHECK(q2.c[i] == q.c[i] * PiSum(Rat(2)));
        // applying the map twice returns the original coefficients exactly
        Poly<PiSum> back = fourier_inverse_radial(n, q);
        CHECK(back.c.size() == p.c.size());
        for (size_t i = 0; i < p.c.size(); ++i) CHECK(back.c[i] == p.c[i]);
    }
}

TEST_CASE("fourier inverse rejects odd terms", "[polynomials]") {
    Poly<PiSum> bad(PolyVar::X);
    bad.c.assign(2, PiSum{});
    bad.c[1] = PiSum(Rat(1));
    CHECK_THROWS_AS(fourier_inverse_radial(2, bad), std::invalid_argument);
}

TEST_CASE("solver basis elements", "[polynomials]") {
    Real256 pi = boost::math::constants::pi<Real256>();
    for (int n : {2, 3, 4}) {
        BasisSpec spec = make_basis_B(n, 8);
        REQUIRE(spec.elems.size() == 9);
        CHECK(spec.mu[0] == 1);
        CHECK(spec.elems[0].eval(PiSum(Rat(1))) == PiSum(Rat(1)));
        auto elems = spec.elements_real<Real256>(pi);
        for (int k = 0; k <= 8; ++k) {
            CHECK(elems[k].degree_index() == k);
            Real256 best = 0;
            for (auto& c : elems[k].c)
                if (abs(c) > best) best = abs(c);
            CHECK(abs(best - 1) < Real256("1e-60"));
        }
    }
    // n=2, k=1: L_1^0(2 pi t) = 1 - 2 pi t, mu_1 = 2 pi, b_1 = 1/(2 pi) - t
    BasisSpec s2 = make_basis_B(2, 2);
    Real256 mu1 = to_real<Real256>(s2.mu[1]);
    CHECK(abs(mu1 - 2 * pi) < Real256("1e-70"));
    auto e = s2.elements_real<Real256>(pi);
    CHECK(abs(e[1].c[1] + 1) < Real256("1e-70"));
    CHECK(abs(e[1].c[0] - 1 / (2 * pi)) < Real256("1e-70"));
}

TEST_CASE("change of basis", "[polynomials]") {
    Real256 pi = boost::math::constants::pi<Real256>();
    BasisSpec spec = make_basis_B(3, 6);
    auto elems = spec.elements_real<Real256>(pi);
    // p = b_3 -> unit vector e_3
    auto coeffs = change_basis(elems[3], elems);
    for (size_t i = 0; i < coeffs.size(); ++i)
        CHECK(abs(coeffs[i] - (i == 3 ? 1 : 0)) < Real256("1e-60"));
    // p = 0 -> zero vector
    auto zc = change_basis(Poly<Real256>(PolyVar::X), elems);
    for (auto& c : zc) CHECK(c == 0);
    // rational round trip through the jacobi basis is exact
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> cdist(-20, 20);
    auto basis = jacobi_basis(4, 5);
    for (int round = 0; round < 10; ++round) {
        Poly<Rat> p(PolyVar::X);
        p.c.assign(6, Rat(0));
        for (auto& c : p.c) c = Rat(cdist(rng), 7);
        p.trim();
        auto cf = change_basis(p, basis);
        Poly<Rat> re(PolyVar::X);
        for (size_t k = 0; k < cf.size(); ++k) re += basis[k].scaled(cf[k]);
        CHECK(re.c == p.c);
    }
    // degree overflow
    Poly<Real256> high(PolyVar::X);
    high.c.assign(8, Real256(1));
    CHECK_THROWS_AS(change_basis(high, elems), std::invalid_argument);
}

TEST_CASE("cap weights", "[polynomials]") {
    Real256 pi = boost::math::constants::pi<Real256>();
    // n=3: w(alpha) = (1 - cos(alpha))/2, the paper's closed form
    for (Real256 a : {Real256(1) / 3, Real256(1), Real256(2)}) {
        Real256 w = cap_weight(3, a, pi);
        CHECK(abs(w - (1 - cos(a)) / 2) < Real256("1e-70"));
    }
    for (int n : {2, 3, 4, 5, 6}) {
        CHECK(abs(cap_weight(n, pi, pi) - 1) < Real256("1e-70"));
        CHECK(abs(cap_weight(n, pi / 2, pi) - Real256(Rat(1, 2))) < Real256("1e-70"));
        // strictly increasing, and w(a) + w(pi - a) = 1
        Real256 prev = -1;
        for (int s = 1; s <= 9; ++s) {
            Real256 a = pi * s / 10;
            Real256 w = cap_weight(n, a, pi);
            CHECK(w > prev);
            prev = w;
            CHECK(abs(w + cap_weight(n, pi - a, pi) - 1) < Real256("1e-70"));
        }
    }
    CHECK_THROWS_AS(cap_weight(3, Real256(4), pi), std::domain_error);
}

TEST_CASE("cap weight enclosures", "[polynomials]") {
    Real256 pi = boost::math::constants::pi<Real256>();
    for (int n : {2, 3, 4, 5}) {
        for (int num : {1, 3, 7}) {
            ScaledRational alpha(Rat(num, 10), 1);  // (num/10) pi
            RationalInterval enc = cap_weight_enclosure(n, alpha, 150);
            Real256 w = cap_weight(n, pi * Real256(num) / 10, pi);
            CHECK(enc.contains(to_rational_exact(w)));
            CHECK(enc.width() < Rat(1, pow2(100)));
        }
    }
}
