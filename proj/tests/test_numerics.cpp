#include <catch2/catch_amalgamated.hpp>

#include "packbound/interval.hpp"
#include "packbound/scaled_rational.hpp"

#include <boost/math/constants/constants.hpp>

#include <random>

using namespace packbound;

namespace {

// Independent high-precision value of pi for oracle comparisons.
Real256 pi_oracle() { return boost::math::constants::pi<Real256>(); }

Rat random_rat(std::mt19937& rng, int mag = 50) {
    std::uniform_int_distribution<long> num(-mag, mag);
    std::uniform_int_distribution<long> den(1, mag);
    return Rat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("pi enclosure basics", "[numerics]") {
    RationalInterval p1 = pi_enclosure(1);
    CHECK(p1.lo() >= 3);
    CHECK(p1.hi() <= Rat(13, 4));
    CHECK(p1.contains(to_rational_exact(pi_oracle())));

    RationalInterval p30 = pi_enclosure(30);
    CHECK(p30.width() <= Rat(1, pow2(30)));
    CHECK(p30.contains(to_rational_exact(pi_oracle())));
}

TEST_CASE("pi enclosure nesting and width halving", "[numerics]") {
    RationalInterval prev = pi_enclosure(1);
    for (unsigned b = 2; b <= 60; ++b) {
        RationalInterval cur = pi_enclosure(b);
        CHECK(prev.contains(cur));
        if (b <= 40) CHECK(cur.width() * 2 <= prev.width());
        prev = cur;
    }
}

TEST_CASE("pi power enclosure", "[numerics]") {
    CHECK(pi_power_enclosure(0, 10) == RationalInterval(Rat(1), Rat(1)));

    Real256 pi = pi_oracle();
    RationalInterval p2 = pi_power_enclosure(2, 30);
    CHECK(p2.contains(to_rational_exact(pi * pi)));
    CHECK(p2.width() <= Rat(1, pow2(20)));

    RationalInterval pm1 = pi_power_enclosure(-1, 30);
    CHECK(pm1.contains(to_rational_exact(Real256(1) / pi)));
    CHECK(pm1.lo() > Rat(3183, 10001));
    CHECK(pm1.hi() < Rat(3184, 10000));
}

TEST_CASE("gamma of half integers", "[numerics]") {
    auto g2 = gamma_half(2);
    CHECK(g2.q == 1);
    CHECK_FALSE(g2.has_sqrt_pi);

    auto g1 = gamma_half(1);
    CHECK(g1.q == 1);
    CHECK(g1.has_sqrt_pi);

    auto g5 = gamma_half(5);  // Gamma(5/2) = (3/4) sqrt(pi)
    CHECK(g5.q == Rat(3, 4));
    CHECK(g5.has_sqrt_pi);

    CHECK_THROWS_AS(gamma_half(0), std::domain_error);

    // Gamma((m+2)/2) = (m/2) Gamma(m/2) exactly
    for (int m = 1; m <= 40; ++m) {
        auto lhs = gamma_half(m + 2);
        auto rhs = gamma_half(m);
        CHECK(lhs.has_sqrt_pi == rhs.has_sqrt_pi);
        CHECK(lhs.q == Rat(m, 2) * rhs.q);
    }
}

TEST_CASE("ball volumes", "[numerics]") {
    ScaledRational v2 = ball_volume(2, Rat(1));
    CHECK(v2.q == 1);
    CHECK(v2.pi_power == 1);

    ScaledRational v3 = ball_volume(3, Rat(1));
    CHECK(v3.q == Rat(4, 3));
    CHECK(v3.pi_power == 1);

    ScaledRational v4 = ball_volume(4, Rat(1, 2));
    CHECK(v4.q == Rat(1, 32));
    CHECK(v4.pi_power == 2);

    // vol B(1) * Gamma(n/2+1) = pi^(n/2) exactly
    for (int n = 1; n <= 10; ++n) {
        ScaledRational v = ball_volume(n, Rat(1));
        GammaHalfValue g = gamma_half(n + 2);
        CHECK(v.q * g.q == 1);
        CHECK(v.pi_power == n / 2);
        CHECK(g.has_sqrt_pi == (n % 2 == 1));
    }
}

TEST_CASE("interval arithmetic soundness", "[numerics][property]") {
    std::mt19937 rng(20120612);
    for (int round = 0; round < 300; ++round) {
        Rat a = random_rat(rng), b = random_rat(rng);
        Rat ra = rat_abs(random_rat(rng)) / 100, rb = rat_abs(random_rat(rng)) / 100;
        RationalInterval A(a - ra, a + ra), B(b - rb, b + rb);
        CHECK((A + B).contains(a + b));
        CHECK((A - B).contains(a - b));
        CHECK((A * B).contains(a * b));
        if (!B.contains_zero() && b != 0) CHECK((A / B).contains(a / b));
    }
}

TEST_CASE("interval division by zero interval rejected", "[numerics]") {
    RationalInterval a(Rat(1), Rat(2)), z(Rat(-1), Rat(1));
    CHECK_THROWS_AS(a / z, std::domain_error);
}

TEST_CASE("scaled rationals", "[numerics]") {
    ScaledRational x(Rat(3, 2), 1), y(Rat(1, 2), 1);
    CHECK((x + y).q == 2);
    CHECK((x * y).pi_power == 2);
    ScaledRational z(Rat(1), 0);
    CHECK_THROWS_AS(x + z, std::domain_error);

    RationalInterval enc = x.enclosure(64);
    Real256 truth = Real256(Rat(3, 2)) * pi_oracle();
    CHECK(enc.contains(to_rational_exact(truth)));
}

TEST_CASE("pi sums", "[numerics]") {
    PiSum s;
    s.add_term(1, Rat(2));
    s.add_term(-1, Rat(1, 3));
    PiSum t = s * s;  // 4 pi^2 + 4/3 + (1/9) pi^-2
    CHECK(t.terms.at(2) == 4);
    CHECK(t.terms.at(0) == Rat(4, 3));
    CHECK(t.terms.at(-2) == Rat(1, 9));
    Real256 pi = pi_oracle();
    CHECK(t.enclosure(128).contains(to_rational_exact(s.value(pi) * s.value(pi))));
}

TEST_CASE("sqrt enclosure", "[numerics]") {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        Rat r = rat_abs(random_rat(rng)) + Rat(1, 7);
        RationalInterval s = sqrt_enclosure(r, 80);
        CHECK(s.lo() * s.lo() <= r);
        CHECK(s.hi() * s.hi() >= r);
        CHECK(s.width() <= Rat(1, pow2(60)));
    }
}

TEST_CASE("sin and cos enclosures", "[numerics]") {
    using boost::math::constants::pi;
    std::mt19937 rng(11);
    for (int i = 0; i < 40; ++i) {
        Rat x = rat_abs(random_rat(rng)) / 8;  // in [0, ~6.3]
        RationalInterval c = cos_enclosure(RationalInterval(x), 100);
        RationalInterval s = sin_enclosure(RationalInterval(x), 100);
        Real256 cx = cos(to_real<Real256>(x)), sx = sin(to_real<Real256>(x));
        CHECK(c.contains(to_rational_exact(cx)));
        CHECK(s.contains(to_rational_exact(sx)));
        CHECK(c.width() <= Rat(1, pow2(90)));
    }
    // cos(pi) = -1 enclosed through the pi interval
    RationalInterval c = cos_enclosure(pi_enclosure(128), 128);
    CHECK(c.contains(Rat(-1)));
    CHECK(c.lo() >= -1);
}
