#include <catch2/catch_amalgamated.hpp>

#include "packbound/ce_improved.hpp"

#include <sstream>

using namespace packbound;

namespace {
const Real256 kPi = pi_real256();
}

TEST_CASE("t of eps", "[ce]") {
    CHECK(t_of_eps(Rat(0)) == Rat(1, 2));
    // approaching sqrt(2)-1 from below the value approaches 3/4
    Rat near = rat_from_string("0.41421356");
    CHECK(rat_abs(t_of_eps(near) - Rat(3, 4)) < Rat(1, 10000000));
    Rat e = rat_from_string("0.022753");
    CHECK(t_of_eps(e) == 1 - Rat(1) / (2 * (1 + e) * (1 + e)));
    // strictly increasing
    Rat prev(-1);
    for (int i = 0; i <= 40; ++i) {
        Rat x = Rat(i, 100);
        Rat t = t_of_eps(x);
        CHECK(t > prev);
        prev = t;
    }
    CHECK_THROWS_AS(t_of_eps(Rat(1)), std::domain_error);
    CHECK_THROWS_AS(t_of_eps(Rat(-1, 10)), std::domain_error);
}

TEST_CASE("built-in tables carry the published data", "[ce]") {
    TangencyTable t4 = builtin_table(4);
    REQUIRE(t4.rows.size() == 4);
    CHECK(t4.rows[0].first == rat_from_string("0.008097"));
    CHECK(t4.rows[0].second == 24);

    TangencyTable t3 = builtin_table(3);
    REQUIRE(t3.rows.size() == 4);
    CHECK(t3.rows[3].first == rat_from_string("0.113864"));
    CHECK(t3.rows[3].second == 15);

    for (int n : {3, 4, 5, 6, 7, 9}) CHECK_NOTHROW(builtin_table(n).validate());
    CHECK_THROWS_AS(builtin_table(8), std::invalid_argument);
}

TEST_CASE("table loading and validation", "[ce]") {
    std::istringstream good("epsilon,U\n0.01,12\n0.02,13\n");
    TangencyTable t = load_table(good, 3);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1].first == Rat(1, 50));

    std::istringstream unsorted("0.02,12\n0.01,13\n");
    CHECK_THROWS_AS(load_table(unsorted, 3), std::invalid_argument);
    std::istringstream negative("0.01,-2\n");
    CHECK_THROWS_AS(load_table(negative, 3), std::invalid_argument);
    std::istringstream decreasing("0.01,13\n0.02,12\n");
    CHECK_THROWS_AS(load_table(decreasing, 3), std::invalid_argument);
}

TEST_CASE("center density", "[ce]") {
    Real256 fcc = kPi / sqrt(Real256(18));
    CHECK(abs(center_density(3, fcc) - Real256(0.17678)) < Real256(1e-5));
    CHECK(center_density(3, Real256(0)) == 0);
    // the Rogers bound 0.1847 corresponds to density ~ 0.7736
    Real256 rogers_density = Real256(Rat(1847, 10000)) * ball_volume(3, Rat(1)).value(kPi);
    CHECK(abs(center_density(3, rogers_density) - Real256(Rat(1847, 10000))) < Real256("1e-30"));
    CHECK_THROWS_AS(center_density(3, Real256(2)), std::domain_error);
}

TEST_CASE("empty table reduces to Cohn-Elkies", "[ce]") {
    SolverConfig cfg;
    cfg.precision = 113;
    CeInstance empty{2, TangencyTable{2, {}}, 5};
    CeBoundResult ce = ce_bound(empty, cfg);
    SphereInstance sp{2, Rat(1, 2), Rat(1, 2), 5};
    SphereBoundResult bin = sphere_bound(sp, cfg);
    CHECK(abs(ce.bound - bin.bound) < Real256(1e-7));
}

TEST_CASE("table never hurts and dual weights are feasible", "[ce][property]") {
    SolverConfig cfg;
    cfg.precision = 113;
    CeInstance with{3, builtin_table(3), 7};
    CeInstance without{3, TangencyTable{3, {}}, 7};
    CeBoundResult a = ce_bound(with, cfg);
    CeBoundResult b = ce_bound(without, cfg);
    CHECK(a.bound <= b.bound + Real256(1e-8));
    // dual feasibility audit: y_i + ... + y_m >= eta_i - 1e-9
    int m = with.table.size();
    for (int i = 0; i < m; ++i) {
        Real256 tail = 0;
        for (int k = i; k < m; ++k) tail += a.view.y[k];
        CHECK(tail >= a.view.eta[i] - Real256(1e-9));
    }
    // removing a table row never decreases the bound
    CeInstance fewer{3, builtin_table(3), 7};
    fewer.table.rows.pop_back();
    CeBoundResult c = ce_bound(fewer, cfg);
    CHECK(c.bound >= a.bound - Real256(1e-8));
}

TEST_CASE("shell-bound soundness", "[ce][property]") {
    SolverConfig cfg;
    cfg.precision = 113;
    CeInstance inst{3, builtin_table(3), 7};
    CeBoundResult r = ce_bound(inst, cfg);
    const int m = inst.table.size();
    auto fval = [&](const Real256& w) { return r.view.g.eval(w) * exp(-kPi * w * w); };
    for (int k = 0; k < m; ++k) {
        Real256 a = 1 + (k == 0 ? Real256(0) : to_real<Real256>(inst.table.rows[k - 1].first));
        Real256 b = 1 + to_real<Real256>(inst.table.rows[k].first);
        for (int s = 0; s < 100; ++s) {
            Real256 w = a + (b - a) * Real256(s) / 100;
            CHECK(fval(w) <= r.view.eta[k] + Real256(1e-8));
        }
    }
    Real256 top = 1 + to_real<Real256>(inst.table.rows.back().first);
    for (int s = 0; s <= 400; ++s) {
        Real256 w = top + Real256(10) * s / 400;
        CHECK(fval(w) <= Real256(1e-8));
    }
}

TEST_CASE("dimension four desk-scale bounds", "[ce]") {
    SolverConfig cfg;
    cfg.precision = 113;
    CeInstance with{4, builtin_table(4), 7};
    CeInstance without{4, TangencyTable{4, {}}, 7};
    Real256 cd_with = ce_bound(with, cfg).center_density_value;
    Real256 cd_without = ce_bound(without, cfg).center_density_value;
    CHECK(cd_with <= cd_without + Real256(1e-8));
    CHECK(cd_with >= Real256(Rat(125, 1000)) - Real256(1e-9));  // D4 packing exists
}
