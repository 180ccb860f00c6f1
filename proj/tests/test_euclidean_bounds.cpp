#include <catch2/catch_amalgamated.hpp>

#include "packbound/euclidean_bounds.hpp"

#include <random>
#include <sstream>

using namespace packbound;

namespace {

const Real256 kPi = pi_real256();

// Independent single-size Cohn-Elkies program (N = 1, monomial basis):
// min Finv[phi](0) with phi an even SOS of degree 2d, phi(0) >= vol B(r),
// and -Finv[phi] = p^2 + (w^2 - (2r)^2) q^2 coefficient-wise in monomials.
double ce_single_size_monomial(int n, const Rat& radius, int d) {
    const int dh = (d - 1) / 2, m = dh + 1;
    // monomial basis in x = t^2
    std::vector<Poly<Real256>> mono;
    for (int k = 0; k <= d; ++k) {
        Poly<Real256> q(PolyVar::X2);
        q.c.assign(k + 1, Real256(0));
        q.c[k] = 1;
        mono.push_back(std::move(q));
    }
    std::vector<std::vector<Poly<Real256>>> V(m, std::vector<Poly<Real256>>(m));
    std::vector<std::vector<Poly<Real256>>> FinvV(m, std::vector<Poly<Real256>>(m)), Finvt2V = FinvV;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            V[k][l] = mono[k] * mono[l];
            FinvV[k][l] = fourier_inverse_radial(n, V[k][l], kPi);
            Finvt2V[k][l] = fourier_inverse_radial(n, V[k][l].shifted_up(1), kPi);
        }
    Real256 gap = 2 * to_real<Real256>(radius);
    Real256 volB = ball_volume(n, radius).value(kPi);

    SdpProblem p;
    int A = p.add_block("A", m, BlockKind::Psd);   // phi = <A,V> + t^2 <B,V>
    int B = p.add_block("B", m, BlockKind::Psd);
    int P = p.add_block("P", m, BlockKind::Psd);   // -Finv[phi] = <P,V(w)> + <Q,(w^2-gap^2)V(w)>
    int Q = p.add_block("Q", m, BlockKind::Psd);
    int M = p.add_block("M", 1, BlockKind::Psd);

    for (int t = 0; t <= d; ++t) {  // identity per monomial w^{2t}
        Constraint con;
        con.sense = Sense::EQ;
        con.rhs = 0;
        SymAccumulator acc;
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                Real256 c0 = FinvV[k][l].coeff(t), c1 = Finvt2V[k][l].coeff(t);
                if (c0 != 0) acc.add(A, k, l, c0);
                if (c1 != 0) acc.add(B, k, l, c1);
                Real256 pv = V[k][l].coeff(t);
                Real256 qv = V[k][l].shifted_up(1).coeff(t) - gap * gap * V[k][l].coeff(t);
                if (pv != 0) acc.add(P, k, l, pv);
                if (qv != 0) acc.add(Q, k, l, qv);
            }
        acc.emit(con.lhs);
        p.constraints.push_back(std::move(con));
    }
    {  // phi(0) >= vol B
        Constraint con;
        con.sense = Sense::GE;
        con.rhs = volB;
        con.lhs.entries.push_back(Entry{A, 0, 0, Real256(1)});
        p.constraints.push_back(std::move(con));
    }
    {  // M >= Finv[phi](0)
        Constraint con;
        con.sense = Sense::GE;
        con.rhs = 0;
        SymAccumulator acc;
        acc.add(M, 0, 0, Real256(1));
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                Real256 c0 = FinvV[k][l].eval(Real256(0)), c1 = Finvt2V[k][l].eval(Real256(0));
                if (c0 != 0) acc.add(A, k, l, -c0);
                if (c1 != 0) acc.add(B, k, l, -c1);
            }
        acc.emit(con.lhs);
        p.constraints.push_back(std::move(con));
    }
    p.objective.entries.push_back(Entry{M, 0, 0, Real256(1)});
    SolverConfig cfg;
    cfg.precision = 113;
    SdpSolution sol = solve(p, cfg);
    REQUIRE((sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Feasible));
    return double(sol.objective);
}

}  // namespace

TEST_CASE("problem shapes at d=3", "[euclidean]") {
    SphereInstance inst{2, Rat(1, 2), Rat(1), 3};
    SdpProblem p = build_sphere_sdp(inst);
    CHECK(p.blocks[p.block_index("S0")].size == 4);
    CHECK(p.blocks[p.block_index("S1")].size == 4);
    CHECK(p.blocks[p.block_index("Q11")].size == 2);
    CHECK(p.blocks[p.block_index("Q12")].size == 2);
    CHECK(p.blocks[p.block_index("Q22")].size == 2);
    // 3 pairs x (d+1) identity equalities, 3 couplings, 2 epigraph rows
    int eq = 0, ineq = 0;
    for (auto& c : p.constraints) (c.sense == Sense::EQ ? eq : ineq)++;
    CHECK(eq == 12 + 3);
    CHECK(ineq == 2);
}

TEST_CASE("instance validation", "[euclidean]") {
    CHECK_THROWS_AS((SphereInstance{2, Rat(1, 2), Rat(1), 4}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SphereInstance{2, Rat(2), Rat(1), 3}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SphereInstance{0, Rat(1, 2), Rat(1), 3}.validate()), std::invalid_argument);
}

TEST_CASE("equal radii: feasible and within the expected window", "[euclidean]") {
    SolverConfig cfg;
    cfg.precision = 113;
    SphereInstance inst{2, Rat(1, 2), Rat(1, 2), 3};
    SphereBoundResult r = sphere_bound(inst, cfg);
    Real256 hex = kPi / sqrt(Real256(12));
    CHECK(r.bound >= hex - Real256(1e-9));
    CHECK(r.bound < 1);
}

TEST_CASE("equal radii match the single-size Cohn-Elkies bound", "[euclidean][oracle]") {
    SolverConfig cfg;
    cfg.precision = 113;
    SphereInstance inst{2, Rat(1, 2), Rat(1, 2), 3};
    Real256 binary = sphere_bound(inst, cfg).bound;
    double single = ce_single_size_monomial(2, Rat(1, 2), 3);
    CHECK(std::abs(double(binary) - single) < 1e-6);
}

TEST_CASE("validity of the reconstructed functions", "[euclidean][property]") {
    SolverConfig cfg;
    cfg.precision = 113;
    SphereInstance inst{2, Rat(1, 2), Rat(1), 7};
    SphereBoundResult r = sphere_bound(inst, cfg);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            CHECK(sphere_forbidden_max(inst, r.view, i, j) <= Real256(1e-8));
    // sigma positivity on a random sample
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> td(0.0, 5.0), yd(-2.0, 2.0);
    for (int s = 0; s < 200; ++s) {
        Real256 t(td(rng)), y1(yd(rng)), y2(yd(rng));
        Real256 sigma = r.view.phi[0].eval(t) * y1 * y1 + 2 * r.view.phi[1].eval(t) * y1 * y2 +
                        r.view.phi[2].eval(t) * y2 * y2;
        CHECK(sigma >= -Real256(1e-8));
    }
    // Fourier-side PSD: the 2x2 matrices (phi_ij(t)) on [0, 20]
    for (int s = 0; s <= 100; ++s) {
        Real256 t = Real256(20) * s / 100;
        Real256 a = r.view.phi[0].eval(t), b = r.view.phi[1].eval(t), c = r.view.phi[2].eval(t);
        CHECK(a >= -Real256(1e-8));
        CHECK(c >= -Real256(1e-8));
        CHECK(a * c - b * b >= -Real256(1e-8));
    }
}

TEST_CASE("phi recovery routes agree exactly", "[euclidean]") {
    SolverConfig cfg;
    cfg.precision = 53;
    SphereInstance inst{3, Rat(1, 2), Rat(1), 5};
    SphereBoundResult r = sphere_bound(inst, cfg);
    // rationalize the Gram blocks; both extraction routes are exact there
    detail::SphereData sd = detail::make_sphere_data(inst);
    const int m = sd.dh + 1;
    auto idx = [&](int type, int k) { return type * m + k; };
    std::vector<std::vector<Poly<Rat>>> Vr(m, std::vector<Poly<Rat>>(m));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
            Vr[k][l] = poly_map<Real256, Rat>(sd.V[k][l], [](const Real256& x) { return to_rational_exact(x); });
    auto sigma_at = [&](const Rat& y1, const Rat& y2) {
        Poly<Rat> acc(PolyVar::X2);
        std::array<Rat, 2> y{y1, y2};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) {
                        Rat s0 = to_rational_exact(r.view.S0(idx(i, k), idx(j, l)));
                        Rat s1 = to_rational_exact(r.view.S1(idx(i, k), idx(j, l)));
                        Rat w = y[i] * y[j];
                        if (s0 != 0) acc += Vr[k][l].scaled(s0 * w);
                        if (s1 != 0) acc += Vr[k][l].shifted_up(1).scaled(s1 * w);
                    }
        return acc;
    };
    Poly<Rat> half_diff = sigma_at(Rat(1), Rat(1)) - sigma_at(Rat(1), Rat(0)) - sigma_at(Rat(0), Rat(1));
    half_diff = half_diff.scaled(Rat(1, 2));
    Poly<Rat> direct(PolyVar::X2);  // Kronecker extraction via Y12
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            Rat s0 = to_rational_exact(r.view.S0(idx(0, k), idx(1, l))) +
                     to_rational_exact(r.view.S0(idx(1, k), idx(0, l)));
            Rat s1 = to_rational_exact(r.view.S1(idx(0, k), idx(1, l))) +
                     to_rational_exact(r.view.S1(idx(1, k), idx(0, l)));
            if (s0 != 0) direct += Vr[k][l].scaled(s0 / 2);
            if (s1 != 0) direct += Vr[k][l].shifted_up(1).scaled(s1 / 2);
        }
    CHECK(half_diff.c == direct.c);
}

TEST_CASE("degree monotonicity", "[euclidean][property]") {
    SolverConfig cfg;
    cfg.precision = 113;
    Real256 prev = 1000;
    for (int d : {3, 5, 7}) {
        SphereInstance inst{2, Rat(1, 2), Rat(1), d};
        Real256 b = sphere_bound(inst, cfg).bound;
        CHECK(b <= prev + Real256(1e-9));
        prev = b;
    }
}

TEST_CASE("florian 2d bound", "[euclidean]") {
    CHECK(abs(florian_2d_bound(Rat(1, 2)) - Real256(0.9158118)) < Real256(1e-6));
    CHECK(abs(florian_2d_bound(Rat(1)) - kPi / sqrt(Real256(12))) < Real256("1e-40"));
    Real256 v9 = florian_2d_bound(Rat(9, 10));
    CHECK(v9 > florian_2d_bound(Rat(1)));
    CHECK(v9 < florian_2d_bound(Rat(1, 2)));
    CHECK_THROWS_AS(florian_2d_bound(Rat(0)), std::invalid_argument);
}

TEST_CASE("sphere sweep CSV", "[euclidean]") {
    SolverConfig cfg;
    cfg.precision = 53;
    std::ostringstream os;
    sweep_spheres(2, {Rat(1, 2), Rat(1, 2)}, 3, cfg, os, 2);
    std::istringstream is(os.str());
    std::string header, row1, row2;
    std::getline(is, header);
    std::getline(is, row1);
    std::getline(is, row2);
    CHECK(header == "n,r,sdp_bound,florian_bound,status");
    CHECK(row1 == row2);  // duplicate grid points give identical rows
    CHECK(row1.find("0.915811") != std::string::npos);  // florian column
}

TEST_CASE("dimension three bounds exceed the sphere packing density", "[euclidean]") {
    SolverConfig cfg;
    cfg.precision = 113;
    Real256 fcc = kPi / sqrt(Real256(18));
    for (Rat r : {Rat(2, 5), Rat(7, 10), Rat(1)}) {
        SphereInstance inst{3, r, Rat(1), 5};
        CHECK(sphere_bound(inst, cfg).bound >= fcc - Real256(1e-9));
    }
}
