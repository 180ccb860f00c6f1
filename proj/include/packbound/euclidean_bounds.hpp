#pragma once

#include "packbound/cap_bounds.hpp"  // sweep plumbing, sig12 formatting
#include "packbound/orthopoly.hpp"
#include "packbound/sdp.hpp"
#include "packbound/solver.hpp"

#include <array>
#include <map>
#include <ostream>
#include <vector>

namespace packbound {

// Binary sphere packing instance in R^n: radii r1 <= r2 and an odd degree d.
struct SphereInstance {
    int n = 2;
    Rat r1 = Rat(1, 2), r2 = Rat(1);
    int d = 3;

    void validate() const {
        if (n < 1) throw std::invalid_argument("SphereInstance: dimension must be >= 1");
        if (!(r1 > 0) || r1 > r2) throw std::invalid_argument("SphereInstance: need 0 < r1 <= r2");
        if (d < 1 || d % 2 == 0) throw std::invalid_argument("SphereInstance: degree must be odd, >= 1");
    }
};

namespace detail {

// Everything build_sphere_sdp and the certification path share: the solver
// basis, the polynomial matrices and their identity-basis expansions.
struct SphereData {
    int dh;                                   // floor(d/2)
    BasisSpec basis;                          // b_0..b_d
    std::vector<Poly<Real256>> belems;        // numeric, var X
    std::vector<Poly<Real256>> belems_x2;     // same coefficients, var X2
    std::vector<std::vector<Poly<Real256>>> V, FinvV, Finvt2V;  // (dh+1)^2 each, var X2
    std::array<Real256, 3> gap2;              // (r_i + r_j)^2 per pair 11, 12, 22
    std::array<Real256, 2> volr;              // sqrt(vol B(r_i))
    // identity-basis coefficient vectors, index [k][l][t]
    std::vector<std::vector<std::vector<Real256>>> cFinvV, cFinvt2V;
    std::array<std::vector<std::vector<std::vector<Real256>>>, 3> cW;
};

inline int sphere_pair_index(int i, int j) { return i + j; }  // 00->0, 01->1, 11->2

inline SphereData make_sphere_data(const SphereInstance& inst) {
    SphereData sd;
    const Real256 pi = pi_real256();
    const int d = inst.d;
    sd.dh = (d - 1) / 2;
    sd.basis = make_basis_B(inst.n, d);
    sd.belems = sd.basis.elements_real<Real256>(pi);
    for (auto& e : sd.belems) {
        Poly<Real256> q = e;
        q.var = PolyVar::X2;
        sd.belems_x2.push_back(std::move(q));
    }
    int m = sd.dh + 1;
    sd.V.assign(m, std::vector<Poly<Real256>>(m));
    sd.FinvV = sd.V;
    sd.Finvt2V = sd.V;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            sd.V[k][l] = sd.belems_x2[k] * sd.belems_x2[l];
            sd.FinvV[k][l] = fourier_inverse_radial(inst.n, sd.V[k][l], pi);
            sd.Finvt2V[k][l] = fourier_inverse_radial(inst.n, sd.V[k][l].shifted_up(1), pi);
        }
    std::array<Rat, 3> gaps{inst.r1 + inst.r1, inst.r1 + inst.r2, inst.r2 + inst.r2};
    for (int g = 0; g < 3; ++g) {
        Real256 gr = to_real<Real256>(gaps[g]);
        sd.gap2[g] = gr * gr;
    }
    sd.volr[0] = sqrt(ball_volume(inst.n, inst.r1).value(pi));
    sd.volr[1] = sqrt(ball_volume(inst.n, inst.r2).value(pi));

    auto expand = [&](const Poly<Real256>& q) { return change_basis(q, sd.belems_x2); };
    sd.cFinvV.assign(m, std::vector<std::vector<Real256>>(m));
    sd.cFinvt2V = sd.cFinvV;
    for (int g = 0; g < 3; ++g) sd.cW[g] = sd.cFinvV;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            sd.cFinvV[k][l] = expand(sd.FinvV[k][l]);
            sd.cFinvt2V[k][l] = expand(sd.Finvt2V[k][l]);
            for (int g = 0; g < 3; ++g) {
                Poly<Real256> W = sd.V[k][l].shifted_up(1) - sd.V[k][l].scaled(sd.gap2[g]);
                sd.cW[g][k][l] = expand(W);
            }
        }
    return sd;
}

inline Real256 yweight(int pair_i, int pair_j, int i, int j) {
    // entry (i, j) of Y_{pair}: identity-like selectors with halves off the
    // diagonal pair
    if (pair_i == pair_j) return (i == pair_i && j == pair_i) ? Real256(1) : Real256(0);
    bool match = (i == pair_i && j == pair_j) || (i == pair_j && j == pair_i);
    return match ? Real256(Rat(1, 2)) : Real256(0);
}

}  // namespace detail

// Problem B: minimize max_i Finv[phi_ii](0) over PSD S_0, S_1 (Gram matrices
// of sigma in the scaled-Laguerre basis) and PSD Q_ij, subject to
//   (phi_ij(0) - sqrt(vol B(r_i) vol B(r_j)))_{ij} psd
//   <S0, Finv[V](w) (x) Y_ij> + <S1, Finv[t^2 V](w) (x) Y_ij>
//       + <Q_ij, (w^2 - (r_i+r_j)^2) V(w)> = 0,
// the identities checked coefficient-wise in the basis P_0(t^2)..P_d(t^2).
inline SdpProblem build_sphere_sdp(const SphereInstance& inst) {
    inst.validate();
    detail::SphereData sd = detail::make_sphere_data(inst);
    const int d = inst.d, m = sd.dh + 1;
    auto idx = [&](int type, int k) { return type * m + k; };

    SdpProblem p;
    int S0 = p.add_block("S0", d + 1, BlockKind::Psd);
    int S1 = p.add_block("S1", d + 1, BlockKind::Psd);
    std::array<int, 3> Qb{p.add_block("Q11", m, BlockKind::Psd), p.add_block("Q12", m, BlockKind::Psd),
                          p.add_block("Q22", m, BlockKind::Psd)};
    int T = p.add_block("T", 2, BlockKind::Psd);
    int Mb = p.add_block("M", 1, BlockKind::Psd);

    // pair identities
    for (int pi_ = 0; pi_ < 2; ++pi_)
        for (int pj = pi_; pj < 2; ++pj) {
            int g = detail::sphere_pair_index(pi_, pj);
            for (int t = 0; t <= d; ++t) {
                Constraint con;
                con.sense = Sense::EQ;
                con.rhs = 0;
                SymAccumulator acc;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        Real256 yw = detail::yweight(pi_, pj, i, j);
                        if (yw == 0) continue;
                        for (int k = 0; k < m; ++k)
                            for (int l = 0; l < m; ++l) {
                                Real256 c0 = yw * sd.cFinvV[k][l][t];
                                Real256 c1 = yw * sd.cFinvt2V[k][l][t];
                                if (c0 != 0) acc.add(S0, idx(i, k), idx(j, l), c0);
                                if (c1 != 0) acc.add(S1, idx(i, k), idx(j, l), c1);
                            }
                    }
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) {
                        Real256 cq = sd.cW[g][k][l][t];
                        if (cq != 0) acc.add(Qb[g], k, l, cq);
                    }
                acc.emit(con.lhs);
                p.constraints.push_back(std::move(con));
            }
        }

    // condition (i): T = (phi_ij(0) - volr_i volr_j) psd
    std::vector<Real256> b0(m);
    for (int k = 0; k < m; ++k) b0[k] = sd.belems[k].eval(Real256(0));
    for (int pi_ = 0; pi_ < 2; ++pi_)
        for (int pj = pi_; pj < 2; ++pj) {
            Constraint con;
            con.sense = Sense::EQ;
            con.rhs = sd.volr[pi_] * sd.volr[pj];
            SymAccumulator acc;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Real256 yw = detail::yweight(pi_, pj, i, j);
                    if (yw == 0) continue;
                    for (int k = 0; k < m; ++k)
                        for (int l = 0; l < m; ++l)
                            acc.add(S0, idx(i, k), idx(j, l), yw * b0[k] * b0[l]);
                }
            acc.add(T, pi_, pj, Real256(-1));
            acc.emit(con.lhs);
            p.constraints.push_back(std::move(con));
        }

    // epigraph: M >= Finv[phi_ii](0)
    for (int i = 0; i < 2; ++i) {
        Constraint con;
        con.sense = Sense::GE;
        con.rhs = 0;
        SymAccumulator acc;
        acc.add(Mb, 0, 0, Real256(1));
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                Real256 c0 = sd.FinvV[k][l].eval(Real256(0));
                Real256 c1 = sd.Finvt2V[k][l].eval(Real256(0));
                if (c0 != 0) acc.add(S0, idx(i, k), idx(i, l), -c0);
                if (c1 != 0) acc.add(S1, idx(i, k), idx(i, l), -c1);
            }
        acc.emit(con.lhs);
        p.constraints.push_back(std::move(con));
    }

    p.objective.entries.push_back(Entry{Mb, 0, 0, Real256(1)});
    p.sense = ObjSense::Minimize;
    return p;
}

struct SphereSolutionView {
    int n = 0, d = 0;
    Mat<Real256> S0, S1;
    std::map<std::pair<int, int>, Mat<Real256>> Q;
    Real256 bound;
    // phi_ij coefficient vectors over t^{2k}, pairs 11, 12, 22
    std::array<Poly<Real256>, 3> phi;
};

struct SphereBoundResult {
    Real256 bound;
    SolveStatus status = SolveStatus::Failed;
    SphereSolutionView view;
    SdpSolution solution;
};

// Reconstructs phi_ij(t) from the Gram blocks by the Kronecker extraction.
inline std::array<Poly<Real256>, 3> sphere_phi_from_grams(const SphereInstance& inst,
                                                          const Mat<Real256>& S0,
                                                          const Mat<Real256>& S1) {
    detail::SphereData sd = detail::make_sphere_data(inst);
    const int m = sd.dh + 1;
    auto idx = [&](int type, int k) { return type * m + k; };
    std::array<Poly<Real256>, 3> phi;
    for (int pi_ = 0; pi_ < 2; ++pi_)
        for (int pj = pi_; pj < 2; ++pj) {
            Poly<Real256> acc(PolyVar::X2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Real256 yw = detail::yweight(pi_, pj, i, j);
                    if (yw == 0) continue;
                    for (int k = 0; k < m; ++k)
                        for (int l = 0; l < m; ++l) {
                            Real256 s0 = S0(idx(i, k), idx(j, l)) * yw;
                            Real256 s1 = S1(idx(i, k), idx(j, l)) * yw;
                            if (s0 != 0) acc += sd.V[k][l].scaled(s0);
                            if (s1 != 0) acc += sd.V[k][l].shifted_up(1).scaled(s1);
                        }
                }
            phi[detail::sphere_pair_index(pi_, pj)] = std::move(acc);
        }
    return phi;
}

inline SphereBoundResult sphere_bound(const SphereInstance& inst, const SolverConfig& cfg = {}) {
    SdpProblem p = build_sphere_sdp(inst);
    SdpSolution sol = solve(p, cfg);
    if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Feasible)
        throw std::runtime_error("sphere_bound: solver failed: " + sol.message);
    SphereBoundResult r;
    r.bound = sol.objective;
    r.status = sol.status;
    r.view.n = inst.n;
    r.view.d = inst.d;
    r.view.S0 = sol.block_mats[p.block_index("S0")];
    r.view.S1 = sol.block_mats[p.block_index("S1")];
    r.view.Q[{0, 0}] = sol.block_mats[p.block_index("Q11")];
    r.view.Q[{0, 1}] = sol.block_mats[p.block_index("Q12")];
    r.view.Q[{1, 1}] = sol.block_mats[p.block_index("Q22")];
    r.view.bound = sol.objective;
    r.view.phi = sphere_phi_from_grams(inst, r.view.S0, r.view.S1);
    r.solution = std::move(sol);
    return r;
}

// Max of Finv[phi_ij](w) over a grid of [r_i+r_j, r_i+r_j+10] (condition
// (iii) audit: the reconstructed f_ij must be nonpositive past the gap).
inline Real256 sphere_forbidden_max(const SphereInstance& inst, const SphereSolutionView& view,
                                    int i, int j, int grid_points = 1000) {
    const Real256 pi = pi_real256();
    int g = detail::sphere_pair_index(i, j);
    Poly<Real256> q = fourier_inverse_radial(inst.n, view.phi[g], pi);
    Rat gap = (i == 0 ? inst.r1 : inst.r2) + (j == 0 ? inst.r1 : inst.r2);
    Real256 lo = to_real<Real256>(gap);
    Real256 worst = -1000;
    for (int s = 0; s <= grid_points; ++s) {
        Real256 w = lo + Real256(10) * Real256(s) / grid_points;
        Real256 v = q.eval(w);
        if (v > worst) worst = v;
    }
    return worst;
}

// Florian's planar bound for binary circle packings with radius ratio r:
//   (pi r^2 + 2 (1-r^2) arcsin(r/(1+r))) / (2 r sqrt(2r + 1)).
inline Real256 florian_2d_bound(const Rat& r) {
    if (!(r > 0) || r > 1) throw std::invalid_argument("florian_2d_bound: ratio must be in (0, 1]");
    const Real256 pi = pi_real256();
    Real256 x = to_real<Real256>(r);
    return (pi * x * x + 2 * (1 - x * x) * asin(x / (1 + x))) / (2 * x * sqrt(2 * x + 1));
}

// CSV sweep over radius ratios; failures are recorded per row.
inline void sweep_spheres(int n, const std::vector<Rat>& ratios, int d, const SolverConfig& cfg,
                          std::ostream& out, int jobs = 1) {
    if (ratios.empty()) throw std::invalid_argument("sweep_spheres: empty grid");
    auto work = [&](size_t g) -> std::string {
        std::ostringstream row;
        row << n << ',' << detail::format_sig12(to_real<Real256>(ratios[g])) << ',';
        try {
            SphereInstance inst{n, ratios[g], Rat(1), d};
            SphereBoundResult r = sphere_bound(inst, cfg);
            row << detail::format_sig12(r.bound) << ',';
            if (n == 2) row << detail::format_sig12(florian_2d_bound(ratios[g]));
            row << ',' << to_string(r.status);
        } catch (const std::exception& e) {
            row << ",," << "failed: " << e.what();
        }
        return row.str();
    };
    auto rows = detail::ordered_parallel(ratios.size(), jobs, work);
    out << "n,r,sdp_bound,florian_bound,status\n";
    for (auto& r : rows) out << r << "\n";
}

}  // namespace packbound
