#pragma once

#include "packbound/euclidean_bounds.hpp"

#include <array>
#include <istream>
#include <sstream>
#include <vector>

namespace packbound {

// t(eps) = 1 - 1/(2 (1+eps)^2), exact; the reduction to spherical-code
// bounds requires eps < sqrt(2) - 1, i.e. (1+eps)^2 < 2.
inline Rat t_of_eps(const Rat& eps) {
    if (eps < 0) throw std::domain_error("t_of_eps: eps must be nonnegative");
    Rat s = (1 + eps) * (1 + eps);
    if (!(s < 2)) throw std::domain_error("t_of_eps: eps must be below sqrt(2) - 1");
    return 1 - Rat(1) / (2 * s);
}

// (eps_k, U(eps_k)) rows: upper bounds on the average degree of the
// eps-tangency graph, consumed as input data.
struct TangencyTable {
    int dimension = 0;
    std::vector<std::pair<Rat, Real256>> rows;  // strictly increasing eps

    int size() const { return static_cast<int>(rows.size()); }

    void validate() const {
        Rat prev_eps(-1);
        Real256 prev_u(-1);
        for (auto& [eps, u] : rows) {
            if (!(eps > 0)) throw std::invalid_argument("TangencyTable: eps must be positive");
            if (!(eps > prev_eps)) throw std::invalid_argument("TangencyTable: eps not strictly increasing");
            if (u < 0) throw std::invalid_argument("TangencyTable: negative degree bound");
            if (u < prev_u) throw std::invalid_argument("TangencyTable: degree bounds must be nondecreasing");
            prev_eps = eps;
            prev_u = u;
        }
        if (!rows.empty()) {
            Rat s = (1 + rows.back().first) * (1 + rows.back().first);
            if (!(s < 2))
                throw std::invalid_argument("TangencyTable: largest eps must stay below sqrt(2) - 1");
        }
    }
};

// CSV rows "epsilon,U" (a header line is allowed).
inline TangencyTable load_table(std::istream& in, int dimension) {
    TangencyTable t;
    t.dimension = dimension;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("load_table: line " + std::to_string(lineno) + " has no comma");
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        if (lineno == 1 && a == "epsilon") continue;  // header
        t.rows.emplace_back(rat_from_string(a), to_real<Real256>(rat_from_string(b)));
    }
    t.validate();
    return t;
}

// The (eps, U(eps)) data shipped with the artifact, dimensions 3-7 and 9.
inline TangencyTable builtin_table(int n) {
    auto mk = [n](std::initializer_list<std::pair<const char*, int>> rows) {
        TangencyTable t;
        t.dimension = n;
        for (auto& [e, u] : rows) t.rows.emplace_back(rat_from_string(e), Real256(u));
        t.validate();
        return t;
    };
    switch (n) {
        case 3:
            return mk({{"0.022753", 12}, {"0.054092", 13}, {"0.082109", 14}, {"0.113864", 15}});
        case 4:
            return mk({{"0.008097", 24}, {"0.017446", 25}, {"0.025978", 26}, {"0.036951", 27}});
        case 5:
            return mk({{"0.003013", 45}, {"0.008097", 46}, {"0.013259", 47}, {"0.017446", 48}});
        case 6:
            return mk({{"0.002006", 79}, {"0.004024", 80}, {"0.006054", 81}, {"0.008097", 82}});
        case 7:
            return mk({{"0.001001", 136},
                       {"0.002006", 137},
                       {"0.003013", 138},
                       {"0.004024", 139},
                       {"0.005037", 140}});
        case 9:
            return mk({{"0.003013", 373},
                       {"0.029233", 457},
                       {"0.030325", 459},
                       {"0.031421", 464},
                       {"0.032520", 468},
                       {"0.033622", 473}});
        default:
            throw std::invalid_argument("builtin_table: no data for dimension " + std::to_string(n));
    }
}

struct CeInstance {
    int n = 3;
    TangencyTable table;
    int d = 3;

    void validate() const {
        if (n < 1) throw std::invalid_argument("CeInstance: dimension must be >= 1");
        if (d < 1 || d % 2 == 0) throw std::invalid_argument("CeInstance: degree must be odd, >= 1");
        if (!table.rows.empty() && table.dimension != n)
            throw std::invalid_argument("CeInstance: table dimension mismatch");
        table.validate();
    }
};

namespace detail {

// Expands a general polynomial (var X, degree <= 2d) in the interleaved
// basis G_{2s} = b_s(w^2), G_{2s+1} = w b_s(w^2).
inline std::vector<Real256> general_expand(const Poly<Real256>& p,
                                           const std::vector<Poly<Real256>>& belems_x2, int d) {
    std::vector<Real256> out(2 * d + 1, Real256(0));
    Poly<Real256> even = poly_even_part(p), odd = poly_odd_part(p);
    auto ec = change_basis(even, belems_x2);
    for (size_t s = 0; s < ec.size(); ++s)
        if (2 * s <= static_cast<size_t>(2 * d)) out[2 * s] = ec[s];
    if (!odd.is_zero()) {
        auto oc = change_basis(odd, belems_x2);
        for (size_t s = 0; s < oc.size(); ++s)
            if (2 * s + 1 <= static_cast<size_t>(2 * d)) out[2 * s + 1] = oc[s];
    }
    return out;
}

}  // namespace detail

// The merged Theorem-4 program (section-6 dual form):
//   min f(0) + sum_k y_k U(eps_k)
//   phi an even SOS (blocks S0, S1), f = Finv[phi] e^{-pi w^2},
//   phi(0) >= vol B(1/2),
//   -Finv[phi] = sos + (w^2 - (1+eps_m)^2) sos            (condition iii)
//   Finv[phi] e^{-pi a_k^2} - eta_k = -sos - (w-a_k)(b_k-w) sos   (iv)
//   y_i + ... + y_m >= eta_i,  y, eta >= 0.
inline SdpProblem build_ce_sdp(const CeInstance& inst) {
    inst.validate();
    const Real256 pi = pi_real256();
    const int d = inst.d, m = inst.table.size();
    const int dh = (d - 1) / 2, mv = dh + 1;

    BasisSpec basis = make_basis_B(inst.n, d);
    std::vector<Poly<Real256>> belems = basis.elements_real<Real256>(pi);
    std::vector<Poly<Real256>> belems_x2;
    for (auto& e : belems) {
        Poly<Real256> q = e;
        q.var = PolyVar::X2;
        belems_x2.push_back(std::move(q));
    }
    // G basis for the shell identities
    std::vector<Poly<Real256>> G;
    for (int j = 0; j <= 2 * d; ++j) {
        Poly<Real256> e = belems_x2[j / 2].to_var_x();
        if (j % 2) e = e.shifted_up(1);
        G.push_back(std::move(e));
    }

    std::vector<std::vector<Poly<Real256>>> Vx(mv, std::vector<Poly<Real256>>(mv));
    auto FinvV = Vx, Finvt2V = Vx;
    for (int k = 0; k < mv; ++k)
        for (int l = 0; l < mv; ++l) {
            Vx[k][l] = belems_x2[k] * belems_x2[l];
            FinvV[k][l] = fourier_inverse_radial(inst.n, Vx[k][l], pi);
            Finvt2V[k][l] = fourier_inverse_radial(inst.n, Vx[k][l].shifted_up(1), pi);
        }

    SdpProblem p;
    int S0 = p.add_block("S0", mv, BlockKind::Psd);
    int S1 = p.add_block("S1", mv, BlockKind::Psd);
    int P0 = p.add_block("P0", mv, BlockKind::Psd);
    int Q0 = p.add_block("Q0", mv, BlockKind::Psd);
    std::vector<int> Pk(m), Qk(m);
    for (int k = 0; k < m; ++k) {
        Pk[k] = p.add_block("P" + std::to_string(k + 1), d + 1, BlockKind::Psd);
        Qk[k] = p.add_block("Q" + std::to_string(k + 1), d, BlockKind::Psd);
    }
    int eta = m ? p.add_block("eta", m, BlockKind::Diag) : -1;
    int yb = m ? p.add_block("y", m, BlockKind::Diag) : -1;

    Real256 eps_m = m ? to_real<Real256>(inst.table.rows.back().first) : Real256(0);
    Real256 cm = 1 + eps_m;

    // condition (iii) in x = w^2: expand in b_0..b_d
    for (int t = 0; t <= d; ++t) {
        Constraint con;
        con.sense = Sense::EQ;
        con.rhs = 0;
        SymAccumulator acc;
        for (int k = 0; k < mv; ++k)
            for (int l = 0; l < mv; ++l) {
                auto cf = change_basis(FinvV[k][l], belems_x2);
                auto cf2 = change_basis(Finvt2V[k][l], belems_x2);
                if (cf[t] != 0) acc.add(S0, k, l, cf[t]);
                if (cf2[t] != 0) acc.add(S1, k, l, cf2[t]);
                auto cp = change_basis(Vx[k][l], belems_x2);
                Poly<Real256> wq = Vx[k][l].shifted_up(1) - Vx[k][l].scaled(cm * cm);
                auto cq = change_basis(wq, belems_x2);
                if (cp[t] != 0) acc.add(P0, k, l, cp[t]);
                if (cq[t] != 0) acc.add(Q0, k, l, cq[t]);
            }
        acc.emit(con.lhs);
        p.constraints.push_back(std::move(con));
    }

    // condition (iv), one identity per shell, expanded in the G basis
    for (int sh = 0; sh < m; ++sh) {
        Real256 a = 1 + (sh == 0 ? Real256(0) : to_real<Real256>(inst.table.rows[sh - 1].first));
        Real256 b = 1 + to_real<Real256>(inst.table.rows[sh].first);
        Real256 escale = exp(-pi * a * a);
        // weight (w-a)(b-w) = -w^2 + (a+b) w - ab
        Poly<Real256> wgt(PolyVar::X, {-a * b, a + b, Real256(-1)});
        std::vector<Constraint> rows(2 * d + 1);
        std::vector<SymAccumulator> accs(2 * d + 1);
        for (int k = 0; k < mv; ++k)
            for (int l = 0; l < mv; ++l) {
                auto cf = change_basis(FinvV[k][l], belems_x2);
                auto cf2 = change_basis(Finvt2V[k][l], belems_x2);
                for (int t = 0; t <= d; ++t) {
                    if (cf[t] != 0) accs[2 * t].add(S0, k, l, escale * cf[t]);
                    if (cf2[t] != 0) accs[2 * t].add(S1, k, l, escale * cf2[t]);
                }
            }
        for (int u = 0; u <= d; ++u)
            for (int v = 0; v <= d; ++v) {
                auto ce = detail::general_expand(G[u] * G[v], belems_x2, d);
                for (int t = 0; t <= 2 * d; ++t)
                    if (ce[t] != 0) accs[t].add(Pk[sh], u, v, ce[t]);
            }
        for (int u = 0; u < d; ++u)
            for (int v = 0; v < d; ++v) {
                auto ce = detail::general_expand(wgt * G[u] * G[v], belems_x2, d);
                for (int t = 0; t <= 2 * d; ++t)
                    if (ce[t] != 0) accs[t].add(Qk[sh], u, v, ce[t]);
            }
        accs[0].add(eta, sh, sh, Real256(-1));  // the -eta_k constant (G_0 = 1)
        for (int t = 0; t <= 2 * d; ++t) {
            rows[t].sense = Sense::EQ;
            rows[t].rhs = 0;
            accs[t].emit(rows[t].lhs);
            p.constraints.push_back(std::move(rows[t]));
        }
    }

    // y_i + ... + y_m >= eta_i
    for (int i = 0; i < m; ++i) {
        Constraint con;
        con.sense = Sense::GE;
        con.rhs = 0;
        for (int k = i; k < m; ++k) con.lhs.entries.push_back(Entry{yb, k, k, Real256(1)});
        con.lhs.entries.push_back(Entry{eta, i, i, Real256(-1)});
        p.constraints.push_back(std::move(con));
    }

    // condition (i): phi(0) >= vol B(1/2)
    {
        Constraint con;
        con.sense = Sense::GE;
        con.rhs = ball_volume(inst.n, Rat(1, 2)).value(pi);
        SymAccumulator acc;
        for (int k = 0; k < mv; ++k)
            for (int l = 0; l < mv; ++l) {
                Real256 c = Vx[k][l].eval(Real256(0));
                if (c != 0) acc.add(S0, k, l, c);
            }
        acc.emit(con.lhs);
        p.constraints.push_back(std::move(con));
    }

    // objective: f(0) + sum y_k U_k
    {
        SymAccumulator acc;
        for (int k = 0; k < mv; ++k)
            for (int l = 0; l < mv; ++l) {
                Real256 c0 = FinvV[k][l].eval(Real256(0));
                Real256 c1 = Finvt2V[k][l].eval(Real256(0));
                if (c0 != 0) acc.add(S0, k, l, c0);
                if (c1 != 0) acc.add(S1, k, l, c1);
            }
        for (int k = 0; k < m; ++k) acc.add(yb, k, k, inst.table.rows[k].second);
        acc.emit(p.objective);
    }
    p.sense = ObjSense::Minimize;
    return p;
}

// density / vol B(1): the center density convention of the reported tables.
inline Real256 center_density(int n, const Real256& density) {
    if (density < 0 || density > 1)
        throw std::domain_error("center_density: density must lie in [0, 1]");
    return density / ball_volume(n, Rat(1)).value(pi_real256());
}

struct CeSolutionView {
    Poly<Real256> phi;            // coefficients over t^{2k}
    Poly<Real256> g;              // Finv[phi]
    std::vector<Real256> y, eta;  // dual weights and shell bounds
    Real256 bound, center_density_value;
};

struct CeBoundResult {
    Real256 bound;
    Real256 center_density_value;
    SolveStatus status = SolveStatus::Failed;
    CeSolutionView view;
    SdpSolution solution;
};

inline CeBoundResult ce_bound(const CeInstance& inst, const SolverConfig& cfg = {}) {
    SdpProblem p = build_ce_sdp(inst);
    SdpSolution sol = solve(p, cfg);
    if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Feasible)
        throw std::runtime_error("ce_bound: solver failed: " + sol.message);
    CeBoundResult r;
    r.bound = sol.objective;
    r.center_density_value = center_density(inst.n, sol.objective < 1 ? sol.objective : Real256(1));
    r.status = sol.status;

    const Real256 pi = pi_real256();
    const int dh = (inst.d - 1) / 2, mv = dh + 1;
    BasisSpec basis = make_basis_B(inst.n, inst.d);
    auto belems = basis.elements_real<Real256>(pi);
    Poly<Real256> phi(PolyVar::X2);
    const Mat<Real256>& S0 = sol.block_mats[p.block_index("S0")];
    const Mat<Real256>& S1 = sol.block_mats[p.block_index("S1")];
    for (int k = 0; k < mv; ++k)
        for (int l = 0; l < mv; ++l) {
            Poly<Real256> bk = belems[k], bl = belems[l];
            bk.var = PolyVar::X2;
            bl.var = PolyVar::X2;
            Poly<Real256> prod = bk * bl;
            if (S0(k, l) != 0) phi += prod.scaled(S0(k, l));
            if (S1(k, l) != 0) phi += prod.shifted_up(1).scaled(S1(k, l));
        }
    r.view.phi = phi;
    r.view.g = fourier_inverse_radial(inst.n, phi, pi);
    int m = inst.table.size();
    if (m) {
        const Mat<Real256>& Y = sol.block_mats[p.block_index("y")];
        const Mat<Real256>& E = sol.block_mats[p.block_index("eta")];
        for (int k = 0; k < m; ++k) {
            r.view.y.push_back(Y(k, k));
            r.view.eta.push_back(E(k, k));
        }
    }
    r.view.bound = r.bound;
    r.view.center_density_value = r.center_density_value;
    r.solution = std::move(sol);
    return r;
}

// CSV batch over dimensions with built-in tables.
inline void ce_batch(const std::vector<int>& dims, int d, const SolverConfig& cfg, std::ostream& out,
                     int jobs = 1) {
    auto work = [&](size_t g) -> std::string {
        std::ostringstream row;
        row << dims[g] << ',' << d << ',';
        try {
            CeInstance inst{dims[g], builtin_table(dims[g]), d};
            CeBoundResult r = ce_bound(inst, cfg);
            row << detail::format_sig12(r.bound) << ',' << detail::format_sig12(r.center_density_value)
                << ',' << to_string(r.status);
        } catch (const std::exception& e) {
            row << ",," << "failed: " << e.what();
        }
        return row.str();
    };
    auto rows = detail::ordered_parallel(dims.size(), jobs, work);
    out << "n,d,density_bound,center_density,status\n";
    for (auto& r : rows) out << r << "\n";
}

}  // namespace packbound
