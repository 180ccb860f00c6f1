#pragma once

#include "packbound/sdp.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace packbound {

// Embedded dense primal-dual path-following solver (HKM direction with a
// Mehrotra predictor-corrector, symmetrized primal step).  Deterministic for
// a fixed configuration; intended for desk-scale problems (blocks up to a
// few hundred rows) -- larger instances should go through the SDPA export.
struct SolverConfig {
    unsigned precision = 113;  // mantissa bits: 53, 113 or 256
    Real256 tolerance = 0;     // 0 selects the per-precision default
    int max_iterations = 200;
    bool log_iterates = false;

    Real256 effective_tolerance() const {
        if (tolerance > 0) return tolerance;
        if (precision <= 53) return Real256(1e-8);
        if (precision <= 113) return Real256("1e-16");
        return Real256("1e-30");
    }
};

namespace detail {

template <class Real>
struct REntry {
    int block, i, j;
    Real v;
};

template <class Real>
struct KernelData {
    struct Blk {
        int size;
        bool diag;
    };
    std::vector<Blk> blocks;
    std::vector<std::vector<REntry<Real>>> A;  // per constraint
    std::vector<Real> b;
    std::vector<REntry<Real>> C;
    int n_total = 0;
};

// tr(A_i * M) for a sparse symmetric functional against a (possibly
// non-symmetric) dense matrix.
template <class Real>
Real sparse_trace_dot(const std::vector<REntry<Real>>& ent, const std::vector<Mat<Real>>& M) {
    Real acc(0);
    for (auto& e : ent) {
        if (e.i == e.j)
            acc += e.v * M[e.block](e.i, e.i);
        else
            acc += e.v * (M[e.block](e.i, e.j) + M[e.block](e.j, e.i));
    }
    return acc;
}

template <class Real>
void sparse_add_scaled(const std::vector<REntry<Real>>& ent, const Real& s, std::vector<Mat<Real>>& M) {
    for (auto& e : ent) {
        M[e.block](e.i, e.j) += s * e.v;
        if (e.i != e.j) M[e.block](e.j, e.i) += s * e.v;
    }
}

template <class Real>
Real block_min_eig(const Mat<Real>& A, bool diag, const Real& tol) {
    if (diag) {
        Real m = A(0, 0);
        for (int i = 1; i < A.rows; ++i)
            if (A(i, i) < m) m = A(i, i);
        return m;
    }
    return min_eigenvalue(A, tol);
}

// Step-to-boundary estimate: largest alpha (capped) with S + alpha dS
// positive semidefinite, from the spectrum of L^-1 dS L^-T.
template <class Real>
Real max_step(const Mat<Real>& S, const Mat<Real>& dS, bool diag, const Real& cap) {
    Real alpha = cap;
    if (diag) {
        for (int i = 0; i < S.rows; ++i)
            if (dS(i, i) < 0) {
                Real lim = -S(i, i) / dS(i, i);
                if (lim < alpha) alpha = lim;
            }
        return alpha;
    }
    Mat<Real> L;
    if (!cholesky(S, L)) return Real(0);
    Mat<Real> Y = forward_solve(L, dS);
    Mat<Real> G = forward_solve(L, Y.transposed());
    G.symmetrize();
    Real scale = max_abs(G);
    if (scale == Real(0)) return alpha;
    Real lmin = min_eigenvalue(G, scale * Real(1e-6));
    if (lmin < 0) {
        Real lim = Real(-1) / lmin;
        if (lim < alpha) alpha = lim;
    }
    return alpha;
}

// Shrinks alpha deterministically until every block stays strictly
// positive definite after the step.
template <class Real>
Real verified_step(const std::vector<Mat<Real>>& S, const std::vector<Mat<Real>>& dS,
                   const std::vector<bool>& diag, Real alpha) {
    for (int tries = 0; tries < 300 && alpha > Real(0); ++tries) {
        bool ok = true;
        for (size_t b = 0; b < S.size() && ok; ++b) {
            Mat<Real> trial = S[b];
            for (size_t t = 0; t < trial.a.size(); ++t) trial.a[t] += alpha * dS[b].a[t];
            if (diag[b]) {
                for (int i = 0; i < trial.rows; ++i)
                    if (!(trial(i, i) > 0)) { ok = false; break; }
            } else {
                Mat<Real> Lt;
                ok = cholesky(trial, Lt);
            }
        }
        if (ok) return alpha;
        alpha *= Real(Rat(9, 10));
    }
    return Real(0);
}

template <class Real>
KernelData<Real> lower_problem(const CanonicalSdp& c) {
    KernelData<Real> k;
    for (auto& blk : c.blocks) {
        k.blocks.push_back({blk.size, blk.kind == BlockKind::Diag});
        k.n_total += blk.size;
    }
    k.A.resize(c.constraints.size());
    for (size_t i = 0; i < c.constraints.size(); ++i) {
        for (auto& e : c.constraints[i].lhs.entries) {
            if (k.blocks[e.block].diag && e.i != e.j)
                throw std::logic_error("solver: off-diagonal entry on diagonal block");
            k.A[i].push_back({e.block, e.i, e.j, static_cast<Real>(e.value)});
        }
        k.b.push_back(static_cast<Real>(c.constraints[i].rhs));
    }
    for (auto& e : c.objective.entries)
        k.C.push_back({e.block, e.i, e.j, static_cast<Real>(e.value)});
    return k;
}

template <class Real>
struct IpmResult {
    SolveStatus status = SolveStatus::Failed;
    std::vector<Mat<Real>> X;
    std::vector<Real> y;
    Real pobj{}, dobj{};
    std::string message;
    std::vector<std::string> log;
    int iterations = 0;
};

template <class Real>
IpmResult<Real> ipm_solve(const KernelData<Real>& kd, const SolverConfig& cfg) {
    using std::abs;
    using std::max;
    const int m = static_cast<int>(kd.A.size());
    const int nb = static_cast<int>(kd.blocks.size());
    const Real tol = static_cast<Real>(cfg.effective_tolerance());

    IpmResult<Real> res;

    // initial point: scaled identity
    Real xi(10);
    for (auto& bi : kd.b) xi = max(xi, abs(bi));
    {
        Real normC(0), normA(0);
        for (auto& e : kd.C) normC += e.v * e.v;
        for (auto& con : kd.A) {
            Real s(0);
            for (auto& e : con) s += e.v * e.v;
            normA = max(normA, s);
        }
        using std::sqrt;
        xi = max(xi, sqrt(normC));
        xi = max(xi, sqrt(normA));
    }

    std::vector<Mat<Real>> X(nb), Z(nb);
    for (int b = 0; b < nb; ++b) {
        X[b] = Mat<Real>::identity(kd.blocks[b].size).scaled(xi);
        Z[b] = Mat<Real>::identity(kd.blocks[b].size).scaled(xi);
    }
    std::vector<Real> y(m, Real(0));

    // best-so-far iterate, returned when the iteration stalls near the end
    std::vector<Mat<Real>> bestX;
    std::vector<Real> besty;
    Real best_metric(-1), best_pobj(0), best_dobj(0);
    int stall_count = 0;

    Real bmax(1), cmax(1);
    for (auto& bi : kd.b) bmax = max(bmax, abs(bi));
    for (auto& e : kd.C) cmax = max(cmax, abs(e.v));

    auto make_mats = [&]() {
        std::vector<Mat<Real>> v(nb);
        for (int b = 0; b < nb; ++b) v[b] = Mat<Real>(kd.blocks[b].size, kd.blocks[b].size);
        return v;
    };

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        res.iterations = iter;
        // residuals
        std::vector<Real> rp(m);
        Real pinf(0);
        for (int i = 0; i < m; ++i) {
            rp[i] = kd.b[i] - sparse_trace_dot(kd.A[i], X);
            pinf = max(pinf, abs(rp[i]));
        }
        pinf /= bmax;
        std::vector<Mat<Real>> Rd = make_mats();
        sparse_add_scaled(kd.C, Real(1), Rd);
        for (int b = 0; b < nb; ++b) Rd[b] -= Z[b];
        for (int i = 0; i < m; ++i) sparse_add_scaled(kd.A[i], -y[i], Rd);
        Real dinf(0);
        for (int b = 0; b < nb; ++b) dinf = max(dinf, max_abs(Rd[b]));
        dinf /= cmax;

        Real pobj = sparse_trace_dot(kd.C, X);
        Real dobj(0);
        for (int i = 0; i < m; ++i) dobj += kd.b[i] * y[i];
        Real gap(0);
        for (int b = 0; b < nb; ++b) gap += frob_inner(X[b], Z[b]);
        Real mu = gap / Real(kd.n_total);
        Real relgap = abs(pobj - dobj) / (Real(1) + abs(pobj) + abs(dobj));

        res.pobj = pobj;
        res.dobj = dobj;
        if (cfg.log_iterates) {
            std::ostringstream os;
            os << std::scientific << std::setprecision(18) << iter << " mu=" << double(mu)
               << " pobj=" << pobj << " dobj=" << dobj << " pinf=" << double(pinf)
               << " dinf=" << double(dinf);
            res.log.push_back(os.str());
        }

        if (pinf <= tol && dinf <= tol && relgap <= tol) {
            res.status = SolveStatus::Optimal;
            res.X = X;
            res.y = y;
            return res;
        }
        {
            Real metric = pinf;
            if (dinf > metric) metric = dinf;
            if (relgap > metric) metric = relgap;
            if (best_metric < Real(0) || metric < best_metric) {
                best_metric = metric;
                bestX = X;
                besty = y;
                best_pobj = pobj;
                best_dobj = dobj;
                stall_count = 0;
            } else if (++stall_count >= 25) {
                res.status = SolveStatus::Feasible;
                {
                    std::ostringstream msg;
                    msg << std::scientific << std::setprecision(3)
                        << "stalled; returning best iterate (max residual " << double(best_metric) << ")";
                    res.message = msg.str();
                }
                res.X = bestX;
                res.y = besty;
                res.pobj = best_pobj;
                res.dobj = best_dobj;
                return res;
            }
        }

        // factor Z, form Zinv
        std::vector<Mat<Real>> Zinv(nb);
        bool ok = true;
        for (int b = 0; b < nb; ++b) {
            int s = kd.blocks[b].size;
            if (kd.blocks[b].diag) {
                Zinv[b] = Mat<Real>(s, s);
                for (int i = 0; i < s; ++i) {
                    if (!(Z[b](i, i) > 0)) { ok = false; break; }
                    Zinv[b](i, i) = Real(1) / Z[b](i, i);
                }
            } else {
                Mat<Real> L;
                if (!cholesky(Z[b], L)) { ok = false; break; }
                Zinv[b] = backward_solve(L, forward_solve(L, Mat<Real>::identity(s)));
                Zinv[b].symmetrize();
            }
            if (!ok) break;
        }
        if (!ok) {
            res.status = SolveStatus::Failed;
            res.message = "numerical breakdown: dual iterate lost positive definiteness";
            res.X = X; res.y = y;
            return res;
        }

        // Schur complement M_pq = sum_b tr(A_p X A_q Zinv)
        Mat<Real> M(m, m);
        {
            std::vector<Mat<Real>> G(nb);
            for (int q = 0; q < m; ++q) {
                for (int b = 0; b < nb; ++b) G[b] = Mat<Real>(kd.blocks[b].size, kd.blocks[b].size);
                // G = X A_q Zinv per block
                for (auto& e : kd.A[q]) {
                    int s = kd.blocks[e.block].size;
                    if (kd.blocks[e.block].diag) {
                        G[e.block](e.i, e.i) += X[e.block](e.i, e.i) * e.v * Zinv[e.block](e.i, e.i);
                    } else {
                        Mat<Real>& g = G[e.block];
                        const Mat<Real>& Xb = X[e.block];
                        const Mat<Real>& Zb = Zinv[e.block];
                        for (int r = 0; r < s; ++r) {
                            Real xv = Xb(r, e.i) * e.v;
                            if (xv != Real(0))
                                for (int c2 = 0; c2 < s; ++c2) g(r, c2) += xv * Zb(e.j, c2);
                            if (e.i != e.j) {
                                Real xv2 = Xb(r, e.j) * e.v;
                                if (xv2 != Real(0))
                                    for (int c2 = 0; c2 < s; ++c2) g(r, c2) += xv2 * Zb(e.i, c2);
                            }
                        }
                    }
                }
                for (int p = 0; p <= q; ++p) {
                    Real v = sparse_trace_dot(kd.A[p], G);
                    M(p, q) = v;
                    M(q, p) = v;
                }
            }
        }
        Mat<Real> LM;
        {
            bool chol_ok = cholesky(M, LM);
            if (!chol_ok) {
                // deterministic ridge retries
                Real ridge = max_abs(M) * Real(1e-14);
                for (int t = 0; t < 3 && !chol_ok; ++t) {
                    Mat<Real> M2 = M;
                    for (int i = 0; i < m; ++i) M2(i, i) += ridge;
                    chol_ok = cholesky(M2, LM);
                    ridge *= Real(1024);
                }
                if (!chol_ok) {
                    res.status = SolveStatus::Failed;
                    res.message = "numerical breakdown: Schur complement not positive definite";
                    res.X = X; res.y = y;
                    return res;
                }
            }
        }

        auto schur_solve = [&](const std::vector<Real>& r) {
            std::vector<Real> dy0 = cholesky_solve(LM, r);
            // one step of iterative refinement
            std::vector<Real> resid(m);
            for (int i = 0; i < m; ++i) {
                Real acc = r[i];
                for (int j = 0; j < m; ++j) acc -= M(i, j) * dy0[j];
                resid[i] = acc;
            }
            std::vector<Real> corr = cholesky_solve(LM, resid);
            for (int i = 0; i < m; ++i) dy0[i] += corr[i];
            return dy0;
        };

        auto mat_product = [&](const Mat<Real>& A2, const Mat<Real>& B2, bool diag) {
            if (!diag) return matmul(A2, B2);
            Mat<Real> r(A2.rows, A2.cols);
            for (int i = 0; i < A2.rows; ++i) r(i, i) = A2(i, i) * B2(i, i);
            return r;
        };

        // H1 = X Rd Zinv
        std::vector<Mat<Real>> H1(nb);
        for (int b = 0; b < nb; ++b)
            H1[b] = mat_product(mat_product(X[b], Rd[b], kd.blocks[b].diag), Zinv[b], kd.blocks[b].diag);

        // predictor
        std::vector<Real> rhs(m);
        for (int i = 0; i < m; ++i) rhs[i] = kd.b[i] + sparse_trace_dot(kd.A[i], H1);
        std::vector<Real> dya = schur_solve(rhs);
        std::vector<Mat<Real>> dZa = Rd;
        for (int i = 0; i < m; ++i) sparse_add_scaled(kd.A[i], -dya[i], dZa);
        std::vector<Mat<Real>> dXa(nb);
        for (int b = 0; b < nb; ++b) {
            dXa[b] = mat_product(mat_product(X[b], dZa[b], kd.blocks[b].diag), Zinv[b], kd.blocks[b].diag).scaled(Real(-1));
            dXa[b] -= X[b];
            dXa[b].symmetrize();
        }

        Real cap(1);
        Real apa = cap, ada = cap;
        for (int b = 0; b < nb; ++b) {
            apa = std::min(apa, max_step(X[b], dXa[b], kd.blocks[b].diag, cap));
            ada = std::min(ada, max_step(Z[b], dZa[b], kd.blocks[b].diag, cap));
        }
        Real gap_aff(0);
        for (int b = 0; b < nb; ++b) {
            Mat<Real> Xt = X[b], Zt = Z[b];
            for (size_t t = 0; t < Xt.a.size(); ++t) {
                Xt.a[t] += apa * dXa[b].a[t];
                Zt.a[t] += ada * dZa[b].a[t];
            }
            gap_aff += frob_inner(Xt, Zt);
        }
        Real sigma;
        if (gap <= Real(0)) {
            sigma = Real(Rat(1, 10));
        } else {
            Real ratio = gap_aff / gap;
            if (ratio < 0) ratio = Real(0);
            sigma = ratio * ratio * ratio;
            if (sigma > Real(1)) sigma = Real(1);
            Real smin = Real(1e-12);
            if (sigma < smin) sigma = smin;
        }

        // corrector
        std::vector<Mat<Real>> H2(nb);
        for (int b = 0; b < nb; ++b) {
            Mat<Real> t = mat_product(X[b], Rd[b], kd.blocks[b].diag);
            t += mat_product(dXa[b], dZa[b], kd.blocks[b].diag);
            H2[b] = mat_product(t, Zinv[b], kd.blocks[b].diag);
        }
        Real smu = sigma * mu;
        for (int i = 0; i < m; ++i) {
            Real trAZinv(0);
            for (auto& e : kd.A[i])
                trAZinv += (e.i == e.j) ? e.v * Zinv[e.block](e.i, e.i)
                                        : e.v * (Zinv[e.block](e.i, e.j) + Zinv[e.block](e.j, e.i));
            rhs[i] = kd.b[i] - smu * trAZinv + sparse_trace_dot(kd.A[i], H2);
        }
        std::vector<Real> dy = schur_solve(rhs);
        std::vector<Mat<Real>> dZ = Rd;
        for (int i = 0; i < m; ++i) sparse_add_scaled(kd.A[i], -dy[i], dZ);
        std::vector<Mat<Real>> dX(nb);
        for (int b = 0; b < nb; ++b) {
            Mat<Real> t = mat_product(X[b], dZ[b], kd.blocks[b].diag);
            t += mat_product(dXa[b], dZa[b], kd.blocks[b].diag);
            dX[b] = mat_product(t, Zinv[b], kd.blocks[b].diag).scaled(Real(-1));
            dX[b] -= X[b];
            dX[b] += Zinv[b].scaled(smu);
            dX[b].symmetrize();
        }

        // fraction-to-boundary
        Real gamma = Real(1) - Real(10) * relgap;
        Real glo = Real(Rat(9, 10)), ghi = Real(Rat(98, 100));
        if (gamma < glo) gamma = glo;
        if (gamma > ghi) gamma = ghi;
        std::vector<bool> isdiag(nb);
        for (int b = 0; b < nb; ++b) isdiag[b] = kd.blocks[b].diag;
        Real ap = cap, ad = cap;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, gamma * max_step(X[b], dX[b], kd.blocks[b].diag, Real(1) / gamma));
            ad = std::min(ad, gamma * max_step(Z[b], dZ[b], kd.blocks[b].diag, Real(1) / gamma));
        }
        if (ap > Real(1)) ap = Real(1);
        if (ad > Real(1)) ad = Real(1);
        ap = verified_step(X, dX, isdiag, ap);
        ad = verified_step(Z, dZ, isdiag, ad);
        if (ap == Real(0) || ad == Real(0)) {
            res.status = SolveStatus::Failed;
            res.message = "numerical breakdown: no positive step available";
            res.X = X; res.y = y;
            return res;
        }

        for (int b = 0; b < nb; ++b) {
            for (size_t t = 0; t < X[b].a.size(); ++t) {
                X[b].a[t] += ap * dX[b].a[t];
                Z[b].a[t] += ad * dZ[b].a[t];
            }
        }
        for (int i = 0; i < m; ++i) y[i] += ad * dy[i];
    }

    if (best_metric >= Real(0) && best_metric <= sqrt(tol)) {
        res.status = SolveStatus::Feasible;
        {
            std::ostringstream msg;
            msg << std::scientific << std::setprecision(3)
                << "iteration limit; returning best iterate (max residual " << double(best_metric) << ")";
            res.message = msg.str();
        }
        res.X = bestX;
        res.y = besty;
        res.pobj = best_pobj;
        res.dobj = best_dobj;
        return res;
    }
    res.status = SolveStatus::Failed;
    res.message = "iteration limit reached";
    res.X = X;
    res.y = y;
    return res;
}

template <class Real>
SdpSolution finish_solution(const SdpProblem& p, const CanonicalSdp& canon,
                            const IpmResult<Real>& r, const SolverConfig& cfg) {
    SdpSolution sol;
    sol.status = r.status;
    sol.message = r.message;
    sol.iterate_log = r.log;
    sol.iterations = r.iterations;
    Real pobj = r.pobj, dobj = r.dobj;
    if (canon.negated) {
        pobj = -pobj;
        dobj = -dobj;
    }
    sol.objective = static_cast<Real256>(pobj);
    sol.dual_objective = static_cast<Real256>(dobj);
    sol.block_mats.clear();
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        Mat<Real256> Mb(p.blocks[b].size, p.blocks[b].size);
        for (size_t t = 0; t < Mb.a.size(); ++t) Mb.a[t] = static_cast<Real256>(r.X[b].a[t]);
        sol.block_mats.push_back(std::move(Mb));
    }
    sol.max_violation = max_violation(p, sol.block_mats);
    Real256 eigtol = Real256("1e-40");
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        if (p.blocks[b].kind == BlockKind::Diag) {
            Real256 mn = sol.block_mats[b](0, 0);
            for (int i = 1; i < sol.block_mats[b].rows; ++i)
                if (sol.block_mats[b](i, i) < mn) mn = sol.block_mats[b](i, i);
            sol.min_eigenvalue.push_back(mn);
        } else {
            Real256 scale = max_abs(sol.block_mats[b]);
            Real256 jt = scale > 0 ? scale * Real256("1e-50") : eigtol;
            sol.min_eigenvalue.push_back(min_eigenvalue(sol.block_mats[b], jt));
        }
    }
    (void)cfg;
    return sol;
}

}  // namespace detail

inline SdpSolution solve(const SdpProblem& p, const SolverConfig& cfg = {}) {
    if (p.constraints.empty())
        throw std::invalid_argument("solve: problem has no constraints");
    if (cfg.precision != 53 && cfg.precision != 113 && cfg.precision != 256)
        throw std::invalid_argument("solve: precision must be 53, 113 or 256");
    CanonicalSdp canon = canonicalize(p);
    if (cfg.precision == 53) {
        auto kd = detail::lower_problem<double>(canon);
        auto r = detail::ipm_solve<double>(kd, cfg);
        return detail::finish_solution(p, canon, r, cfg);
    }
    if (cfg.precision == 113) {
        auto kd = detail::lower_problem<Real113>(canon);
        auto r = detail::ipm_solve<Real113>(kd, cfg);
        return detail::finish_solution(p, canon, r, cfg);
    }
    auto kd = detail::lower_problem<Real256>(canon);
    auto r = detail::ipm_solve<Real256>(kd, cfg);
    return detail::finish_solution(p, canon, r, cfg);
}

// Analytic-centre style feasibility re-solve: tightens the objective to
// z_star + eta, shifts every block (slacks included) by a scalar theta and
// maximizes theta.  The returned matrices are strictly positive definite
// whenever the tightened system is strictly feasible.
inline SdpSolution feasibility_recentre(const SdpProblem& p, const Real256& z_star,
                                        const Real256& eta, const SolverConfig& cfg = {}) {
    CanonicalSdp canon = canonicalize(p);

    SdpProblem q;
    q.blocks = canon.blocks;
    int objslack = q.add_block("_objslack", 1, BlockKind::Diag);
    int theta_p = q.add_block("_theta_plus", 1, BlockKind::Psd);
    int theta_m = q.add_block("_theta_minus", 1, BlockKind::Psd);

    auto theta_augment = [&](Constraint& con) {
        Real256 tr = 0;
        for (auto& e : con.lhs.entries)
            if (e.i == e.j) tr += e.value;
        if (tr != 0) {
            con.lhs.entries.push_back(Entry{theta_p, 0, 0, tr});
            con.lhs.entries.push_back(Entry{theta_m, 0, 0, -tr});
        }
    };

    for (auto& c0 : canon.constraints) {
        Constraint con = c0;
        theta_augment(con);
        q.constraints.push_back(std::move(con));
    }
    {
        Constraint con;
        con.sense = Sense::EQ;
        Real256 z = canon.negated ? -z_star : z_star;
        con.rhs = z + eta;
        con.lhs.entries = canon.objective.entries;
        con.lhs.entries.push_back(Entry{objslack, 0, 0, Real256(1)});
        theta_augment(con);
        q.constraints.push_back(std::move(con));
    }
    q.sense = ObjSense::Maximize;
    q.objective.entries.push_back(Entry{theta_p, 0, 0, Real256(1)});
    q.objective.entries.push_back(Entry{theta_m, 0, 0, Real256(-1)});

    SdpSolution inner = solve(q, cfg);
    SdpSolution out;
    out.iterations = inner.iterations;
    out.iterate_log = inner.iterate_log;
    if (inner.status != SolveStatus::Optimal && inner.status != SolveStatus::Feasible) {
        out.status = SolveStatus::Failed;
        out.message = "recentre solve failed: " + inner.message;
        return out;
    }
    Real256 theta = inner.block_mats[theta_p](0, 0) - inner.block_mats[theta_m](0, 0);
    Real256 scale = Real256(1) + abs(z_star);
    if (theta <= 10 * cfg.effective_tolerance() * scale) {
        out.status = SolveStatus::Infeasible;
        out.message = "tightened system is not strictly feasible (eta too small)";
        return out;
    }

    out.status = SolveStatus::Feasible;
    out.message = "recentred; min block shift " + std::to_string(double(theta));
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        Mat<Real256> Mb = inner.block_mats[b];
        for (int i = 0; i < Mb.rows; ++i) Mb(i, i) += theta;
        out.block_mats.push_back(std::move(Mb));
    }
    out.objective = form_value(p.objective, out.block_mats);
    out.dual_objective = out.objective;
    out.max_violation = max_violation(p, out.block_mats);
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        if (p.blocks[b].kind == BlockKind::Diag) {
            Real256 mn = out.block_mats[b](0, 0);
            for (int i = 1; i < out.block_mats[b].rows; ++i)
                if (out.block_mats[b](i, i) < mn) mn = out.block_mats[b](i, i);
            out.min_eigenvalue.push_back(mn);
        } else {
            Real256 scale2 = max_abs(out.block_mats[b]);
            out.min_eigenvalue.push_back(
                min_eigenvalue(out.block_mats[b], scale2 > 0 ? scale2 * Real256("1e-50") : Real256("1e-50")));
        }
    }
    return out;
}

}  // namespace packbound
