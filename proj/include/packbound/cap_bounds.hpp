#pragma once

#include "packbound/orthopoly.hpp"
#include "packbound/sdp.hpp"
#include "packbound/solver.hpp"

#include <atomic>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace packbound {

// Spherical-cap packing instance on S^{n-1}: N cap angles (exact values
// q * pi^k) and the SOS half-degree d (polynomials up to degree 2d).
struct CapInstance {
    int n = 3;
    std::vector<ScaledRational> alphas;
    int d = 1;

    void validate() const {
        if (n < 2) throw std::invalid_argument("CapInstance: dimension must be >= 2");
        if (alphas.empty()) throw std::invalid_argument("CapInstance: need at least one angle");
        if (d < 1) throw std::invalid_argument("CapInstance: degree must be >= 1");
        for (auto& a : alphas) {
            RationalInterval enc = a.enclosure(64);
            if (!(enc.lo() > 0) || enc.hi() > Rat(33, 10))
                throw std::invalid_argument("CapInstance: angle out of (0, pi]");
        }
    }
};

struct CapSolutionView {
    int n = 0, d = 0;
    std::vector<Mat<Real256>> f;                    // (d2+1) matrices f_{ij,k}, k = 0..2d
    std::map<std::pair<int, int>, Mat<Real256>> Q;  // per pair i <= j
    std::map<std::pair<int, int>, Mat<Real256>> R;
    Real256 bound;
};

namespace detail {

inline std::string pair_suffix(int i, int j) {
    return std::to_string(i + 1) + std::to_string(j + 1);
}

}  // namespace detail

// Problem A: minimize max_i f_ii(1) subject to
//   (f_{ij,0} - w_i^{1/2} w_j^{1/2}) psd,   (f_{ij,k}) psd for k >= 1,
//   f_ij + <Q_ij, v0 v0^T> + <R_ij, (u+1)(cos(a_i+a_j) - u) v1 v1^T> = 0.
// Identities are checked coefficient-wise in the monomial basis.
inline SdpProblem build_cap_sdp(const CapInstance& inst) {
    inst.validate();
    const int N = static_cast<int>(inst.alphas.size());
    const int d2 = 2 * inst.d;
    const Real256 pi = pi_real256();

    std::vector<Real256> alpha(N), w(N), sqw(N);
    for (int i = 0; i < N; ++i) {
        alpha[i] = inst.alphas[i].value(pi);
        w[i] = cap_weight(inst.n, alpha[i], pi);
        sqw[i] = sqrt(w[i]);
    }

    std::vector<Poly<Real256>> P;  // normalized Jacobi, degrees 0..2d
    for (int k = 0; k <= d2; ++k)
        P.push_back(poly_map<Rat, Real256>(jacobi(inst.n, k),
                                           [](const Rat& q) { return to_real<Real256>(q); }));

    SdpProblem p;
    std::vector<int> Fk(d2 + 1);
    for (int k = 0; k <= d2; ++k) Fk[k] = p.add_block("F" + std::to_string(k), N, BlockKind::Psd);
    int F0s = p.add_block("F0s", N, BlockKind::Psd);
    std::map<std::pair<int, int>, int> Qb, Rb;
    std::map<std::pair<int, int>, Real256> cosab;
    std::map<std::pair<int, int>, bool> point_pair;  // angle sum exactly pi
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            // When the angle sum is exactly pi the forbidden interval is the
            // single point {-1}: impose f_ij(-1) <= 0 directly instead of a
            // degenerate Lukacs witness.
            bool exact_pi = inst.alphas[i].pi_power == 1 && inst.alphas[j].pi_power == 1 &&
                            inst.alphas[i].q + inst.alphas[j].q == 1;
            point_pair[{i, j}] = exact_pi;
            if (exact_pi) continue;
            Real256 c = cos(alpha[i] + alpha[j]);
            cosab[{i, j}] = c;
            if (c <= -1) continue;  // empty forbidden interval: condition (iii) vacuous
            Qb[{i, j}] = p.add_block("Q" + detail::pair_suffix(i, j), inst.d + 1, BlockKind::Psd);
            Rb[{i, j}] = p.add_block("R" + detail::pair_suffix(i, j), inst.d, BlockKind::Psd);
        }
    int Mb = p.add_block("M", 1, BlockKind::Psd);

    // shifted-block couplings F0s_ij = f_{ij,0} - sqw_i sqw_j
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            Constraint con;
            con.sense = Sense::EQ;
            con.rhs = -sqw[i] * sqw[j];
            SymAccumulator acc;
            acc.add(F0s, i, j, Real256(1));
            acc.add(Fk[0], i, j, Real256(-1));
            acc.emit(con.lhs);
            p.constraints.push_back(std::move(con));
        }

    // point constraints for exact-pi angle sums: f_ij(-1) <= 0
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            if (!point_pair[{i, j}]) continue;
            Constraint con;
            con.sense = Sense::LE;
            con.rhs = 0;
            SymAccumulator acc;
            for (int k = 0; k <= d2; ++k) {
                Real256 pk = P[k].eval(Real256(-1));
                if (pk != 0) acc.add(Fk[k], i, j, pk);
            }
            acc.emit(con.lhs);
            p.constraints.push_back(std::move(con));
        }

    // polynomial identities, one equality per monomial power
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            if (point_pair[{i, j}]) continue;
            auto qit = Qb.find({i, j});
            if (qit == Qb.end()) continue;
            const Real256 c = cosab[{i, j}];
            // weight g(u) = (u+1)(c-u) = c + (c-1) u - u^2
            const Real256 g0 = c, g1 = c - 1, g2 = -1;
            for (int t = 0; t <= d2; ++t) {
                Constraint con;
                con.sense = Sense::EQ;
                con.rhs = 0;
                SymAccumulator acc;
                for (int k = 0; k <= d2; ++k) {
                    Real256 ck = (t < static_cast<int>(P[k].c.size())) ? P[k].c[t] : Real256(0);
                    if (ck != 0) acc.add(Fk[k], i, j, ck);
                }
                // <Q, v0 v0^T>: monomial u^{a+b}
                for (int a = 0; a <= inst.d; ++a)
                    for (int b = 0; b <= inst.d; ++b)
                        if (a + b == t) acc.add(qit->second, a, b, Real256(1));
                // <R, g(u) v1 v1^T>
                int rblk = Rb[{i, j}];
                for (int a = 0; a < inst.d; ++a)
                    for (int b = 0; b < inst.d; ++b) {
                        int rem = t - a - b;
                        Real256 gc = rem == 0 ? g0 : rem == 1 ? g1 : rem == 2 ? g2 : Real256(0);
                        if (gc != 0) acc.add(rblk, a, b, gc);
                    }
                acc.emit(con.lhs);
                p.constraints.push_back(std::move(con));
            }
        }

    // epigraph: M >= sum_k f_{ii,k} = f_ii(1)
    for (int i = 0; i < N; ++i) {
        Constraint con;
        con.sense = Sense::GE;
        con.rhs = 0;
        SymAccumulator acc;
        acc.add(Mb, 0, 0, Real256(1));
        for (int k = 0; k <= d2; ++k) acc.add(Fk[k], i, i, Real256(-1));
        acc.emit(con.lhs);
        p.constraints.push_back(std::move(con));
    }

    p.objective.entries.push_back(Entry{Mb, 0, 0, Real256(1)});
    p.sense = ObjSense::Minimize;
    return p;
}

inline CapSolutionView cap_view(const CapInstance& inst, const SdpProblem& p, const SdpSolution& sol) {
    CapSolutionView v;
    v.n = inst.n;
    v.d = inst.d;
    const int N = static_cast<int>(inst.alphas.size());
    for (int k = 0; k <= 2 * inst.d; ++k)
        v.f.push_back(sol.block_mats[p.block_index("F" + std::to_string(k))]);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            int qb = p.block_index("Q" + detail::pair_suffix(i, j));
            if (qb >= 0) {
                v.Q[{i, j}] = sol.block_mats[qb];
                v.R[{i, j}] = sol.block_mats[p.block_index("R" + detail::pair_suffix(i, j))];
            }
        }
    v.bound = sol.objective;
    return v;
}

struct CapBoundResult {
    Real256 bound;
    SolveStatus status = SolveStatus::Failed;
    CapSolutionView view;
    SdpSolution solution;
};

// End-to-end: build, solve, report.  A merely feasible solve still yields a
// valid bound and is reported with its status.
inline CapBoundResult cap_bound(const CapInstance& inst, const SolverConfig& cfg = {}) {
    SdpProblem p = build_cap_sdp(inst);
    SdpSolution sol = solve(p, cfg);
    if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Feasible)
        throw std::runtime_error("cap_bound: solver failed: " + sol.message);
    CapBoundResult r;
    r.bound = sol.objective;
    r.status = sol.status;
    r.view = cap_view(inst, p, sol);
    r.solution = std::move(sol);
    return r;
}

// Reconstructs f_ij(u) from a solved view and reports its maximum over a
// grid of the forbidden interval [-1, cos(a_i + a_j)] (validity audit).
inline Real256 cap_forbidden_max(const CapInstance& inst, const CapSolutionView& v, int i, int j,
                                 int grid_points = 1000) {
    const Real256 pi = pi_real256();
    Real256 c = cos(inst.alphas[i].value(pi) + inst.alphas[j].value(pi));
    if (c < -1) c = -1;
    std::vector<Poly<Real256>> P;
    for (int k = 0; k <= 2 * inst.d; ++k)
        P.push_back(poly_map<Rat, Real256>(jacobi(inst.n, k),
                                           [](const Rat& q) { return to_real<Real256>(q); }));
    Real256 worst = -1000;
    for (int s = 0; s <= grid_points; ++s) {
        Real256 u = Real256(-1) + (c + 1) * Real256(s) / grid_points;
        Real256 val = 0;
        for (int k = 0; k <= 2 * inst.d; ++k) val += v.f[k](i, j) * P[k].eval(u);
        if (val > worst) worst = val;
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Geometric comparisons for n = 3

// Cap angles and density of the k-prism packing: k incircles of the square
// faces (angle pi/k) and 2 incircles of the k-gon faces (angle pi/2 - pi/k).
struct PrismDensity {
    ScaledRational alpha_small, alpha_big;
    Real256 density;
};

inline PrismDensity prism_density(int k) {
    if (k < 3) throw std::domain_error("prism_density: k must be >= 3");
    PrismDensity r;
    r.alpha_small = ScaledRational(Rat(1, k), 1);
    r.alpha_big = ScaledRational(Rat(k - 2, 2 * k), 1);
    const Real256 pi = pi_real256();
    r.density = Real256(k) * cap_weight(3, r.alpha_small.value(pi), pi) +
                2 * cap_weight(3, r.alpha_big.value(pi), pi);
    return r;
}

// Florian's geometric bound for n = 3: the worst covered-area fraction
// D(a_i, a_j, a_k) over the spherical triangle whose vertices carry caps
// that pairwise touch.  Vertex angle A at the cap with angle a_i faces side
// a_j + a_k; the covered fraction is
//   D = [A (1-cos a_i) + B (1-cos a_j) + C (1-cos a_k)] / (A + B + C - pi),
// a cap sector of area A(1-cos a) against the spherical excess.
inline Real256 florian_cap_bound(const std::vector<ScaledRational>& alphas) {
    if (alphas.empty()) throw std::invalid_argument("florian_cap_bound: no angles");
    const Real256 pi = pi_real256();
    std::vector<Real256> a(alphas.size());
    for (size_t i = 0; i < alphas.size(); ++i) {
        a[i] = alphas[i].value(pi);
        if (!(a[i] > 0) || a[i] > pi / 3 + Real256("1e-70"))
            throw std::domain_error("florian_cap_bound: angles must lie in (0, pi/3]");
    }
    Real256 best = 0;
    const int N = static_cast<int>(a.size());
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j)
            for (int k = j; k < N; ++k) {
                Real256 sa = a[j] + a[k], sb = a[i] + a[k], sc = a[i] + a[j];
                auto vertex_angle = [](const Real256& opp, const Real256& x, const Real256& y) {
                    return acos((cos(opp) - cos(x) * cos(y)) / (sin(x) * sin(y)));
                };
                Real256 A = vertex_angle(sa, sb, sc);
                Real256 B = vertex_angle(sb, sa, sc);
                Real256 C = vertex_angle(sc, sa, sb);
                Real256 excess = A + B + C - pi;
                if (!(excess > 0))
                    throw std::domain_error("florian_cap_bound: degenerate spherical triangle");
                Real256 covered =
                    A * (1 - cos(a[i])) + B * (1 - cos(a[j])) + C * (1 - cos(a[k]));
                Real256 D = covered / excess;
                if (D > best) best = D;
            }
    return best;
}

// ---------------------------------------------------------------------------
// Sturm sequences (rational arithmetic) for one-sided sign verification

namespace detail {

inline std::vector<Poly<Rat>> sturm_chain(const Poly<Rat>& f) {
    std::vector<Poly<Rat>> chain;
    chain.push_back(f);
    chain.push_back(f.derivative());
    while (!chain.back().is_zero() && chain.back().degree_index() > 0) {
        // next = -rem(chain[k-1], chain[k])
        Poly<Rat> a = chain[chain.size() - 2];
        const Poly<Rat>& b = chain.back();
        while (!a.is_zero() && a.degree_index() >= b.degree_index()) {
            Rat lead = a.c.back() / b.c.back();
            size_t shift = a.c.size() - b.c.size();
            Poly<Rat> sub = b.shifted_up(shift).scaled(lead);
            a -= sub;
        }
        if (a.is_zero()) break;
        chain.push_back(-a);
    }
    return chain;
}

inline int sturm_sign_changes(const std::vector<Poly<Rat>>& chain, const Rat& x) {
    int changes = 0, prev = 0;
    for (auto& p : chain) {
        Rat v = p.eval(x);
        int s = v > 0 ? 1 : v < 0 ? -1 : 0;
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

inline int sturm_count_roots(const std::vector<Poly<Rat>>& chain, const Rat& a, const Rat& b) {
    return sturm_sign_changes(chain, a) - sturm_sign_changes(chain, b);
}

// Certified upper bound for max of f over [a, b]: isolates the critical
// points with a Sturm chain of f', then evaluates f by interval Horner on
// each isolating interval and at the endpoints.
inline Rat poly_max_upper_bound(const Poly<Rat>& f, const Rat& a, const Rat& b, unsigned bits = 64) {
    Rat best = std::max(f.eval(a), f.eval(b));
    Poly<Rat> fp = f.derivative();
    if (fp.is_zero()) return best;
    auto chain = sturm_chain(fp);
    struct Seg { Rat lo, hi; };
    std::vector<Seg> work{{a, b}};
    Rat min_width = (b - a) / Rat(pow2(bits > 80 ? 80 : bits));
    std::vector<Seg> isolated;
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        int roots = sturm_count_roots(chain, s.lo, s.hi);
        if (roots == 0) continue;
        if ((roots == 1 && s.hi - s.lo <= min_width * 16) || s.hi - s.lo <= min_width) {
            isolated.push_back(s);
            continue;
        }
        Rat mid = (s.lo + s.hi) / 2;
        work.push_back({s.lo, mid});
        work.push_back({mid, s.hi});
    }
    for (auto& s : isolated) {
        // interval Horner over [lo, hi]
        RationalInterval x(s.lo, s.hi), acc;
        for (size_t i = f.c.size(); i-- > 0;) acc = acc * x + RationalInterval(f.c[i]);
        if (acc.hi() > best) best = acc.hi();
    }
    return best;
}

}  // namespace detail

// Report of the 5-prism sharpness verification: each Theorem-2 condition
// with its margin, plus the certified bound value f_11(1).
struct Prism5Certificate {
    CapSolutionView view;
    Real256 bound;                 // f_11(1)
    Real256 min_psd_eigenvalue;    // over (f_{ij,k}) k>=1 and the shifted k=0 block
    Rat max_sign_violation;        // certified max of f_ij over forbidden intervals
    std::vector<std::string> failures;
    int kernel_dimension = 0;
    bool ok() const { return failures.empty(); }
};

// Assembles and solves the complementary-slackness linear system of the
// 5-prism configuration (n = 3, d = 2, angles pi/5 and 3pi/10), selects the
// point of its one-dimensional solution family with the best positivity
// margin, and verifies every Theorem-2 condition: eigenvalue checks for the
// coefficient matrices, Sturm-based sign bounds on the forbidden intervals.
inline Prism5Certificate prism5_sharpness_certificate() {
    const Real256 pi = pi_real256();
    const int d2 = 4;

    std::vector<Poly<Rat>> Pq = jacobi_basis(3, d2);
    std::vector<Poly<Real256>> P;
    for (auto& q : Pq)
        P.push_back(poly_map<Rat, Real256>(q, [](const Rat& c) { return to_real<Real256>(c); }));
    std::vector<Poly<Real256>> Pd;
    for (auto& q : Pq)
        Pd.push_back(poly_map<Rat, Real256>(q.derivative(),
                                            [](const Rat& c) { return to_real<Real256>(c); }));

    Real256 c2 = cos(2 * pi / 5), c4 = cos(4 * pi / 5);
    Real256 w1 = cap_weight(3, pi / 5, pi), w2 = cap_weight(3, 3 * pi / 10, pi);
    Real256 s12 = sqrt(w1 * w2);

    // unknowns: f11_k, f12_k, f22_k for k = 0..4
    auto idx = [&](int pair, int k) { return pair * 5 + k; };  // pair: 0=11, 1=12, 2=22
    std::vector<std::vector<Real256>> rows;
    std::vector<Real256> rhs;
    auto add_eval_row = [&](int pair, const std::vector<Poly<Real256>>& basis, const Real256& x,
                            const Real256& r) {
        std::vector<Real256> row(15, Real256(0));
        for (int k = 0; k <= d2; ++k) row[idx(pair, k)] = basis[k].eval(x);
        rows.push_back(std::move(row));
        rhs.push_back(r);
    };

    // slackness conditions; the derivative vanishes at the interior double
    // root cos(4 pi/5) (the touching distance cos(2 pi/5) is the endpoint of
    // the forbidden interval, where a simple root suffices)
    add_eval_row(0, P, c2, Real256(0));
    add_eval_row(0, P, c4, Real256(0));
    add_eval_row(0, Pd, c4, Real256(0));
    add_eval_row(1, P, Real256(0), Real256(0));
    add_eval_row(2, P, Real256(-1), Real256(0));
    // extra pinning
    add_eval_row(0, P, Real256(-1), Real256(0));
    add_eval_row(1, P, Real256(Rat(-95, 100)), Real256(0));
    add_eval_row(1, Pd, Real256(Rat(-95, 100)), Real256(0));

    // k = 0 matrix product condition  (f_ij,0) * W = G
    {
        Real256 W11 = 25 * w1, W12 = 10 * s12, W22 = 4 * w2;
        Real256 G11 = 25 * w1 * w1 + 10 * w1 * w2;
        Real256 G12 = s12 * (10 * w1 + 4 * w2);
        Real256 G21 = s12 * (25 * w1 + 10 * w2);
        Real256 G22 = 10 * w1 * w2 + 4 * w2 * w2;
        auto row = [&](int pa, Real256 ca, int pb, Real256 cb, Real256 r) {
            std::vector<Real256> rr(15, Real256(0));
            rr[idx(pa, 0)] = ca;
            rr[idx(pb, 0)] = cb;
            rows.push_back(std::move(rr));
            rhs.push_back(r);
        };
        row(0, W11, 1, W12, G11);  // f11 W11 + f12 W12 = G11
        row(0, W12, 1, W22, G12);
        row(1, W11, 2, W12, G21);
        row(1, W12, 2, W22, G22);
    }
    // k = 1..4 product conditions  (f_ij,k) * B_k = 0
    for (int k = 1; k <= d2; ++k) {
        Real256 B11 = w1 * (5 * P[k].eval(Real256(1)) + 10 * P[k].eval(c2) + 10 * P[k].eval(c4));
        Real256 B12 = s12 * 10 * P[k].eval(Real256(0));
        Real256 B22 = w2 * (2 * P[k].eval(Real256(1)) + 2 * P[k].eval(Real256(-1)));
        auto row = [&](int pa, Real256 ca, int pb, Real256 cb) {
            std::vector<Real256> rr(15, Real256(0));
            rr[idx(pa, k)] = ca;
            rr[idx(pb, k)] = cb;
            rows.push_back(std::move(rr));
            rhs.push_back(Real256(0));
        };
        row(0, B11, 1, B12);
        row(0, B12, 1, B22);
        row(1, B11, 2, B12);
        row(1, B12, 2, B22);
    }

    Mat<Real256> A(static_cast<int>(rows.size()), 15);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < 15; ++j) A(static_cast<int>(i), j) = rows[i][j];
    AffineSolution<Real256> aff = gauss_affine_solve(A, rhs, Real256("1e-55"));

    Prism5Certificate cert;
    cert.kernel_dimension = static_cast<int>(aff.kernel.size());
    if (aff.kernel.size() == 1) {
        Real256 mx = 0;
        for (auto& v : aff.kernel[0])
            if (abs(v) > mx) mx = abs(v);
        if (mx > 0)
            for (auto& v : aff.kernel[0]) v /= mx;
    }
    if (!aff.consistent) cert.failures.push_back("linear system inconsistent");
    if (aff.kernel.size() != 1)
        cert.failures.push_back("solution space dimension " + std::to_string(aff.kernel.size()) +
                                ", expected 1");

    // margin(t) = min eigenvalue over the 2x2 condition matrices along the
    // affine solution line; concave in t, maximized by golden section
    auto matrices_at = [&](const Real256& t) {
        std::vector<Mat<Real256>> mats;  // k=0 shifted, then k=1..4
        for (int k = 0; k <= d2; ++k) {
            Mat<Real256> F(2, 2);
            auto get = [&](int pair, int kk) {
                Real256 v = aff.particular[idx(pair, kk)];
                if (!aff.kernel.empty()) v += t * aff.kernel[0][idx(pair, kk)];
                return v;
            };
            F(0, 0) = get(0, k);
            F(0, 1) = F(1, 0) = get(1, k);
            F(1, 1) = get(2, k);
            if (k == 0) {
                F(0, 0) -= w1;
                F(0, 1) -= s12;
                F(1, 0) -= s12;
                F(1, 1) -= w2;
            }
            mats.push_back(std::move(F));
        }
        return mats;
    };
    Real256 c35 = cos(3 * pi / 5);
    auto margin = [&](const Real256& t) {
        Real256 m = 1000;
        for (auto& F : matrices_at(t)) {
            // 2x2 min eigenvalue in closed form
            Real256 tr = F(0, 0) + F(1, 1);
            Real256 det = F(0, 0) * F(1, 1) - F(0, 1) * F(0, 1);
            Real256 disc = sqrt(tr * tr - 4 * det >= 0 ? tr * tr - 4 * det : Real256(0));
            Real256 lmin = (tr - disc) / 2;
            if (lmin < m) m = lmin;
        }
        // sign conditions -f_ij >= 0 on the forbidden intervals join the
        // min (also concave in t)
        auto scan = [&](int pair, const Real256& hi) {
            for (int s = 0; s <= 240; ++s) {
                Real256 u = Real256(-1) + (hi + 1) * Real256(s) / 240;
                Real256 fu = 0;
                for (int k = 0; k <= d2; ++k) {
                    Real256 coef = aff.particular[idx(pair, k)];
                    if (!aff.kernel.empty()) coef += t * aff.kernel[0][idx(pair, k)];
                    fu += coef * P[k].eval(u);
                }
                if (-fu < m) m = -fu;
            }
        };
        scan(0, c2);
        scan(1, Real256(0));
        scan(2, c35);
        return m;
    };

    Real256 best_t = 0;
    if (!aff.kernel.empty()) {
        Real256 lo = -4, hi = 4, gr = (sqrt(Real256(5)) - 1) / 2;
        // coarse scan for a bracket
        Real256 best_v = margin(Real256(0));
        for (int s = -400; s <= 400; ++s) {
            Real256 t = Real256(s) / 10;
            Real256 v = margin(t);
            if (v > best_v) { best_v = v; best_t = t; }
        }
        lo = best_t - Real256(Rat(1, 2));
        hi = best_t + Real256(Rat(1, 2));
        Real256 x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        Real256 f1 = margin(x1), f2 = margin(x2);
        for (int it = 0; it < 300; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo); f2 = margin(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo); f1 = margin(x1);
            }
        }
        best_t = (lo + hi) / 2;
    }

    auto mats = matrices_at(best_t);
    cert.min_psd_eigenvalue = margin(best_t);
    if (cert.min_psd_eigenvalue < -Real256("1e-55"))
        cert.failures.push_back("a coefficient matrix is not positive semidefinite");

    // assemble the view and the polynomials
    CapSolutionView view;
    view.n = 3;
    view.d = 2;
    for (int k = 0; k <= d2; ++k) {
        Mat<Real256> F(2, 2);
        F = mats[k];
        if (k == 0) {  // undo the shift for the raw f matrices
            F(0, 0) += w1;
            F(0, 1) += s12;
            F(1, 0) += s12;
            F(1, 1) += w2;
        }
        view.f.push_back(F);
    }
    Poly<Rat> f11(PolyVar::X), f12(PolyVar::X), f22(PolyVar::X);
    for (int k = 0; k <= d2; ++k) {
        f11 += Pq[k].scaled(to_rational_exact(view.f[k](0, 0)));
        f12 += Pq[k].scaled(to_rational_exact(view.f[k](0, 1)));
        f22 += Pq[k].scaled(to_rational_exact(view.f[k](1, 1)));
    }
    view.bound = f11.eval(Rat(1)) > f22.eval(Rat(1)) ? to_real<Real256>(f11.eval(Rat(1)))
                                                     : to_real<Real256>(f22.eval(Rat(1)));
    cert.bound = to_real<Real256>(f11.eval(Rat(1)));
    cert.view = view;

    // sign conditions on the forbidden intervals via Sturm-certified maxima;
    // the rationalized coefficients leave room at the touching roots, so the
    // certified maximum is compared against a 2^-60 tolerance.
    const Rat tau(Int(1), pow2(60));
    RationalInterval c2enc = cos_enclosure(Rat(2, 5) * pi_enclosure(256), 200);
    RationalInterval c35enc = cos_enclosure(Rat(3, 5) * pi_enclosure(256), 200);  // cos(2*alpha2)
    Rat m11 = detail::poly_max_upper_bound(f11, Rat(-1), c2enc.hi());
    Rat m12 = detail::poly_max_upper_bound(f12, Rat(-1), Rat(0));
    Rat m22 = detail::poly_max_upper_bound(f22, Rat(-1), c35enc.hi());
    cert.max_sign_violation = std::max(m11, std::max(m12, m22));
    if (cert.max_sign_violation > tau)
        cert.failures.push_back("sign condition violated on a forbidden interval");
    return cert;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace detail {

inline std::string format_sig12(const Real256& v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

// Runs jobs in parallel, writes results in input order.
inline std::vector<std::string> ordered_parallel(size_t count, int jobs,
                                                 const std::function<std::string(size_t)>& work) {
    std::vector<std::string> out(count);
    if (jobs <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = work(i);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= count) return;
                out[i] = work(i);
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace detail

// CSV sweep over (alpha1, alpha2) grid points; per-point failures land in
// the status column and the run continues.
inline void sweep_caps(int n, const std::vector<std::pair<ScaledRational, ScaledRational>>& grid,
                       int d, const SolverConfig& cfg, std::ostream& out, int jobs = 1) {
    if (grid.empty()) throw std::invalid_argument("sweep_caps: empty grid");
    const Real256 pi = pi_real256();
    auto work = [&](size_t g) -> std::string {
        const auto& [a1, a2] = grid[g];
        std::ostringstream row;
        row << detail::format_sig12(a1.value(pi)) << ',' << detail::format_sig12(a2.value(pi)) << ',';
        try {
            CapInstance inst{n, {a1, a2}, d};
            CapBoundResult r = cap_bound(inst, cfg);
            row << detail::format_sig12(r.bound) << ',';
            bool florian_ok = n == 3 && a1.value(pi) <= pi / 3 && a2.value(pi) <= pi / 3;
            if (florian_ok)
                row << detail::format_sig12(florian_cap_bound({a1, a2}));
            row << ',' << to_string(r.status);
        } catch (const std::exception& e) {
            row << ",," << "failed: " << e.what();
        }
        return row.str();
    };
    auto rows = detail::ordered_parallel(grid.size(), jobs, work);
    out << "alpha1,alpha2,sdp_bound,geometric_bound,status\n";
    for (auto& r : rows) out << r << "\n";
}

}  // namespace packbound
