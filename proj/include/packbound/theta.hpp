#pragma once

#include "packbound/interval.hpp"
#include "packbound/sdp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace packbound {

struct WeightedGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, no self-loops
    std::vector<Rat> weights;

    void validate() const {
        if (static_cast<int>(weights.size()) != n)
            throw std::invalid_argument("WeightedGraph: weight count mismatch");
        for (auto& w : weights)
            if (w < 0) throw std::invalid_argument("WeightedGraph: negative weight");
        for (auto& [u, v] : edges) {
            if (u == v) throw std::invalid_argument("WeightedGraph: self-loop");
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("WeightedGraph: vertex out of range");
        }
    }

    bool adjacent(int u, int v) const {
        auto a = std::minmax(u, v);
        for (auto& e : edges)
            if (e.first == a.first && e.second == a.second) return true;
        return false;
    }
};

// The theta-prime SDP:
//   min M  s.t.  K - w^{1/2} (w^{1/2})^T psd,  K(x,x) <= M,
//                K(x,y) <= 0 for non-adjacent x != y.
// Modeled over the shifted kernel G = K - w^{1/2}(w^{1/2})^T.
inline SdpProblem theta_prime_sdp(const WeightedGraph& g) {
    g.validate();
    SdpProblem p;
    int G = p.add_block("G", g.n, BlockKind::Psd);
    int Mb = p.add_block("M", 1, BlockKind::Psd);

    std::vector<Real256> sq(g.n);
    for (int i = 0; i < g.n; ++i) sq[i] = sqrt(to_real<Real256>(g.weights[i]));

    // K(x,x) = G(x,x) + w_x <= M
    for (int x = 0; x < g.n; ++x) {
        Constraint c;
        c.sense = Sense::LE;
        c.rhs = -to_real<Real256>(g.weights[x]);
        c.lhs.entries.push_back(Entry{G, x, x, Real256(1)});
        c.lhs.entries.push_back(Entry{Mb, 0, 0, Real256(-1)});
        p.constraints.push_back(std::move(c));
    }
    // K(x,y) = G(x,y) + sqrt(w_x w_y) <= 0 on non-edges
    for (int x = 0; x < g.n; ++x)
        for (int y = x + 1; y < g.n; ++y) {
            if (g.adjacent(x, y)) continue;
            Constraint c;
            c.sense = Sense::LE;
            c.rhs = -sq[x] * sq[y];
            c.lhs.entries.push_back(Entry{G, x, y, Real256(Rat(1, 2))});
            p.constraints.push_back(std::move(c));
        }
    p.objective.entries.push_back(Entry{Mb, 0, 0, Real256(1)});
    p.sense = ObjSense::Minimize;
    return p;
}

// Exact weighted independence number by branch and bound.
inline Rat alpha_bruteforce(const WeightedGraph& g) {
    g.validate();
    if (g.n > 25)
        throw std::invalid_argument("alpha_bruteforce: more than 25 vertices");
    std::vector<uint32_t> nbr(g.n, 0);
    for (auto& [u, v] : g.edges) {
        nbr[u] |= 1u << v;
        nbr[v] |= 1u << u;
    }
    // order vertices as given; prune on remaining weight
    std::vector<Rat> suffix(g.n + 1, Rat(0));
    for (int i = g.n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + g.weights[i];

    Rat best(0);
    struct Frame { int v; uint32_t banned; Rat acc; };
    std::vector<Frame> stack;
    stack.push_back({0, 0u, Rat(0)});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.v == g.n) {
            if (f.acc > best) best = f.acc;
            continue;
        }
        if (f.acc + suffix[f.v] <= best) continue;
        // take f.v when allowed
        if (!(f.banned & (1u << f.v)))
            stack.push_back({f.v + 1, f.banned | nbr[f.v], f.acc + g.weights[f.v]});
        // skip f.v
        stack.push_back({f.v + 1, f.banned, f.acc});
    }
    return best;
}

}  // namespace packbound
