#pragma once

#include "packbound/linalg.hpp"
#include "packbound/rationals.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace packbound {

enum class BlockKind { Psd, Diag };

struct Block {
    std::string name;
    int size = 0;
    BlockKind kind = BlockKind::Psd;
};

enum class Sense { EQ, LE, GE };
enum class ObjSense { Minimize, Maximize };

// One scalar coefficient of a constraint or objective functional.  Entries
// follow the SDPA convention: (i, j) with i <= j stands for the symmetric
// coefficient matrix with value at (i, j) and (j, i), so off-diagonal
// entries contribute 2 * value * X_ij to the functional.
struct Entry {
    int block = 0;
    int i = 0, j = 0;
    Real256 value;
};

struct LinearForm {
    std::vector<Entry> entries;
};

struct Constraint {
    Sense sense = Sense::EQ;
    Real256 rhs;
    LinearForm lhs;
};

// Accumulates full-matrix coefficient contributions and emits canonical
// upper-triangle entries; keeps factor-of-two bookkeeping in one place.
class SymAccumulator {
  public:
    void add(int block, int i, int j, const Real256& v) {
        if (v == 0) return;
        auto key = std::make_tuple(block, std::min(i, j), std::max(i, j));
        acc_[key] += v;
    }

    void emit(LinearForm& form) const {
        for (auto& [key, v] : acc_) {
            if (v == 0) continue;
            auto [b, i, j] = key;
            form.entries.push_back(Entry{b, i, j, i == j ? v : v / 2});
        }
    }

  private:
    std::map<std::tuple<int, int, int>, Real256> acc_;
};

struct SdpProblem {
    std::vector<Block> blocks;
    std::vector<Constraint> constraints;
    LinearForm objective;
    ObjSense sense = ObjSense::Minimize;

    int add_block(const std::string& name, int size, BlockKind kind) {
        blocks.push_back(Block{name, size, kind});
        return static_cast<int>(blocks.size()) - 1;
    }

    int block_index(const std::string& name) const {
        for (size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int num_constraints() const { return static_cast<int>(constraints.size()); }
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Failed };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        default: return "failed";
    }
}

struct SdpSolution {
    SolveStatus status = SolveStatus::Failed;
    std::vector<Mat<Real256>> block_mats;  // same order as problem blocks
    Real256 objective;
    Real256 dual_objective;
    Real256 max_violation;
    std::vector<Real256> min_eigenvalue;  // per block (reported, not certified)
    std::string message;
    std::vector<std::string> iterate_log;
    int iterations = 0;
};

inline Real256 form_value(const LinearForm& f, const std::vector<Mat<Real256>>& X) {
    Real256 acc = 0;
    for (auto& e : f.entries) {
        const Real256& x = X[e.block](e.i, e.j);
        acc += (e.i == e.j) ? e.value * x : 2 * e.value * x;
    }
    return acc;
}

// Maximum constraint violation of X against the problem's own senses.
inline Real256 max_violation(const SdpProblem& p, const std::vector<Mat<Real256>>& X) {
    using std::abs;
    Real256 worst = 0;
    for (auto& c : p.constraints) {
        Real256 v = form_value(c.lhs, X) - c.rhs;
        Real256 viol = 0;
        if (c.sense == Sense::EQ) viol = abs(v);
        else if (c.sense == Sense::LE) viol = v > 0 ? v : Real256(0);
        else viol = v < 0 ? -v : Real256(0);
        if (viol > worst) worst = viol;
    }
    return worst;
}

// Equality-only form: inequalities get one slot each in a shared diagonal
// slack block; objective is normalized to minimization.
struct CanonicalSdp {
    std::vector<Block> blocks;
    std::vector<Constraint> constraints;  // all EQ
    LinearForm objective;                 // minimize
    bool negated = false;
    int slack_block = -1;
    std::vector<int> slack_slot;  // per constraint, -1 when none
};

inline CanonicalSdp canonicalize(const SdpProblem& p) {
    CanonicalSdp c;
    c.blocks = p.blocks;
    c.negated = (p.sense == ObjSense::Maximize);
    c.objective = p.objective;
    if (c.negated)
        for (auto& e : c.objective.entries) e.value = -e.value;
    int n_ineq = 0;
    for (auto& con : p.constraints)
        if (con.sense != Sense::EQ) ++n_ineq;
    if (n_ineq > 0) {
        c.slack_block = static_cast<int>(c.blocks.size());
        c.blocks.push_back(Block{"_slack", n_ineq, BlockKind::Diag});
    }
    int slot = 0;
    c.slack_slot.assign(p.constraints.size(), -1);
    for (size_t k = 0; k < p.constraints.size(); ++k) {
        Constraint con = p.constraints[k];
        if (con.sense == Sense::LE) {
            con.lhs.entries.push_back(Entry{c.slack_block, slot, slot, Real256(1)});
            c.slack_slot[k] = slot++;
        } else if (con.sense == Sense::GE) {
            con.lhs.entries.push_back(Entry{c.slack_block, slot, slot, Real256(-1)});
            c.slack_slot[k] = slot++;
        }
        con.sense = Sense::EQ;
        c.constraints.push_back(std::move(con));
    }
    return c;
}

}  // namespace packbound
