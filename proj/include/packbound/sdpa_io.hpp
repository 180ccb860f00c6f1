#pragma once

#include "packbound/sdp.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace packbound {

namespace detail {

inline std::string format_30(const Real256& v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(29) << v;
    return os.str();
}

}  // namespace detail

// SDPA sparse export (.dat-s).  The file always carries the canonical
// minimization equality form: inequalities are converted to equalities with
// diagonal slack slots first.  Layout: mDIM / nBLOCK / block sizes (diagonal
// blocks negative) / right-hand sides / one "matno blkno i j value" line per
// nonzero with matno 0 the objective, 1-based indices, i <= j, 30
// significant digits.  Entry order is canonical (matno, blkno, i, j), so a
// re-exported import is byte-identical.
inline void export_sdpa(const SdpProblem& p, std::ostream& out) {
    CanonicalSdp c = canonicalize(p);
    out << c.constraints.size() << "\n";
    out << c.blocks.size() << "\n";
    for (size_t b = 0; b < c.blocks.size(); ++b) {
        if (b) out << ' ';
        int s = c.blocks[b].size;
        out << (c.blocks[b].kind == BlockKind::Diag ? -s : s);
    }
    out << "\n";
    for (size_t i = 0; i < c.constraints.size(); ++i) {
        if (i) out << ' ';
        out << detail::format_30(c.constraints[i].rhs);
    }
    out << "\n";

    struct Line {
        int matno, blkno, i, j;
        Real256 v;
    };
    std::vector<Line> lines;
    auto add_form = [&lines](int matno, const LinearForm& f) {
        for (auto& e : f.entries)
            if (e.value != 0)
                lines.push_back({matno, e.block + 1, e.i + 1, e.j + 1, e.value});
    };
    add_form(0, c.objective);
    for (size_t i = 0; i < c.constraints.size(); ++i)
        add_form(static_cast<int>(i) + 1, c.constraints[i].lhs);
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return std::tie(a.matno, a.blkno, a.i, a.j) < std::tie(b.matno, b.blkno, b.i, b.j);
    });
    for (auto& l : lines)
        out << l.matno << ' ' << l.blkno << ' ' << l.i << ' ' << l.j << ' '
            << detail::format_30(l.v) << "\n";
    if (!out) throw std::runtime_error("export_sdpa: write failure");
}

namespace detail {

struct LineReader {
    std::istream& in;
    int lineno = 0;
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (line[0] == '*' || line[0] == '"') continue;  // comments
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("sdpa parse error at line " + std::to_string(lineno) + ": " + what);
    }
};

}  // namespace detail

// Reads a .dat-s file back into the equality-form problem it encodes.
inline SdpProblem import_sdpa(std::istream& in) {
    detail::LineReader rd{in};
    std::string line;
    if (!rd.next(line)) rd.fail("missing mDIM");
    int mdim = 0, nblock = 0;
    {
        std::istringstream is(line);
        if (!(is >> mdim) || mdim < 0) rd.fail("bad mDIM");
    }
    if (!rd.next(line)) rd.fail("missing nBLOCK");
    {
        std::istringstream is(line);
        if (!(is >> nblock) || nblock <= 0) rd.fail("bad nBLOCK");
    }
    if (!rd.next(line)) rd.fail("missing block structure");
    SdpProblem p;
    {
        std::istringstream is(line);
        for (int b = 0; b < nblock; ++b) {
            long s;
            if (!(is >> s) || s == 0) rd.fail("bad block size");
            p.add_block("blk" + std::to_string(b + 1), static_cast<int>(s < 0 ? -s : s),
                        s < 0 ? BlockKind::Diag : BlockKind::Psd);
        }
    }
    if (!rd.next(line)) rd.fail("missing right-hand sides");
    {
        std::istringstream is(line);
        for (int i = 0; i < mdim; ++i) {
            std::string tok;
            if (!(is >> tok)) rd.fail("missing right-hand side value");
            Constraint c;
            c.sense = Sense::EQ;
            c.rhs = Real256(tok);
            p.constraints.push_back(std::move(c));
        }
    }
    while (rd.next(line)) {
        std::istringstream is(line);
        int matno, blkno, i, j;
        std::string tok;
        if (!(is >> matno >> blkno >> i >> j >> tok)) rd.fail("bad entry line");
        if (matno < 0 || matno > mdim) rd.fail("matno out of range");
        if (blkno < 1 || blkno > nblock) rd.fail("blkno out of range");
        int size = p.blocks[blkno - 1].size;
        if (i < 1 || j < i || j > size) rd.fail("entry indices out of range");
        Entry e{blkno - 1, i - 1, j - 1, Real256(tok)};
        if (matno == 0)
            p.objective.entries.push_back(e);
        else
            p.constraints[matno - 1].lhs.entries.push_back(e);
    }
    p.sense = ObjSense::Minimize;
    return p;
}

// Writes a solution in the SDPA output style consumed by import_solution:
// objective lines plus a brace-delimited yMat section holding the primal
// block matrices of the exported (canonical) problem.
inline void export_solution(const SdpProblem& p, const SdpSolution& sol, std::ostream& out) {
    CanonicalSdp c = canonicalize(p);
    out << "objValPrimal = " << detail::format_30(sol.objective) << "\n";
    out << "objValDual = " << detail::format_30(sol.dual_objective) << "\n";
    out << "yMat = {\n";
    for (size_t b = 0; b < c.blocks.size(); ++b) {
        const Block& blk = c.blocks[b];
        Mat<Real256> Mb(blk.size, blk.size);
        if (b < p.blocks.size()) {
            Mb = sol.block_mats[b];
        } else {
            // slack block: recompute slot values from the constraints
            for (size_t k = 0; k < p.constraints.size(); ++k) {
                int slot = c.slack_slot[k];
                if (slot < 0) continue;
                Real256 lhs = form_value(p.constraints[k].lhs, sol.block_mats);
                Real256 rhs = p.constraints[k].rhs;
                Mb(slot, slot) = (p.constraints[k].sense == Sense::LE) ? rhs - lhs : lhs - rhs;
            }
        }
        if (blk.kind == BlockKind::Diag) {
            out << "{ ";
            for (int i = 0; i < blk.size; ++i)
                out << detail::format_30(Mb(i, i)) << (i + 1 < blk.size ? ", " : " ");
            out << "}\n";
        } else {
            out << "{ ";
            for (int i = 0; i < blk.size; ++i) {
                out << "{ ";
                for (int j = 0; j < blk.size; ++j)
                    out << detail::format_30(Mb(i, j)) << (j + 1 < blk.size ? ", " : " ");
                out << (i + 1 < blk.size ? "}, " : "} ");
            }
            out << "}\n";
        }
    }
    out << "}\n";
}

// Parses the primal block matrices (yMat section under our export
// convention) from an SDPA-family output file and fills the violation and
// eigenvalue reports.
inline SdpSolution import_solution(std::istream& in, const SdpProblem& p) {
    CanonicalSdp c = canonicalize(p);
    std::string content, line;
    std::vector<size_t> line_starts;
    int lineno = 0;
    {
        std::ostringstream all;
        while (std::getline(in, line)) {
            all << line << "\n";
            ++lineno;
        }
        content = all.str();
    }
    if (content.empty())
        throw std::runtime_error("solution parse error at line 0: empty file");

    auto line_of = [&](size_t pos) {
        int ln = 1;
        for (size_t i = 0; i < pos && i < content.size(); ++i)
            if (content[i] == '\n') ++ln;
        return ln;
    };

    auto find_section = [&](const std::string& name) -> size_t {
        size_t pos = content.find(name + " = ");
        if (pos == std::string::npos) pos = content.find(name + " =");
        if (pos == std::string::npos) pos = content.find(name + "=");
        return pos;
    };

    SdpSolution sol;
    size_t ypos = find_section("yMat");
    if (ypos == std::string::npos)
        throw std::runtime_error("solution parse error: no yMat section found");

    // tokenize numbers and braces from the yMat section onward
    size_t i = content.find('{', ypos);
    if (i == std::string::npos)
        throw std::runtime_error("solution parse error at line " + std::to_string(line_of(ypos)) +
                                 ": yMat has no opening brace");
    int depth = 0;
    std::vector<Real256> numbers;
    std::vector<int> depths;
    size_t end = i;
    for (; end < content.size(); ++end) {
        char ch = content[end];
        if (ch == '{') { ++depth; continue; }
        if (ch == '}') {
            --depth;
            if (depth == 0) break;
            continue;
        }
        if ((ch >= '0' && ch <= '9') || ch == '-' || ch == '+' || ch == '.') {
            size_t j = end;
            while (j < content.size() && (isdigit(static_cast<unsigned char>(content[j])) ||
                                          content[j] == '-' || content[j] == '+' || content[j] == '.' ||
                                          content[j] == 'e' || content[j] == 'E'))
                ++j;
            numbers.emplace_back(content.substr(end, j - end));
            depths.push_back(depth);
            end = j - 1;
        }
    }
    if (depth != 0)
        throw std::runtime_error("solution parse error at line " + std::to_string(line_of(end >= content.size() ? content.size() - 1 : end)) +
                                 ": unbalanced braces in yMat (truncated file?)");

    size_t need = 0;
    for (auto& blk : c.blocks)
        need += blk.kind == BlockKind::Diag ? blk.size : static_cast<size_t>(blk.size) * blk.size;
    if (numbers.size() != need)
        throw std::runtime_error("solution parse error: yMat holds " + std::to_string(numbers.size()) +
                                 " values, problem expects " + std::to_string(need) +
                                 " (dimension mismatch)");

    size_t cursor = 0;
    std::vector<Mat<Real256>> mats;
    for (auto& blk : c.blocks) {
        Mat<Real256> Mb(blk.size, blk.size);
        if (blk.kind == BlockKind::Diag) {
            for (int d = 0; d < blk.size; ++d) Mb(d, d) = numbers[cursor++];
        } else {
            for (int r = 0; r < blk.size; ++r)
                for (int cc = 0; cc < blk.size; ++cc) Mb(r, cc) = numbers[cursor++];
            Mb.symmetrize();
        }
        mats.push_back(std::move(Mb));
    }

    sol.block_mats.assign(mats.begin(), mats.begin() + p.blocks.size());
    sol.status = SolveStatus::Feasible;
    sol.objective = form_value(p.objective, sol.block_mats);
    size_t dpos = find_section("objValDual");
    if (dpos != std::string::npos) {
        std::istringstream is(content.substr(content.find('=', dpos) + 1));
        std::string tok;
        if (is >> tok) sol.dual_objective = Real256(tok);
    }
    sol.max_violation = max_violation(p, sol.block_mats);
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        if (p.blocks[b].kind == BlockKind::Diag) {
            Real256 mn = sol.block_mats[b].rows ? sol.block_mats[b](0, 0) : Real256(0);
            for (int d = 1; d < sol.block_mats[b].rows; ++d)
                if (sol.block_mats[b](d, d) < mn) mn = sol.block_mats[b](d, d);
            sol.min_eigenvalue.push_back(mn);
        } else {
            Real256 scale = max_abs(sol.block_mats[b]);
            sol.min_eigenvalue.push_back(min_eigenvalue(
                sol.block_mats[b], scale > 0 ? scale * Real256("1e-40") : Real256("1e-40")));
        }
    }
    return sol;
}

}  // namespace packbound
