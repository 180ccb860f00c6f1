#pragma once

#include "packbound/rationals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace packbound {

template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T{}) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    Mat transposed() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat& operator+=(const Mat& o) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
        return *this;
    }
    friend Mat operator+(Mat x, const Mat& y) { return x += y; }
    friend Mat operator-(Mat x, const Mat& y) { return x -= y; }

    Mat scaled(const T& s) const {
        Mat r = *this;
        for (auto& x : r.a) x *= s;
        return r;
    }

    void symmetrize() {
        for (int i = 0; i < rows; ++i)
            for (int j = i + 1; j < cols; ++j) {
                T v = ((*this)(i, j) + (*this)(j, i)) / T(2);
                (*this)(i, j) = v;
                (*this)(j, i) = v;
            }
    }
};

template <class T>
Mat<T> matmul(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw std::logic_error("matmul: shape mismatch");
    Mat<T> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T& xv = x(i, k);
            if (xv == T{}) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
        }
    return r;
}

// Frobenius inner product, symmetric matrices.
template <class T>
T frob_inner(const Mat<T>& x, const Mat<T>& y) {
    T acc{};
    for (size_t i = 0; i < x.a.size(); ++i) acc += x.a[i] * y.a[i];
    return acc;
}

template <class T>
T max_abs(const Mat<T>& x) {
    using std::abs;
    T best{};
    for (auto& v : x.a)
        if (abs(v) > best) best = abs(v);
    return best;
}

// Lower Cholesky factor; returns false when a pivot is not strictly positive.
template <class T>
bool cholesky(const Mat<T>& A, Mat<T>& L) {
    using std::sqrt;
    int n = A.rows;
    L = Mat<T>(n, n);
    for (int j = 0; j < n; ++j) {
        T d = A(j, j);
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > T(0))) return false;
        L(j, j) = sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            T s = A(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    return true;
}

// Solves L X = B for lower-triangular L.
template <class T>
Mat<T> forward_solve(const Mat<T>& L, const Mat<T>& B) {
    int n = L.rows, m = B.cols;
    Mat<T> X(n, m);
    for (int c = 0; c < m; ++c)
        for (int i = 0; i < n; ++i) {
            T s = B(i, c);
            for (int k = 0; k < i; ++k) s -= L(i, k) * X(k, c);
            X(i, c) = s / L(i, i);
        }
    return X;
}

// Solves L^T X = B for lower-triangular L.
template <class T>
Mat<T> backward_solve(const Mat<T>& L, const Mat<T>& B) {
    int n = L.rows, m = B.cols;
    Mat<T> X(n, m);
    for (int c = 0; c < m; ++c)
        for (int i = n - 1; i >= 0; --i) {
            T s = B(i, c);
            for (int k = i + 1; k < n; ++k) s -= L(k, i) * X(k, c);
            X(i, c) = s / L(i, i);
        }
    return X;
}

template <class T>
std::vector<T> cholesky_solve(const Mat<T>& L, const std::vector<T>& b) {
    int n = L.rows;
    Mat<T> B(n, 1);
    for (int i = 0; i < n; ++i) B(i, 0) = b[i];
    Mat<T> X = backward_solve(L, forward_solve(L, B));
    std::vector<T> out(n);
    for (int i = 0; i < n; ++i) out[i] = X(i, 0);
    return out;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
// Deterministic: fixed sweep order, fixed convergence threshold.
template <class T>
std::vector<T> jacobi_eigenvalues(Mat<T> A, const T& tol, int max_sweeps = 60) {
    using std::abs;
    using std::sqrt;
    int n = A.rows;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        T off{};
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (!(off > tol * tol)) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                T apq = A(p, q);
                if (abs(apq) <= tol / T(n * n)) continue;
                T theta = (A(q, q) - A(p, p)) / (T(2) * apq);
                T t;
                if (theta >= T(0))
                    t = T(1) / (theta + sqrt(T(1) + theta * theta));
                else
                    t = T(-1) / (-theta + sqrt(T(1) + theta * theta));
                T c = T(1) / sqrt(T(1) + t * t);
                T s = t * c;
                for (int k = 0; k < n; ++k) {
                    T akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    T apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<T> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = A(i, i);
    return ev;
}

template <class T>
T min_eigenvalue(const Mat<T>& A, const T& tol) {
    auto ev = jacobi_eigenvalues(A, tol);
    T m = ev[0];
    for (auto& v : ev)
        if (v < m) m = v;
    return m;
}

// Gaussian elimination with full pivoting for A x = b over a float field.
// Returns the rank; fills a particular solution and a kernel basis.
template <class T>
struct AffineSolution {
    int rank = 0;
    std::vector<T> particular;
    std::vector<std::vector<T>> kernel;
    bool consistent = true;
};

template <class T>
AffineSolution<T> gauss_affine_solve(Mat<T> A, std::vector<T> b, const T& pivot_tol) {
    using std::abs;
    int m = A.rows, n = A.cols;
    std::vector<int> col_of_pivot;   // pivot row r uses column col_of_pivot[r]
    std::vector<int> col_perm(n);
    for (int j = 0; j < n; ++j) col_perm[j] = j;
    int r = 0;
    for (; r < m && r < n; ++r) {
        int bi = -1, bj = -1;
        T best = pivot_tol;
        for (int i = r; i < m; ++i)
            for (int j = r; j < n; ++j)
                if (abs(A(i, j)) > best) {
                    best = abs(A(i, j));
                    bi = i;
                    bj = j;
                }
        if (bi < 0) break;
        for (int j = 0; j < n; ++j) std::swap(A(r, j), A(bi, j));
        std::swap(b[r], b[bi]);
        for (int i = 0; i < m; ++i) std::swap(A(i, r), A(i, bj));
        std::swap(col_perm[r], col_perm[bj]);
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            T f = A(i, r) / A(r, r);
            if (f == T{}) continue;
            for (int j = r; j < n; ++j) A(i, j) -= f * A(r, j);
            b[i] -= f * b[r];
        }
    }
    AffineSolution<T> sol;
    sol.rank = r;
    for (int i = r; i < m; ++i)
        if (abs(b[i]) > pivot_tol * T(16)) sol.consistent = false;
    sol.particular.assign(n, T{});
    for (int i = 0; i < r; ++i) sol.particular[col_perm[i]] = b[i] / A(i, i);
    for (int f = r; f < n; ++f) {
        std::vector<T> v(n, T{});
        v[col_perm[f]] = T(1);
        for (int i = 0; i < r; ++i) v[col_perm[i]] = -A(i, f) / A(i, i);
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

// Exact PSD test for a rational symmetric matrix via LDL^T: a zero pivot
// forces its whole row to vanish, a negative pivot refutes PSD-ness.
inline bool rational_psd_check(Mat<Rat> A) {
    int n = A.rows;
    for (int k = 0; k < n; ++k) {
        if (A(k, k) < 0) return false;
        if (A(k, k) == 0) {
            for (int j = k + 1; j < n; ++j)
                if (A(k, j) != 0) return false;
            continue;
        }
        for (int i = k + 1; i < n; ++i) {
            Rat f = A(i, k) / A(k, k);
            for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }
    return true;
}

}  // namespace packbound
