#pragma once

#include "packbound/interval.hpp"
#include "packbound/scaled_rational.hpp"

#include <stdexcept>
#include <vector>

namespace packbound {

inline bool coeff_is_zero(const Rat& c) { return c == 0; }
inline bool coeff_is_zero(double c) { return c == 0; }
inline bool coeff_is_zero(const Real113& c) { return c == 0; }
inline bool coeff_is_zero(const Real256& c) { return c == 0; }
inline bool coeff_is_zero(const RationalInterval& c) { return c.lo() == 0 && c.hi() == 0; }
inline bool coeff_is_zero(const ScaledRational& c) { return c.is_zero(); }
inline bool coeff_is_zero(const PiSum& c) { return c.is_zero(); }

// Variable convention: X means value(x) = sum c_i x^i, X2 means
// value(t) = sum c_i t^(2i).  A polynomial in t of degree k becomes the
// composition p(t^2) by retagging alone.
enum class PolyVar { X, X2 };

template <class T>
struct Poly {
    PolyVar var = PolyVar::X;
    std::vector<T> c;

    Poly() = default;
    explicit Poly(PolyVar v) : var(v) {}
    Poly(PolyVar v, std::vector<T> coeffs) : var(v), c(std::move(coeffs)) { trim(); }

    static Poly zero(PolyVar v = PolyVar::X) { return Poly(v); }
    static Poly constant(PolyVar v, T value) {
        Poly p(v);
        p.c.push_back(std::move(value));
        p.trim();
        return p;
    }

    int degree_index() const {  // index of leading coefficient, -1 if zero
        return static_cast<int>(c.size()) - 1;
    }
    // Degree in the underlying variable (t), accounting for the X2 tag.
    int degree() const {
        int d = degree_index();
        return var == PolyVar::X2 ? 2 * d : d;
    }
    bool is_zero() const { return c.empty(); }

    const T& coeff(size_t i) const {
        static const T z{};
        return i < c.size() ? c[i] : z;
    }

    void trim() {
        while (!c.empty() && coeff_is_zero(c.back())) c.pop_back();
    }

    Poly operator-() const {
        Poly r(var);
        r.c.reserve(c.size());
        for (auto& x : c) r.c.push_back(-x);
        return r;
    }

    Poly& operator+=(const Poly& o) {
        require_same_var(o);
        if (c.size() < o.c.size()) c.resize(o.c.size());
        for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        require_same_var(o);
        if (c.size() < o.c.size()) c.resize(o.c.size());
        for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.require_same_var(b);
        if (a.is_zero() || b.is_zero()) return Poly(a.var);
        Poly r(a.var);
        r.c.assign(a.c.size() + b.c.size() - 1, T{});
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j)
                r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }

    Poly scaled(const T& s) const {
        Poly r(var);
        r.c.reserve(c.size());
        for (auto& x : c) r.c.push_back(x * s);
        r.trim();
        return r;
    }

    // Multiply by the monomial of the poly's own variable (x or t^2).
    Poly shifted_up(size_t k = 1) const {
        if (is_zero()) return *this;
        Poly r(var);
        r.c.assign(c.size() + k, T{});
        for (size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
        return r;
    }

    // Evaluate at a point of the underlying variable t.
    template <class Arg>
    Arg eval(const Arg& t) const {
        Arg x = (var == PolyVar::X2) ? Arg(t * t) : t;
        Arg acc{};
        for (size_t i = c.size(); i-- > 0;)
            acc = acc * x + static_cast<Arg>(c[i]);
        return acc;
    }

    Poly derivative() const {
        if (var != PolyVar::X)
            throw std::logic_error("Poly::derivative requires the X variable tag");
        Poly r(var);
        for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * T(Rat(Int(i))));
        r.trim();
        return r;
    }

    Poly to_var_x() const {
        if (var == PolyVar::X) return *this;
        Poly r(PolyVar::X);
        r.c.assign(c.empty() ? 0 : 2 * c.size() - 1, T{});
        for (size_t i = 0; i < c.size(); ++i) r.c[2 * i] = c[i];
        return r;
    }

  private:
    void require_same_var(const Poly& o) const {
        if (var != o.var)
            throw std::logic_error("Poly: mixed variable conventions");
    }
};

template <class T>
Poly<T> poly_even_part(const Poly<T>& p) {  // X poly -> X2 poly of even coeffs
    if (p.var != PolyVar::X) throw std::logic_error("poly_even_part: expects X");
    Poly<T> r(PolyVar::X2);
    for (size_t i = 0; i < p.c.size(); i += 2) r.c.push_back(p.c[i]);
    r.trim();
    return r;
}

template <class T>
Poly<T> poly_odd_part(const Poly<T>& p) {  // X poly -> X2 poly q with p_odd = t*q(t)
    if (p.var != PolyVar::X) throw std::logic_error("poly_odd_part: expects X");
    Poly<T> r(PolyVar::X2);
    for (size_t i = 1; i < p.c.size(); i += 2) r.c.push_back(p.c[i]);
    r.trim();
    return r;
}

template <class From, class To, class Fn>
Poly<To> poly_map(const Poly<From>& p, Fn&& fn) {
    Poly<To> r(p.var);
    r.c.reserve(p.c.size());
    for (auto& x : p.c) r.c.push_back(fn(x));
    r.trim();
    return r;
}

// Expands p in a triangular basis (elems[k] has degree index exactly k)
// by back-substitution.  Exact for exact coefficient fields.
template <class T>
std::vector<T> change_basis(const Poly<T>& p, const std::vector<Poly<T>>& elems) {
    for (size_t k = 0; k < elems.size(); ++k) {
        if (elems[k].var != p.var)
            throw std::logic_error("change_basis: variable mismatch");
        if (elems[k].degree_index() != static_cast<int>(k))
            throw std::invalid_argument("change_basis: basis not triangular");
    }
    if (p.degree_index() >= static_cast<int>(elems.size()))
        throw std::invalid_argument("change_basis: polynomial degree exceeds basis");
    std::vector<T> out(elems.size(), T{});
    Poly<T> rem = p;
    for (size_t k = elems.size(); k-- > 0;) {
        if (rem.degree_index() < static_cast<int>(k)) continue;
        T coef = rem.c[k] / elems[k].c[k];
        out[k] = coef;
        rem -= elems[k].scaled(coef);
        if (rem.degree_index() >= static_cast<int>(k)) {
            // leading term must have cancelled exactly; drop residue for
            // approximate coefficient fields
            rem.c.resize(k);
            rem.trim();
        }
    }
    return out;
}

}  // namespace packbound
