#pragma once

#include "kowtype/errors.hpp"
#include "kowtype/rat.hpp"

#include <array>
#include <vector>

namespace kow {

// Dense storage with hard degree caps sized to the catalog shapes:
// univariate degree <= 8, bivariate <= 4 per variable, trivariate <= 2 per
// variable. Exceeding a cap is an error, never silent truncation.

inline constexpr int kUniMaxDeg = 8;
inline constexpr int kBiMaxDeg = 4;
inline constexpr int kTriMaxDeg = 2;

enum class Var { x1 = 0, x2 = 1, s = 2 };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::x1: return "x1";
        case Var::x2: return "x2";
        default: return "s";
    }
}

template <class T>
struct UniPoly {
    std::array<T, kUniMaxDeg + 1> c{}; // c[k] multiplies x^k

    UniPoly() { c.fill(scalar_traits<T>::zero()); }

    static UniPoly from_coeffs(std::initializer_list<T> lo_to_hi) {
        UniPoly p;
        int k = 0;
        for (const T& v : lo_to_hi) {
            if (k > kUniMaxDeg) throw DegreeOverflow("univariate degree cap is 8");
            p.c[k++] = v;
        }
        return p;
    }

    // Highest nonzero index; -1 for the zero polynomial.
    int degree() const {
        for (int k = kUniMaxDeg; k >= 0; --k)
            if (!scalar_traits<T>::is_zero(c[k])) return k;
        return -1;
    }

    bool is_zero() const { return degree() < 0; }

    T operator()(const T& x) const {
        T acc = scalar_traits<T>::zero();
        for (int k = kUniMaxDeg; k >= 0; --k) acc = acc * x + c[k];
        return acc;
    }

    UniPoly operator+(const UniPoly& o) const {
        UniPoly r;
        for (int k = 0; k <= kUniMaxDeg; ++k) r.c[k] = c[k] + o.c[k];
        return r;
    }
    UniPoly operator-(const UniPoly& o) const {
        UniPoly r;
        for (int k = 0; k <= kUniMaxDeg; ++k) r.c[k] = c[k] - o.c[k];
        return r;
    }
    UniPoly operator*(const UniPoly& o) const {
        const int da = degree(), db = o.degree();
        if (da >= 0 && db >= 0 && da + db > kUniMaxDeg)
            throw DegreeOverflow("univariate product exceeds degree 8");
        UniPoly r;
        for (int i = 0; i <= da; ++i)
            for (int j = 0; j <= db; ++j) r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
        return r;
    }
    UniPoly scaled(const T& a) const {
        UniPoly r;
        for (int k = 0; k <= kUniMaxDeg; ++k) r.c[k] = c[k] * a;
        return r;
    }
    bool operator==(const UniPoly& o) const { return c == o.c; }
};

template <class T>
struct BiPoly {
    // c[i][j] multiplies u^i v^j where (u, v) are the container's two
    // variables in declaration order.
    std::array<std::array<T, kBiMaxDeg + 1>, kBiMaxDeg + 1> c{};

    BiPoly() {
        for (auto& row : c) row.fill(scalar_traits<T>::zero());
    }

    int degree_u() const {
        for (int i = kBiMaxDeg; i >= 0; --i)
            for (int j = 0; j <= kBiMaxDeg; ++j)
                if (!scalar_traits<T>::is_zero(c[i][j])) return i;
        return -1;
    }
    int degree_v() const {
        for (int j = kBiMaxDeg; j >= 0; --j)
            for (int i = 0; i <= kBiMaxDeg; ++i)
                if (!scalar_traits<T>::is_zero(c[i][j])) return j;
        return -1;
    }
    bool is_zero() const { return degree_u() < 0; }

    T operator()(const T& u, const T& v) const {
        T acc = scalar_traits<T>::zero();
        for (int i = kBiMaxDeg; i >= 0; --i) {
            T row = scalar_traits<T>::zero();
            for (int j = kBiMaxDeg; j >= 0; --j) row = row * v + c[i][j];
            acc = acc * u + row;
        }
        return acc;
    }

    // Section at fixed second variable: returns the univariate slice in u.
    UniPoly<T> section_v(const T& v) const {
        UniPoly<T> r;
        for (int i = 0; i <= kBiMaxDeg; ++i) {
            T row = scalar_traits<T>::zero();
            for (int j = kBiMaxDeg; j >= 0; --j) row = row * v + c[i][j];
            r.c[i] = row;
        }
        return r;
    }
    UniPoly<T> section_u(const T& u) const {
        UniPoly<T> r;
        for (int j = 0; j <= kBiMaxDeg; ++j) {
            T col = scalar_traits<T>::zero();
            for (int i = kBiMaxDeg; i >= 0; --i) col = col * u + c[i][j];
            r.c[j] = col;
        }
        return r;
    }

    BiPoly operator+(const BiPoly& o) const {
        BiPoly r;
        for (int i = 0; i <= kBiMaxDeg; ++i)
            for (int j = 0; j <= kBiMaxDeg; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
        return r;
    }
    BiPoly operator-(const BiPoly& o) const {
        BiPoly r;
        for (int i = 0; i <= kBiMaxDeg; ++i)
            for (int j = 0; j <= kBiMaxDeg; ++j) r.c[i][j] = c[i][j] - o.c[i][j];
        return r;
    }
    BiPoly operator*(const BiPoly& o) const {
        const int du = degree_u() + o.degree_u();
        const int dv = degree_v() + o.degree_v();
        if (!is_zero() && !o.is_zero() && (du > kBiMaxDeg || dv > kBiMaxDeg))
            throw DegreeOverflow("bivariate product exceeds degree 4 per variable");
        BiPoly r;
        for (int i = 0; i <= kBiMaxDeg; ++i)
            for (int j = 0; j <= kBiMaxDeg; ++j) {
                if (scalar_traits<T>::is_zero(c[i][j])) continue;
                for (int k = 0; i + k <= kBiMaxDeg; ++k)
                    for (int l = 0; j + l <= kBiMaxDeg; ++l)
                        r.c[i + k][j + l] = r.c[i + k][j + l] + c[i][j] * o.c[k][l];
            }
        return r;
    }
    BiPoly scaled(const T& a) const {
        BiPoly r;
        for (int i = 0; i <= kBiMaxDeg; ++i)
            for (int j = 0; j <= kBiMaxDeg; ++j) r.c[i][j] = c[i][j] * a;
        return r;
    }
    bool operator==(const BiPoly& o) const { return c == o.c; }
};

// Product of univariates in two distinct variables: p(u) * q(v).
template <class T>
BiPoly<T> outer(const UniPoly<T>& p, const UniPoly<T>& q) {
    if (p.degree() > kBiMaxDeg || q.degree() > kBiMaxDeg)
        throw DegreeOverflow("univariate factor exceeds bivariate degree cap");
    BiPoly<T> r;
    for (int i = 0; i <= kBiMaxDeg && i <= kUniMaxDeg; ++i)
        for (int j = 0; j <= kBiMaxDeg && j <= kUniMaxDeg; ++j) r.c[i][j] = p.c[i] * q.c[j];
    return r;
}

template <class T>
struct TriQuad {
    // c[i][j][k] multiplies x1^i x2^j s^k, each exponent <= 2.
    std::array<std::array<std::array<T, 3>, 3>, 3> c{};

    TriQuad() {
        for (auto& a : c)
            for (auto& b : a) b.fill(scalar_traits<T>::zero());
    }

    bool is_zero() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (!scalar_traits<T>::is_zero(c[i][j][k])) return false;
        return true;
    }

    T operator()(const T& x1, const T& x2, const T& s) const {
        T acc = scalar_traits<T>::zero();
        for (int i = 2; i >= 0; --i) {
            T mid = scalar_traits<T>::zero();
            for (int j = 2; j >= 0; --j) {
                T inner = scalar_traits<T>::zero();
                for (int k = 2; k >= 0; --k) inner = inner * s + c[i][j][k];
                mid = mid * x2 + inner;
            }
            acc = acc * x1 + mid;
        }
        return acc;
    }

    TriQuad operator+(const TriQuad& o) const {
        TriQuad r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r.c[i][j][k] = c[i][j][k] + o.c[i][j][k];
        return r;
    }
    TriQuad operator-(const TriQuad& o) const {
        TriQuad r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r.c[i][j][k] = c[i][j][k] - o.c[i][j][k];
        return r;
    }
    TriQuad scaled(const T& a) const {
        TriQuad r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r.c[i][j][k] = c[i][j][k] * a;
        return r;
    }
    TriQuad operator*(const TriQuad& o) const {
        TriQuad r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    if (scalar_traits<T>::is_zero(c[i][j][k])) continue;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            for (int d = 0; d < 3; ++d) {
                                if (scalar_traits<T>::is_zero(o.c[a][b][d])) continue;
                                if (i + a > 2 || j + b > 2 || k + d > 2)
                                    throw DegreeOverflow(
                                        "trivariate product exceeds degree 2 per variable");
                                r.c[i + a][j + b][k + d] =
                                    r.c[i + a][j + b][k + d] + c[i][j][k] * o.c[a][b][d];
                            }
                }
        return r;
    }
    bool operator==(const TriQuad& o) const { return c == o.c; }

    // Coefficient of var^power as a bivariate polynomial in the remaining
    // variables, taken in canonical order: s -> (x1,x2); x1 -> (x2,s);
    // x2 -> (x1,s).
    BiPoly<T> coeff_of(Var v, int power) const {
        BiPoly<T> r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    const T& val = c[i][j][k];
                    if (scalar_traits<T>::is_zero(val)) continue;
                    switch (v) {
                        case Var::s:
                            if (k == power) r.c[i][j] = r.c[i][j] + val;
                            break;
                        case Var::x1:
                            if (i == power) r.c[j][k] = r.c[j][k] + val;
                            break;
                        case Var::x2:
                            if (j == power) r.c[i][k] = r.c[i][k] + val;
                            break;
                    }
                }
        return r;
    }

    TriQuad partial(Var v) const {
        TriQuad r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    const T& val = c[i][j][k];
                    if (scalar_traits<T>::is_zero(val)) continue;
                    switch (v) {
                        case Var::x1:
                            if (i > 0) r.c[i - 1][j][k] = r.c[i - 1][j][k] + val * T(i);
                            break;
                        case Var::x2:
                            if (j > 0) r.c[i][j - 1][k] = r.c[i][j - 1][k] + val * T(j);
                            break;
                        case Var::s:
                            if (k > 0) r.c[i][j][k - 1] = r.c[i][j][k - 1] + val * T(k);
                            break;
                    }
                }
        return r;
    }
};

// Assemble A*s^2 + B*s + C from bivariate coefficients in (x1, x2).
template <class T>
TriQuad<T> quadratic_in_s(const BiPoly<T>& A, const BiPoly<T>& B, const BiPoly<T>& C) {
    if (A.degree_u() > 2 || A.degree_v() > 2 || B.degree_u() > 2 || B.degree_v() > 2 ||
        C.degree_u() > 2 || C.degree_v() > 2)
        throw DegreeOverflow("s-quadratic coefficients exceed degree 2 per variable");
    TriQuad<T> F;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            F.c[i][j][2] = A.c[i][j];
            F.c[i][j][1] = B.c[i][j];
            F.c[i][j][0] = C.c[i][j];
        }
    return F;
}

template <class T>
struct Discriminant {
    BiPoly<T> value;
    // Set when the leading coefficient in the eliminated variable is
    // identically zero; the value is then b^2 rather than b^2 - 4ac with
    // a nonzero quadratic term. Callers must see this case: A = (x1-x2)^2
    // vanishes on the diagonal.
    bool degenerate_quadratic = false;
};

// b^2 - 4ac of F viewed as a quadratic in var.
template <class T>
Discriminant<T> discriminant_in(const TriQuad<T>& F, Var v) {
    const BiPoly<T> a = F.coeff_of(v, 2);
    const BiPoly<T> b = F.coeff_of(v, 1);
    const BiPoly<T> cc = F.coeff_of(v, 0);
    Discriminant<T> out;
    out.degenerate_quadratic = a.is_zero();
    out.value = b * b - (a * cc).scaled(T(4));
    return out;
}

// Dynamic-arity evaluation used by the serialization layer and CLI.
template <class T>
T evaluate(const UniPoly<T>& p, const std::vector<T>& pt) {
    if (pt.size() != 1) throw ArityMismatch("univariate polynomial expects 1 coordinate");
    return p(pt[0]);
}
template <class T>
T evaluate(const BiPoly<T>& p, const std::vector<T>& pt) {
    if (pt.size() != 2) throw ArityMismatch("bivariate polynomial expects 2 coordinates");
    return p(pt[0], pt[1]);
}
template <class T>
T evaluate(const TriQuad<T>& p, const std::vector<T>& pt) {
    if (pt.size() != 3) throw ArityMismatch("trivariate polynomial expects 3 coordinates");
    return p(pt[0], pt[1], pt[2]);
}

inline double widen(const Rat& q) { return to_double(q); }

inline UniPoly<double> to_float(const UniPoly<Rat>& p) {
    UniPoly<double> r;
    for (int k = 0; k <= kUniMaxDeg; ++k) r.c[k] = to_double(p.c[k]);
    return r;
}
inline UniPoly<cplx> to_complex(const UniPoly<Rat>& p) {
    UniPoly<cplx> r;
    for (int k = 0; k <= kUniMaxDeg; ++k) r.c[k] = cplx(to_double(p.c[k]), 0.0);
    return r;
}
inline BiPoly<double> to_float(const BiPoly<Rat>& p) {
    BiPoly<double> r;
    for (int i = 0; i <= kBiMaxDeg; ++i)
        for (int j = 0; j <= kBiMaxDeg; ++j) r.c[i][j] = to_double(p.c[i][j]);
    return r;
}
inline BiPoly<cplx> to_complex(const BiPoly<Rat>& p) {
    BiPoly<cplx> r;
    for (int i = 0; i <= kBiMaxDeg; ++i)
        for (int j = 0; j <= kBiMaxDeg; ++j) r.c[i][j] = cplx(to_double(p.c[i][j]), 0.0);
    return r;
}
inline TriQuad<cplx> to_complex(const TriQuad<Rat>& p) {
    TriQuad<cplx> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r.c[i][j][k] = cplx(to_double(p.c[i][j][k]), 0.0);
    return r;
}

} // namespace kow
