#pragma once

#include "kowtype/poly.hpp"

#include <array>
#include <stdexcept>

namespace kow {

// Exponent profile (m1, n1, m2, n2) pairing the frame functions
// f_i = x_i^{m_i} r + x_i^{n_i} g3. The construction requires m1 != n1 or
// m2 != n2; otherwise the shared denominator vanishes identically.
struct ExponentProfile {
    int m1 = 2, n1 = 0, m2 = 2, n2 = 0;
};

enum class Branch { plus, minus };

namespace detail {

template <class T>
T ipow(const T& base, int e) {
    T acc = scalar_traits<T>::one();
    for (int i = 0; i < e; ++i) acc = acc * base;
    return acc;
}

template <class T>
T eval_bi(const BiPoly<Rat>& p, const T& x, const T& y) {
    if constexpr (std::is_same_v<T, Rat>) {
        return p(x, y);
    } else {
        return to_complex(p)(x, y);
    }
}

template <class T>
T eval_uni(const UniPoly<Rat>& p, const T& x) {
    if constexpr (std::is_same_v<T, Rat>) {
        return p(x);
    } else {
        return to_complex(p)(x);
    }
}

} // namespace detail

// B with either a catalog polynomial source or a tracked-sign square root of
// 4AC + 4 P(x1) P(x2). Either way B^2 = 4AC + 4 P1 P2 wherever evaluated.
struct BFunction {
    enum class Source { catalog_polynomial, square_root };
    Source source = Source::catalog_polynomial;
    BiPoly<Rat> poly;
    BiPoly<Rat> A, C;
    UniPoly<Rat> P;
    int sqrt_sign = +1;

    static BFunction from_poly(const BiPoly<Rat>& B) {
        BFunction b;
        b.source = Source::catalog_polynomial;
        b.poly = B;
        return b;
    }
    static BFunction from_sqrt(const BiPoly<Rat>& A, const BiPoly<Rat>& C,
                               const UniPoly<Rat>& P, int sign) {
        BFunction b;
        b.source = Source::square_root;
        b.A = A;
        b.C = C;
        b.P = P;
        b.sqrt_sign = sign;
        return b;
    }

    template <class T>
    T square(const T& x1, const T& x2) const {
        if (source == Source::catalog_polynomial) {
            const T b = detail::eval_bi(poly, x1, x2);
            return b * b;
        }
        return T(4) * detail::eval_bi(A, x1, x2) * detail::eval_bi(C, x1, x2) +
               T(4) * detail::eval_uni(P, x1) * detail::eval_uni(P, x2);
    }

    template <class T>
    T operator()(const T& x1, const T& x2) const {
        if (source == Source::catalog_polynomial) return detail::eval_bi(poly, x1, x2);
        const T sq = T(4) * detail::eval_bi(A, x1, x2) * detail::eval_bi(C, x1, x2) +
                     T(4) * detail::eval_uni(P, x1) * detail::eval_uni(P, x2);
        if constexpr (std::is_same_v<T, Rat>) {
            const auto r = sqrt_exact(sq);
            if (!r)
                throw std::domain_error(
                    "square-root B is irrational at the requested rational point");
            return sqrt_sign > 0 ? *r : -*r;
        } else {
            const T r = std::sqrt(sq);
            return sqrt_sign > 0 ? r : -r;
        }
    }
};

template <class T>
struct CoefficientValues {
    T p1, p2, q1, q2, r1, r2, E, F, G;
};

// The coefficient construction: holds the inputs and evaluates the displayed
// formulas verbatim at requested points.
struct CoefficientSet {
    ExponentProfile profile;
    BiPoly<Rat> A, C;
    UniPoly<Rat> P;
    BFunction B;
    Branch branch = Branch::plus;

    template <class T>
    CoefficientValues<T> eval(const T& x1, const T& x2) const {
        using detail::ipow;
        const T u = ipow(x1, profile.m1), v = ipow(x1, profile.n1);
        const T w = ipow(x2, profile.m2), z = ipow(x2, profile.n2);
        const T den = u * z - w * v;
        if (scalar_traits<T>::is_zero(den))
            throw EvaluationAtSingularLocus("x1^m1 x2^n2 = x2^m2 x1^n1 at this point");
        const T D = den * den;
        const T Av = detail::eval_bi(A, x1, x2);
        const T P1 = detail::eval_uni(P, x1), P2 = detail::eval_uni(P, x2);
        CoefficientValues<T> out;
        out.p1 = Av * v * v / D;
        out.p2 = Av * z * z / D;
        out.q1 = Av * u * v / D;
        out.q2 = Av * w * z / D;
        out.r1 = Av * u * u / D;
        out.r2 = Av * w * w / D;
        const T Bv = B(x1, x2);
        const T sgn = branch == Branch::plus ? scalar_traits<T>::one()
                                             : T(0) - scalar_traits<T>::one();
        out.E = (z * z * P1 + v * v * P2 + sgn * Bv * v * z) / D;
        const T fden = T(2) * v * z * (v * w - u * z);
        const T gden = v * z * (u * z - v * w);
        if (scalar_traits<T>::is_zero(fden) || scalar_traits<T>::is_zero(gden))
            throw EvaluationAtSingularLocus("F/G denominator vanishes at this point");
        out.F = (out.E * (u * u * z * z - v * v * w * w) + v * v * P2 - z * z * P1) / fden;
        out.G = (out.E * u * w * (u * z - v * w) + u * v * P2 - w * z * P1) / gden;
        return out;
    }
};

inline CoefficientSet thm1_coefficients(const ExponentProfile& profile, const BiPoly<Rat>& A,
                                        const BiPoly<Rat>& C, const UniPoly<Rat>& P,
                                        const BFunction& B, Branch branch) {
    if (profile.m1 == profile.n1 && profile.m2 == profile.n2)
        throw ConfigError("exponent profile requires m1 != n1 or m2 != n2", "/profile");
    CoefficientSet cs;
    cs.profile = profile;
    cs.A = A;
    cs.C = C;
    cs.P = P;
    cs.B = B;
    cs.branch = branch;
    return cs;
}

// The six defining equations, as signed residuals:
//   p2 u^2 - 2 q2 u v + r2 v^2 = A      p1 w^2 - 2 q1 w z + r1 z^2 = A
//   p1 u^2 - 2 q1 u v + r1 v^2 = 0      p2 w^2 - 2 q2 w z + r2 z^2 = 0
//   E u^2 + 2 F u v + G v^2 = P(x1)     E w^2 + 2 F w z + G z^2 = P(x2)
template <class T>
std::array<T, 6> verify_coefficient_system(const CoefficientSet& cs, const T& x1, const T& x2) {
    using detail::ipow;
    const auto cv = cs.eval(x1, x2);
    const T u = ipow(x1, cs.profile.m1), v = ipow(x1, cs.profile.n1);
    const T w = ipow(x2, cs.profile.m2), z = ipow(x2, cs.profile.n2);
    const T Av = detail::eval_bi(cs.A, x1, x2);
    const T P1 = detail::eval_uni(cs.P, x1), P2 = detail::eval_uni(cs.P, x2);
    return {
        cv.p2 * u * u - T(2) * cv.q2 * u * v + cv.r2 * v * v - Av,
        cv.p1 * u * u - T(2) * cv.q1 * u * v + cv.r1 * v * v,
        cv.E * u * u + T(2) * cv.F * u * v + cv.G * v * v - P1,
        cv.p1 * w * w - T(2) * cv.q1 * w * z + cv.r1 * z * z - Av,
        cv.p2 * w * w - T(2) * cv.q2 * w * z + cv.r2 * z * z,
        cv.E * w * w + T(2) * cv.F * w * z + cv.G * z * z - P2,
    };
}

// Residual of the quadratic the proof solves for E:
// phi(E) = aE^2 + bE + c with
//   a = -(uz - wv)^2 / (4 v^2 z^2)
//   b = (P1 / v^2 + P2 / z^2) / 2
//   c = -(P1 z^2 - P2 v^2)^2 / (4 v^2 z^2 (vw - uz)^2)
// and phi(E) = -C A / (uz - wv)^2.
template <class T>
T verify_E_quadratic(const CoefficientSet& cs, const T& x1, const T& x2) {
    using detail::ipow;
    const auto cv = cs.eval(x1, x2);
    const T u = ipow(x1, cs.profile.m1), v = ipow(x1, cs.profile.n1);
    const T w = ipow(x2, cs.profile.m2), z = ipow(x2, cs.profile.n2);
    const T den = u * z - w * v;
    const T D = den * den;
    const T v2z2 = v * v * z * z;
    const T P1 = detail::eval_uni(cs.P, x1), P2 = detail::eval_uni(cs.P, x2);
    const T a = T(0) - D / (T(4) * v2z2);
    const T b = (P1 / (v * v) + P2 / (z * z)) / T(2);
    const T c = T(0) - (P1 * z * z - P2 * v * v) * (P1 * z * z - P2 * v * v) / (T(4) * v2z2 * D);
    const T Cv = detail::eval_bi(cs.C, x1, x2);
    const T Av = detail::eval_bi(cs.A, x1, x2);
    return a * cv.E * cv.E + b * cv.E + c + Cv * Av / D;
}

// Branch-free version of the E quadratic: substituting E = (alpha +- B beta)/D
// into phi(E) + CA/D and splitting off the odd-in-B part yields two
// identities that hold without choosing a square-root branch:
//   (i)  2 a alpha beta + b beta D = 0
//   (ii) a (alpha^2 + beta^2 B^2) + b alpha D + c D^2 + C A D = 0
// with alpha = z^2 P1 + v^2 P2, beta = v z, B^2 = 4AC + 4 P1 P2.
template <class T>
std::array<T, 2> verify_E_formal(const CoefficientSet& cs, const T& x1, const T& x2) {
    using detail::ipow;
    const T u = ipow(x1, cs.profile.m1), v = ipow(x1, cs.profile.n1);
    const T w = ipow(x2, cs.profile.m2), z = ipow(x2, cs.profile.n2);
    const T den = u * z - w * v;
    if (scalar_traits<T>::is_zero(den))
        throw EvaluationAtSingularLocus("x1^m1 x2^n2 = x2^m2 x1^n1 at this point");
    const T D = den * den;
    const T v2z2 = v * v * z * z;
    const T P1 = detail::eval_uni(cs.P, x1), P2 = detail::eval_uni(cs.P, x2);
    const T Cv = detail::eval_bi(cs.C, x1, x2);
    const T Av = detail::eval_bi(cs.A, x1, x2);
    const T a = T(0) - D / (T(4) * v2z2);
    const T b = (P1 / (v * v) + P2 / (z * z)) / T(2);
    const T c = T(0) - (P1 * z * z - P2 * v * v) * (P1 * z * z - P2 * v * v) / (T(4) * v2z2 * D);
    const T alpha = z * z * P1 + v * v * P2;
    const T beta = v * z;
    const T Bsq = T(4) * Av * Cv + T(4) * P1 * P2;
    return {
        T(2) * a * alpha * beta + b * beta * D,
        a * (alpha * alpha + beta * beta * Bsq) + b * alpha * D + c * D * D + Cv * Av * D,
    };
}

} // namespace kow
