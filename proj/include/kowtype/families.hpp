#pragma once

#include "kowtype/poly.hpp"

namespace kow {

// The three polynomial families every identity check runs against. Each F is
// a quadratic in s, F = A s^2 + B s + C, with A, B, C bivariate in (x1, x2)
// and a companion univariate P whose products the discriminants factor into.

template <class T>
struct SQuadraticFamily {
    BiPoly<T> A, B, C;
    UniPoly<T> P;
    TriQuad<T> F;
};

// Weierstrass-cubic family: P(x) = 2x^3 - (g2/2) x - g3/2. The coefficient
// type is generic so the same construction serves exact rational identity
// work and complex evaluation along trajectories.
template <class T = Rat>
SQuadraticFamily<T> weierstrass_family(const T& g2, const T& g3) {
    SQuadraticFamily<T> f;
    BiPoly<T>& A = f.A;
    A.c[2][0] = 1;
    A.c[1][1] = -2;
    A.c[0][2] = 1;
    BiPoly<T>& B = f.B;
    B.c[2][1] = -2;
    B.c[1][2] = -2;
    B.c[1][0] = g2 / T(2);
    B.c[0][1] = g2 / T(2);
    B.c[0][0] = g3;
    BiPoly<T>& C = f.C;
    C.c[2][2] = 1;
    C.c[1][1] = g2 / T(2);
    C.c[1][0] = g3;
    C.c[0][1] = g3;
    C.c[0][0] = g2 * g2 / T(16);
    f.P = UniPoly<T>::from_coeffs({-g3 / T(2), -g2 / T(2), T(0), T(2)});
    f.F = quadratic_in_s(A, B, C);
    return f;
}

// General-cubic family: P(x) = 2x^3 + a x^2 + b x + c.
template <class T = Rat>
SQuadraticFamily<T> general_cubic_family(const T& a, const T& b, const T& c) {
    SQuadraticFamily<T> f;
    BiPoly<T>& A = f.A;
    A.c[2][0] = 1;
    A.c[1][1] = -2;
    A.c[0][2] = 1;
    BiPoly<T>& B = f.B;
    B.c[2][1] = 2;
    B.c[1][2] = 2;
    B.c[1][1] = T(2) * a;
    B.c[1][0] = b;
    B.c[0][1] = b;
    B.c[0][0] = T(2) * c;
    BiPoly<T>& C = f.C;
    C.c[2][2] = 1;
    C.c[1][1] = -b;
    C.c[1][0] = T(-2) * c;
    C.c[0][1] = T(-2) * c;
    C.c[0][0] = b * b / T(4) - a * c;
    f.P = UniPoly<T>::from_coeffs({c, b, a, T(2)});
    f.F = quadratic_in_s(A, B, C);
    return f;
}

// Classical heavy-top separation data: Q(x1,x2,s) quadratic in s whose
// s-discriminant is 4 P(x1) P(x2) with the quartic P, and whose x_i
// discriminants factor through the cubic J.
struct TopFamily {
    TriQuad<Rat> Q;
    UniPoly<Rat> P; // -x^4 + 6 l1 x^2 + 4 l c x + (c^2 - k^2)
    UniPoly<Rat> J; // s^3 + 3 l1 s^2 + (c^2 - k^2) s + 3 l1 (c^2 - k^2) - 2 l^2 c^2
    Rat c2k2;       // c^2 - k^2
};

inline TopFamily kowalevski_top_family(const Rat& l1, const Rat& l, const Rat& c,
                                       const Rat& k) {
    const Rat c2k2 = c * c - k * k;
    BiPoly<Rat> A;
    A.c[2][0] = 1;
    A.c[1][1] = -2;
    A.c[0][2] = 1;
    // R = -x1^2 x2^2 + 6 l1 x1 x2 + 2 l c (x1 + x2) + c^2 - k^2
    BiPoly<Rat> R;
    R.c[2][2] = -1;
    R.c[1][1] = 6 * l1;
    R.c[1][0] = 2 * l * c;
    R.c[0][1] = 2 * l * c;
    R.c[0][0] = c2k2;
    // R1 = -6 l1 x1^2 x2^2 - (c^2-k^2)(x1+x2)^2 - 4 l c x1 x2 (x1+x2)
    //      + 6 l1 (c^2-k^2) - 4 c^2 l^2
    BiPoly<Rat> R1;
    R1.c[2][2] = -6 * l1;
    R1.c[2][0] = -c2k2;
    R1.c[1][1] = -2 * c2k2;
    R1.c[0][2] = -c2k2;
    R1.c[2][1] = -4 * l * c;
    R1.c[1][2] = -4 * l * c;
    R1.c[0][0] = 6 * l1 * c2k2 - 4 * c * c * l * l;
    TopFamily f;
    f.Q = quadratic_in_s(A, R.scaled(Rat(-2)), R1.scaled(Rat(-1)));
    f.P = UniPoly<Rat>::from_coeffs({c2k2, 4 * l * c, 6 * l1, 0, -1});
    f.J = UniPoly<Rat>::from_coeffs({3 * l1 * c2k2 - 2 * l * l * c * c, c2k2, 3 * l1, 1});
    f.c2k2 = c2k2;
    return f;
}

} // namespace kow
