// Coefficient-set construction: the displayed formulas, the six defining
// equations, the E quadratic, and reproduction of the closed forms the
// catalog systems use. All residual checks are exact rational.

#include "doctest.h"

#include "kowtype/families.hpp"
#include "kowtype/theorem.hpp"

#include <cstdint>
#include <random>

using namespace kow;

namespace {

struct RatRng {
    std::mt19937_64 eng;
    explicit RatRng(std::uint64_t seed) : eng(seed) {}
    std::int64_t ival(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Rat value() { return Rat(Int(ival(-8, 8)), Int(ival(1, 5))); }
    // Point off the singular locus of the given profile, with x1, x2 != 0.
    std::pair<Rat, Rat> point(const ExponentProfile& pr) {
        for (;;) {
            const Rat x1 = value(), x2 = value();
            if (x1 == 0 || x2 == 0) continue;
            auto ip = [](Rat b, int e) {
                Rat acc(1);
                for (int i = 0; i < e; ++i) acc *= b;
                return acc;
            };
            const Rat u = ip(x1, pr.m1), v = ip(x1, pr.n1);
            const Rat w = ip(x2, pr.m2), z = ip(x2, pr.n2);
            if (u * z - w * v == 0 || v * z == 0) continue;
            return {x1, x2};
        }
    }
};

CoefficientSet modal_set(const Rat& g2, const Rat& g3, Branch br) {
    const auto fam = weierstrass_family(g2, g3);
    return thm1_coefficients({2, 0, 2, 0}, fam.A, fam.C, fam.P, BFunction::from_poly(fam.B),
                             br);
}

CoefficientSet cubic_set(const Rat& a, const Rat& b, const Rat& c, Branch br) {
    const auto fam = general_cubic_family(a, b, c);
    return thm1_coefficients({1, 0, 1, 0}, fam.A, fam.C, fam.P, BFunction::from_poly(fam.B),
                             br);
}

} // namespace

TEST_CASE("pinned coefficient values") {
    const auto cs = modal_set(Rat(0), Rat(0), Branch::plus);
    const auto cv = cs.eval(Rat(1), Rat(2));
    CHECK(cv.p1 == rat(1, 9)); // 1/(x1+x2)^2
    CHECK(cv.E == rat(2, 3));  // (P(1)+P(2)+B(1,2))/9 = (2+16-12)/9

    const auto cc = cubic_set(Rat(0), Rat(0), Rat(0), Branch::minus);
    const auto cw = cc.eval(Rat(1), Rat(2));
    CHECK(cw.E == Rat(6)); // (2+16-12)/1 = 2 x1 + 2 x2 + a
}

TEST_CASE("profile hypothesis is enforced") {
    const auto fam = weierstrass_family(Rat(1), Rat(1));
    CHECK_THROWS_AS(thm1_coefficients({1, 1, 2, 2}, fam.A, fam.C, fam.P,
                                      BFunction::from_poly(fam.B), Branch::plus),
                    ConfigError);
}

TEST_CASE("singular locus evaluation throws") {
    const auto cs = modal_set(Rat(1), Rat(2), Branch::plus);
    CHECK_THROWS_AS(cs.eval(Rat(1), Rat(-1)), EvaluationAtSingularLocus); // x1^2 = x2^2
    const auto cc = cubic_set(Rat(1), Rat(1), Rat(1), Branch::minus);
    CHECK_THROWS_AS(cc.eval(Rat(2), Rat(2)), EvaluationAtSingularLocus); // x1 = x2
}

TEST_CASE("six defining equations: exact zeros, catalog profiles") {
    RatRng rng(0xcbf29ce484222325ull);
    for (Branch br : {Branch::plus, Branch::minus}) {
        const auto cs = modal_set(rat(3, 7), rat(-2, 5), br);
        const auto cc = cubic_set(rat(1, 3), rat(-2, 7), rat(3, 5), br);
        for (int iter = 0; iter < 100; ++iter) {
            const auto [x1, x2] = rng.point(cs.profile);
            for (const Rat& r : verify_coefficient_system(cs, x1, x2)) CHECK(r == Rat(0));
            const auto [y1, y2] = rng.point(cc.profile);
            for (const Rat& r : verify_coefficient_system(cc, y1, y2)) CHECK(r == Rat(0));
        }
    }
}

TEST_CASE("six defining equations: exact zeros, generic profiles") {
    // The construction is profile-agnostic; spot-check asymmetric and
    // higher-exponent profiles with both polynomial families.
    RatRng rng(0x100000001b3ull);
    const auto quad = weierstrass_family(rat(3, 7), rat(-2, 5));
    const auto cub = general_cubic_family(rat(1, 3), rat(-2, 7), rat(3, 5));
    for (ExponentProfile pr :
         {ExponentProfile{2, 1, 2, 1}, ExponentProfile{3, 0, 1, 0}, ExponentProfile{1, 0, 2, 0}}) {
        for (const auto* fam : {&quad, &cub}) {
            const auto cs = thm1_coefficients(pr, fam->A, fam->C, fam->P,
                                              BFunction::from_poly(fam->B), Branch::plus);
            for (int iter = 0; iter < 25; ++iter) {
                const auto [x1, x2] = rng.point(pr);
                for (const Rat& r : verify_coefficient_system(cs, x1, x2)) CHECK(r == Rat(0));
            }
        }
    }
}

TEST_CASE("E quadratic: both branches solve it exactly") {
    RatRng rng(0xc6a4a7935bd1e995ull);
    for (Branch br : {Branch::plus, Branch::minus}) {
        const auto cs = modal_set(rat(-1, 2), rat(4, 3), br);
        const auto cc = cubic_set(rat(2, 5), rat(1, 2), rat(-3, 4), br);
        for (int iter = 0; iter < 100; ++iter) {
            const auto [x1, x2] = rng.point(cs.profile);
            CHECK(verify_E_quadratic(cs, x1, x2) == Rat(0));
            const auto [y1, y2] = rng.point(cc.profile);
            CHECK(verify_E_quadratic(cc, y1, y2) == Rat(0));
        }
    }
}

TEST_CASE("E quadratic, branch-free form: exact zeros for generic profiles") {
    RatRng rng(0xff51afd7ed558ccdull);
    const auto quad = weierstrass_family(rat(1, 4), rat(2, 3));
    const auto cub = general_cubic_family(rat(-1, 2), rat(2, 9), rat(1, 7));
    for (ExponentProfile pr : {ExponentProfile{2, 0, 2, 0}, ExponentProfile{1, 0, 1, 0},
                               ExponentProfile{2, 1, 2, 1}, ExponentProfile{3, 0, 1, 0}}) {
        for (const auto* fam : {&quad, &cub}) {
            const auto cs = thm1_coefficients(pr, fam->A, fam->C, fam->P,
                                              BFunction::from_poly(fam->B), Branch::plus);
            for (int iter = 0; iter < 25; ++iter) {
                const auto [x1, x2] = rng.point(pr);
                const auto both = verify_E_formal(cs, x1, x2);
                CHECK(both[0] == Rat(0));
                CHECK(both[1] == Rat(0));
            }
        }
    }
}

TEST_CASE("q_i^2 = p_i r_i and branch distinctness") {
    RatRng rng(0x2127599bf4325c37ull);
    const auto plus = modal_set(rat(5, 3), rat(-1, 6), Branch::plus);
    const auto minus = modal_set(rat(5, 3), rat(-1, 6), Branch::minus);
    for (int iter = 0; iter < 50; ++iter) {
        const auto [x1, x2] = rng.point(plus.profile);
        const auto cv = plus.eval(x1, x2);
        CHECK(cv.q1 * cv.q1 == cv.p1 * cv.r1);
        CHECK(cv.q2 * cv.q2 == cv.p2 * cv.r2);
        const auto cm = minus.eval(x1, x2);
        if (plus.B(x1, x2) != Rat(0)) CHECK(cv.E != cm.E);
    }
}

TEST_CASE("closed forms: symmetric-square profile, plus branch") {
    // E, F pinned to the catalog forms; G's constant term measures as -g3/2
    // where the transcribed reference display shows +g3/2 (docs/findings.md).
    RatRng rng(0x9e3779b185ebca87ull);
    const Rat g2 = rat(7, 5), g3 = rat(-3, 8);
    const auto cs = modal_set(g2, g3, Branch::plus);
    for (int iter = 0; iter < 100; ++iter) {
        const auto [x1, x2] = rng.point(cs.profile);
        const Rat S = x1 + x2;
        const auto cv = cs.eval(x1, x2);
        CHECK(cv.p1 == 1 / (S * S));
        CHECK(cv.p2 == 1 / (S * S));
        CHECK(cv.q1 == x1 * x1 / (S * S));
        CHECK(cv.q2 == x2 * x2 / (S * S));
        CHECK(cv.r1 == x1 * x1 * x1 * x1 / (S * S));
        CHECK(cv.r2 == x2 * x2 * x2 * x2 / (S * S));
        CHECK(cv.E == 2 / S);
        CHECK(cv.F == (4 * x1 * x2 - g2) / (4 * S));
        CHECK(cv.G == -x1 * x2 * g2 / (2 * S) - g3 / 2);
    }
}

TEST_CASE("closed forms: linear profile, minus branch") {
    RatRng rng(0xe7037ed1a0b428dbull);
    const Rat a = rat(2, 3), b = rat(-1, 4), c = rat(5, 7);
    const auto cs = cubic_set(a, b, c, Branch::minus);
    for (int iter = 0; iter < 100; ++iter) {
        const auto [x1, x2] = rng.point(cs.profile);
        const auto cv = cs.eval(x1, x2);
        CHECK(cv.p1 == Rat(1));
        CHECK(cv.p2 == Rat(1));
        CHECK(cv.q1 == x1);
        CHECK(cv.q2 == x2);
        CHECK(cv.r1 == x1 * x1);
        CHECK(cv.r2 == x2 * x2);
        CHECK(cv.E == 2 * x1 + 2 * x2 + a);
        CHECK(cv.F == -x1 * x2 + b / 2);
        CHECK(cv.G == c);
    }
}

TEST_CASE("closed forms: linear profile, plus branch") {
    // E and G match the transcribed reference display; the b- and c-group of
    // F measures with a minus sign where the display shows plus
    // (docs/findings.md).
    RatRng rng(0xbf58476d1ce4e5b9ull);
    const Rat a = rat(-1, 2), b = rat(3, 5), c = rat(2, 7);
    const auto cs = cubic_set(a, b, c, Branch::plus);
    for (int iter = 0; iter < 100; ++iter) {
        const auto [x1, x2] = rng.point(cs.profile);
        const Rat S = x1 + x2, d2 = (x1 - x2) * (x1 - x2);
        const auto cv = cs.eval(x1, x2);
        CHECK(cv.E == (2 * S * (x1 * x1 + x2 * x2) + a * S * S + 2 * b * S + 4 * c) / d2);
        CHECK(cv.F == -(2 * x1 * x2 * (3 * x1 * x1 + 2 * x1 * x2 + 3 * x2 * x2) +
                        4 * a * x1 * x2 * S + b * (x1 * x1 + 6 * x1 * x2 + x2 * x2) +
                        4 * c * S) /
                          (2 * d2));
        CHECK(cv.G == (4 * x1 * x1 * x2 * x2 * (S + a) + 2 * b * x1 * x2 * S + c * S * S) / d2);
    }
}

TEST_CASE("B function: square-root source") {
    const auto fam = weierstrass_family(Rat(0), Rat(0));
    // 4AC + 4 P1 P2 at (1,2) is 144: the rational square root is exact.
    const auto bp = BFunction::from_sqrt(fam.A, fam.C, fam.P, +1);
    const auto bm = BFunction::from_sqrt(fam.A, fam.C, fam.P, -1);
    CHECK(bp(Rat(1), Rat(2)) == Rat(12));
    CHECK(bm(Rat(1), Rat(2)) == Rat(-12));
    CHECK(bp.square(Rat(1), Rat(2)) == Rat(144));
    // Catalog B at the same point is -12: the minus sign branch of the root.
    CHECK(BFunction::from_poly(fam.B)(Rat(1), Rat(2)) == Rat(-12));

    // Complex evaluation keeps B^2 = 4AC + 4 P1 P2.
    const cplx z1(0.7, 0.3), z2(-1.1, 0.4);
    const cplx bv = bp(z1, z2);
    CHECK(std::abs(bv * bv - bp.square(z1, z2)) <= 1e-12);

    // For catalog families 4AC + 4 P1 P2 is the square of a polynomial, so
    // rational points always have rational roots. A mismatched P breaks
    // that: 4*1*4 + 4*1*8 = 48 at (1,2), and the rational mode must refuse.
    const auto cube = UniPoly<Rat>::from_coeffs({Rat(0), Rat(0), Rat(0), Rat(1)});
    const auto bad = BFunction::from_sqrt(fam.A, fam.C, cube, +1);
    CHECK_THROWS_AS(bad(Rat(1), Rat(2)), std::domain_error);
}
