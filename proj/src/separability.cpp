#include "kowtype/separability.hpp"

#include "kowtype/poly_json.hpp"

namespace kow {

namespace {

UniPoly<Rat> monic(const UniPoly<Rat>& p) {
    const int d = p.degree();
    if (d < 0) return p;
    return p.scaled(Rat(1) / p.c[d]);
}

// Quadratic a t^2 + b t + c over T; collects the root set, handling the
// degenerate linear and constant cases. Complex mode uses the cancellation-
// free form: q = -(b + r)/2 with the sqrt branch aligned to b.
template <class T>
std::vector<T> quadratic_roots(const T& a, const T& b, const T& c) {
    std::vector<T> roots;
    if (scalar_traits<T>::is_zero(a)) {
        if (!scalar_traits<T>::is_zero(b)) roots.push_back(-c / b);
        return roots;
    }
    if constexpr (std::is_same_v<T, Rat>) {
        const auto r = sqrt_exact(b * b - 4 * a * c);
        if (!r) return roots; // irrational roots: caller treats as "skip"
        roots.push_back((-b + *r) / (2 * a));
        if (*r != 0) roots.push_back((-b - *r) / (2 * a));
    } else {
        T r = std::sqrt(b * b - T(4) * a * c);
        if (std::real(std::conj(b) * r) < 0.0) r = -r;
        const T q = -(b + r) / T(2);
        if (scalar_traits<T>::is_zero(q)) {
            roots.push_back(T(0));
        } else {
            roots.push_back(q / a);
            roots.push_back(c / q);
        }
    }
    return roots;
}

// Shared body of the two surface_gradient_check overloads. Point is the pair
// (x1, x2) in the scalar field T; Conv adapts rational polynomials into T.
template <class T, class Residual, class Conv>
std::vector<Residual> gradient_residuals(const TriQuad<Rat>& F, const T& x1, const T& x2,
                                         Conv conv) {
    const auto a = F.coeff_of(Var::s, 2), b = F.coeff_of(Var::s, 1), c = F.coeff_of(Var::s, 0);
    const auto roots = quadratic_roots(conv(a)(x1, x2), conv(b)(x1, x2), conv(c)(x1, x2));

    const auto ds = discriminant_in(F, Var::s);
    const auto d1 = discriminant_in(F, Var::x1);
    const auto d2 = discriminant_in(F, Var::x2);
    const auto dFds = F.partial(Var::s);
    const auto dFdx1 = F.partial(Var::x1);
    const auto dFdx2 = F.partial(Var::x2);

    std::vector<Residual> out;
    for (const T& s : roots) {
        const T g_s = conv(dFds)(x1, x2, s);
        out.push_back(Residual(g_s * g_s - conv(ds.value)(x1, x2)));
        // Cross discriminants live over (x2, s) and (x1, s).
        const T g_1 = conv(dFdx1)(x1, x2, s);
        out.push_back(Residual(g_1 * g_1 - conv(d1.value)(x2, s)));
        const T g_2 = conv(dFdx2)(x1, x2, s);
        out.push_back(Residual(g_2 * g_2 - conv(d2.value)(x1, s)));
    }
    return out;
}

struct RatIdentity {
    const UniPoly<Rat>& operator()(const UniPoly<Rat>& p) const { return p; }
    const BiPoly<Rat>& operator()(const BiPoly<Rat>& p) const { return p; }
    const TriQuad<Rat>& operator()(const TriQuad<Rat>& p) const { return p; }
};
struct Complexify {
    UniPoly<cplx> operator()(const UniPoly<Rat>& p) const { return to_complex(p); }
    BiPoly<cplx> operator()(const BiPoly<Rat>& p) const { return to_complex(p); }
    TriQuad<cplx> operator()(const TriQuad<Rat>& p) const { return to_complex(p); }
};

} // namespace

std::tuple<UniPoly<Rat>, UniPoly<Rat>, Rat> factor_as_product(const BiPoly<Rat>& D) {
    if (D.is_zero())
        throw AllSectionsDegenerate("every section of the zero polynomial vanishes");

    bool found_section = false;
    for (int v = 1; v <= 8; ++v) {
        const UniPoly<Rat> s1 = D.section_v(Rat(v));
        if (s1.is_zero()) continue;
        for (int u = 1; u <= 8; ++u) {
            const UniPoly<Rat> s2 = D.section_u(Rat(u));
            if (s2.is_zero()) continue;
            found_section = true;
            const UniPoly<Rat> f1 = monic(s1);
            const UniPoly<Rat> f2 = monic(s2);
            // Pinned coefficient: with monic factors the multiplier must be
            // the coefficient of x1^deg(f1) x2^deg(f2).
            const Rat lambda = D.c[f1.degree()][f2.degree()];
            if (lambda == 0) continue;
            if ((D - outer(f1, f2).scaled(lambda)).is_zero()) return {f1, f2, lambda};
        }
    }
    if (!found_section)
        throw AllSectionsDegenerate("all integer sections 1..8 vanish identically");
    throw NotSeparable("no cross-section candidate verifies the product identity");
}

SeparabilityReport check_separable(const TriQuad<Rat>& F) {
    SeparabilityReport rep;
    const Var vars[3] = {Var::s, Var::x1, Var::x2};
    FactorPair* slots[3] = {&rep.in_s, &rep.in_x1, &rep.in_x2};
    for (int i = 0; i < 3; ++i) {
        const auto d = discriminant_in(F, vars[i]);
        slots[i]->degenerate_quadratic = d.degenerate_quadratic;
        try {
            auto [f1, f2, lambda] = factor_as_product(d.value);
            slots[i]->factor1 = f1;
            slots[i]->factor2 = f2;
            slots[i]->multiplier = lambda;
            slots[i]->exact_identity_holds = true;
        } catch (const NotSeparable&) {
            slots[i]->exact_identity_holds = false;
        } catch (const AllSectionsDegenerate&) {
            slots[i]->exact_identity_holds = false;
        }
    }
    rep.is_separable = rep.in_s.exact_identity_holds && rep.in_x1.exact_identity_holds &&
                       rep.in_x2.exact_identity_holds;
    if (rep.is_separable) {
        // Strong: all six monic factors are the same polynomial.
        const UniPoly<Rat>& ref = rep.in_s.factor1;
        rep.is_strong = rep.in_s.factor2 == ref && rep.in_x1.factor1 == ref &&
                        rep.in_x1.factor2 == ref && rep.in_x2.factor1 == ref &&
                        rep.in_x2.factor2 == ref;
        rep.is_strong_raw = rep.is_strong && rep.in_s.multiplier == rep.in_x1.multiplier &&
                            rep.in_s.multiplier == rep.in_x2.multiplier;
    }
    return rep;
}

std::vector<double> surface_gradient_check(const TriQuad<Rat>& F, const cplx& x1,
                                           const cplx& x2) {
    auto raw = gradient_residuals<cplx, cplx>(F, x1, x2, Complexify{});
    std::vector<double> out;
    out.reserve(raw.size());
    for (const cplx& r : raw) out.push_back(std::abs(r));
    return out;
}

std::vector<Rat> surface_gradient_check(const TriQuad<Rat>& F, const Rat& x1, const Rat& x2) {
    return gradient_residuals<Rat, Rat>(F, x1, x2, RatIdentity{});
}

nlohmann::json to_json(const FactorPair& fp, const std::string& var1, const std::string& var2) {
    nlohmann::json j;
    j["factor1"] = to_json(fp.factor1, var1);
    j["factor2"] = to_json(fp.factor2, var2);
    j["multiplier"] = rat_to_string(fp.multiplier);
    j["exact_identity_holds"] = fp.exact_identity_holds;
    j["degenerate_quadratic"] = fp.degenerate_quadratic;
    return j;
}

nlohmann::json to_json(const SeparabilityReport& rep) {
    nlohmann::json j;
    j["in_s"] = to_json(rep.in_s, "x1", "x2");
    j["in_x1"] = to_json(rep.in_x1, "x2", "s");
    j["in_x2"] = to_json(rep.in_x2, "x1", "s");
    j["is_separable"] = rep.is_separable;
    j["is_strong"] = rep.is_strong;
    j["is_strong_raw"] = rep.is_strong_raw;
    j["normalization"] = rep.normalization;
    return j;
}

} // namespace kow
