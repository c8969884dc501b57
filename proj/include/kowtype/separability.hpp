#pragma once

#include "kowtype/poly.hpp"

#include "json.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace kow {

// One discriminant's certified factorization D = multiplier * f1 * f2 with
// monic factors; the multiplier carries all scale.
struct FactorPair {
    UniPoly<Rat> factor1; // univariate in the first remaining variable
    UniPoly<Rat> factor2; // univariate in the second remaining variable
    Rat multiplier = 0;
    bool exact_identity_holds = false;
    bool degenerate_quadratic = false;
};

struct SeparabilityReport {
    FactorPair in_s, in_x1, in_x2; // keyed by the eliminated variable
    bool is_separable = false;
    // Normalized (monic) factors of all three discriminants coincide.
    bool is_strong = false;
    // Additionally all three multipliers agree, so the raw factorizations
    // coincide without any scaling convention.
    bool is_strong_raw = false;
    std::string normalization = "monic factors, scalar multiplier";
};

// Certified product split of a bivariate polynomial. Throws NotSeparable when
// no section-derived candidate verifies, AllSectionsDegenerate when every
// sampled section vanishes (in particular for the zero polynomial).
std::tuple<UniPoly<Rat>, UniPoly<Rat>, Rat> factor_as_product(const BiPoly<Rat>& D);

// Runs discriminant_in + factor_as_product over all three variables.
SeparabilityReport check_separable(const TriQuad<Rat>& F);

// At the surface points (x1, x2, s*) with s* solving F(x1, x2, s) = 0:
// residuals |(dF/dv)^2 - D_v F| for v in {s, x1, x2}, three per root.
// Degenerate (leading-coefficient-zero) sections contribute only where a
// root still exists.
std::vector<double> surface_gradient_check(const TriQuad<Rat>& F, const cplx& x1,
                                           const cplx& x2);

// Exact-rational variant; returns entries only when the s-roots are rational
// (discriminant a perfect square), empty otherwise.
std::vector<Rat> surface_gradient_check(const TriQuad<Rat>& F, const Rat& x1, const Rat& x2);

nlohmann::json to_json(const FactorPair& fp, const std::string& var1, const std::string& var2);
nlohmann::json to_json(const SeparabilityReport& rep);

} // namespace kow
