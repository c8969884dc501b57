#pragma once

// The four cataloged dynamical systems: charts, parameters, vector fields,
// conserved quantities, divergence, measure densities, and deterministic
// initial-condition samplers. Right-hand sides are transcribed verbatim from
// the reference displays; where a display disagrees with measurement the
// discrepancy is recorded in docs/findings.md, never patched here.

#include "kowtype/errors.hpp"
#include "kowtype/rat.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kow {

enum class SystemId { S1_REAL, S1_COMPLEX, S2_TWOPARAM, S3_CUBIC };

std::string_view system_name(SystemId id);
std::optional<SystemId> system_from_name(std::string_view name);

// Real chart: 6 reals (p, q, r, gamma1, gamma2, gamma3).
// Complex charts: 6 complex slots (x1, x2, e1, e2, r, gamma3) stored as 12
// interleaved reals (re, im per slot).
std::size_t state_dim(SystemId id);
bool is_complex_chart(SystemId id);

using StateVec = std::vector<double>;

std::array<cplx, 6> unpack(const StateVec& y);
StateVec pack(const std::array<cplx, 6>& z);

// g2, g3 parameterize the S1 family and the two-parameter system; the cubic
// system's field is parameter-free. a, b, c, k2 are conserved-value records
// filled by the samplers (k2 holds the constant product e1*e2). They are
// complex-capable because complex-chart initial data yields complex
// constants; the vector fields themselves only read g2 and g3.
struct SystemParams {
    double g2 = 0.0;
    cplx g3{0.0, 0.0};
    cplx a{0.0, 0.0};
    cplx b{0.0, 0.0};
    cplx c{0.0, 0.0};
    cplx k2{0.0, 0.0};
    double eps_sing = 1e-6;
};

enum class IntegralKind { unclassified, first_integral, invariant_relation, not_invariant };

std::string_view integral_kind_name(IntegralKind kind);

// kind starts unclassified; only the verifier's classify_relation resolves
// it, and not_invariant marks relations the flow measurably fails to keep.
struct IntegralValue {
    std::string name;
    cplx value{0.0, 0.0};
    IntegralKind kind = IntegralKind::unclassified;
};

// Throws SingularState when a guarded denominator of the named system falls
// below params.eps_sing at this state. The cubic system has no guards.
void require_nonsingular(SystemId id, const SystemParams& params, const StateVec& y);

StateVec vector_field(SystemId id, const SystemParams& params, const StateVec& y);

// Real chart to complex chart: x1 = p + iq, x2 = p - iq, e1 = x1^2 + gamma1
// + i gamma2, e2 = x2^2 + gamma1 - i gamma2. The inverse rejects states off
// the real leaf (x2 != conj(x1) or e2 != conj(e1) beyond tol).
StateVec chart_to_complex(const StateVec& y6);
StateVec chart_to_real(const StateVec& z12, double tol = 1e-9);

// Residuals of the conserved relations (S1 family, two-parameter system) or
// the conserved values themselves (cubic system). The real chart is mapped
// through chart_to_complex first.
std::vector<IntegralValue> integral_set(SystemId id, const SystemParams& params,
                                        const StateVec& y);

// Analytic where known (real chart: 2qr; cubic: 0), Richardson-extrapolated
// central differences otherwise.
double divergence(SystemId id, const SystemParams& params, const StateVec& y);

// Invariant measure density where one is known. Throws NoKnownDensity for
// the two-parameter system and the cubic system (the latter preserves the
// standard measure, density 1, which needs no evaluator).
cplx measure_density(SystemId id, const SystemParams& params, const StateVec& y);

// Deterministic per seed. With on_invariant_set the dependent variables are
// solved from the conserved relations and the implied constants (g3, k2, or
// a, b, c for the cubic system) are recorded into params.
StateVec sample_initial_state(SystemId id, SystemParams& params, std::uint64_t seed,
                              bool on_invariant_set);

// Divergence of an arbitrary field by central differences, Richardson
// extrapolated from steps h and h/2.
template <class F>
double fd_divergence(F&& field, const StateVec& y, double h = 1e-5) {
    auto diverg = [&](double hh) {
        double acc = 0.0;
        StateVec yp = y, ym = y;
        for (std::size_t i = 0; i < y.size(); ++i) {
            yp[i] = y[i] + hh;
            ym[i] = y[i] - hh;
            acc += (field(yp)[i] - field(ym)[i]) / (2.0 * hh);
            yp[i] = y[i];
            ym[i] = y[i];
        }
        return acc;
    };
    const double d1 = diverg(h), d2 = diverg(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

nlohmann::json to_json(const SystemParams& params);
SystemParams params_from_json(const nlohmann::json& j, const std::string& location);

nlohmann::json state_to_json(SystemId id, const StateVec& y);
StateVec state_from_json(SystemId id, const nlohmann::json& j, const std::string& location);

nlohmann::json to_json(const IntegralValue& iv);

} // namespace kow
