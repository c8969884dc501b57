#include "kowtype/catalog.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace kow {

namespace {

constexpr cplx I{0.0, 1.0};

// Cancellation-stable complex quadratic roots of a z^2 + b z + c.
std::array<cplx, 2> quadratic_roots(const cplx& a, const cplx& b, const cplx& c) {
    cplx root = std::sqrt(b * b - 4.0 * a * c);
    if ((std::conj(b) * root).real() < 0.0) root = -root;
    const cplx q = -(b + root) / 2.0;
    return {q / a, c / q};
}

void check_dim(SystemId id, const StateVec& y) {
    if (y.size() != state_dim(id))
        throw ArityMismatch("state has " + std::to_string(y.size()) + " components, chart needs " +
                            std::to_string(state_dim(id)));
}

// The auxiliary function m of the two-parameter system, transcribed term by
// term. Its denominator carries the bracket (x2^2 r + g3m)^2 e1 - (x1^2 r +
// g3m)^2 e2, which vanishes on a codimension-one set.
cplx s2_m(const std::array<cplx, 6>& z, double g2, const cplx& g3) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    const cplx x1_2 = x1 * x1, x1_3 = x1_2 * x1, x1_4 = x1_3 * x1, x1_5 = x1_4 * x1,
               x1_6 = x1_5 * x1;
    const cplx x2_2 = x2 * x2, x2_3 = x2_2 * x2, x2_4 = x2_3 * x2, x2_5 = x2_4 * x2,
               x2_6 = x2_5 * x2;
    const cplx S = x1 + x2, D = x1 - x2;
    const cplx gm2 = gm * gm, gm3 = gm2 * gm, r2 = r * r, r3 = r2 * r;
    const cplx bracket = (x2_2 * r + gm) * (x2_2 * r + gm) * e1 - (x1_2 * r + gm) * (x1_2 * r + gm) * e2;

    const cplx den = 4.0 * I * S * S * D * D * D * bracket;
    const cplx t_g2 =
        S * S * S *
        (2.0 * x1_2 * x2_2 * S * S * r3 +
         gm * (6.0 * x1_2 * x2 * (1.0 + x2) + 4.0 * x1 * x2 * (x1_2 + x2_2) + 5.0 * x2_4 -
               3.0 * x2_2 + 2.0 * x1_4) * r2 +
         2.0 * gm2 * (5.0 * (x1_2 + x2_2) + 2.0 * x1 * x2) * r + 8.0 * gm3) *
        g2;
    const cplx t_g3 =
        (8.0 * x1_2 * x2_2 * (x1_2 + x2_2) * S * S * r3 +
         8.0 * gm *
             (2.0 * x2_6 - x1_2 * x2_2 + x1_6 + 2.0 * x1_3 * x2_2 + 3.0 * x1_4 * x2_2 +
              2.0 * x2_3 * x1_2 - x1 * x2_3 - x2_4 + 2.0 * x1_4 * x2 + 3.0 * x2_5 * x1 +
              2.0 * x1_5 * x2 + 4.0 * x2_4 * x1_2 + 6.0 * x2_3 * x1_3) *
             r2 +
         8.0 * gm2 *
             (4.0 * x2_4 + 4.0 * x1_2 * x2_2 - x2_2 + 6.0 * x1_3 * x2 + 6.0 * x1 * x2_3 +
              3.0 * x1_4 + 2.0 * x2 * x1_2) *
             r +
         16.0 * gm3 * S * S) *
        g3;
    const cplx t_0 =
        -4.0 * S * S * S *
        (8.0 * r3 * x1_4 * x2_4 +
         2.0 * x1 * x2_2 * gm *
             (-2.0 * x1_2 * x2 + 5.0 * x1 * x2_2 - 2.0 * x2 + 2.0 * x2_3 + 5.0 * x1_3 +
              4.0 * x1_2) *
             r2 +
         gm2 *
             (2.0 * x1_4 + 4.0 * x1_3 * x2 + x2_4 + x2_2 - 2.0 * x1_2 * x2 + 4.0 * x1 * x2_3 +
              14.0 * x1_2 * x2_2) *
             r +
         2.0 * gm3 * S * S) ;

    return S * r * I + (t_g2 + t_g3 + t_0) / den;
}

std::array<cplx, 6> f_s1_complex(const std::array<cplx, 6>& z, double g2) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    const cplx S2 = (x1 + x2) * (x1 + x2);
    return {
        -0.5 * I * (x1 * x1 * r + gm),
        +0.5 * I * (x2 * x2 * r + gm),
        -I * (x1 + x2) * r * e1,
        +I * (x1 + x2) * r * e2,
        0.5 * I * (x1 * x1 - x2 * x2 + 2.0 * e2 * x1 - 2.0 * e1 * x2) / S2,
        -0.125 * I * (g2 * (x1 * x1 - x2 * x2) + 8.0 * e2 * x1 * x1 * x1 - 8.0 * e1 * x2 * x2 * x2) /
            S2,
    };
}

std::array<cplx, 6> f_s2(const std::array<cplx, 6>& z, double g2, const cplx& g3) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    const cplx m = s2_m(z, g2, g3);
    const cplx x1_2 = x1 * x1, x1_3 = x1_2 * x1, x1_4 = x1_3 * x1;
    const cplx x2_2 = x2 * x2, x2_3 = x2_2 * x2, x2_4 = x2_3 * x2;
    const cplx S = x1 + x2, D = x1 - x2;
    const cplx D3 = D * D * D, Dm3 = (x2 - x1) * (x2 - x1) * (x2 - x1);

    const cplx dr = -I * e1 * (r * (x2 - x1) - I * m) / (2.0 * S * S * r) -
                    I * e2 * (r * (x2 - x1) + I * m) / (2.0 * S * S * r) +
                    I * g2 * (3.0 * (x1_2 + x2_2) * r - 2.0 * x1 * x2 * r + 4.0 * gm) /
                        (4.0 * Dm3 * S * r) +
                    2.0 * I * ((x1_2 - x1 * x2 + x2_2) * r + gm) * g3 / (r * S * S * Dm3) -
                    I * ((x1_4 + x2_4 + 6.0 * x1_2 * x2_2) * r + 2.0 * S * S * gm) /
                        (2.0 * Dm3 * S * r);

    const cplx dgm =
        I * (S * x2 * r + m * I * x2 + 2.0 * gm) * x2_3 * e1 / (gm * S * S) -
        I * (S * x1 * r + m * I * x1 + 2.0 * gm) * x1_3 * e2 / (gm * S * S) -
        I * (r * x1 * x2 + gm) * (x1 - I * x2) * (x1 + I * x2) * x1 * x2 * g3 /
            (gm * S * S * D3) -
        I * ((x1_4 + 6.0 * x1_2 * x2_2 + x2_4) * gm + 2.0 * x1_2 * x2_2 * S * S * r) * g2 /
            (8.0 * gm * S * D3) +
        I * (3.0 * (x1_2 + x2_2) * gm - 2.0 * x1 * x2 * gm + 4.0 * x1_2 * x2_2 * r) * x1_2 *
            x2_2 / (gm * S * D3);

    return {
        -0.5 * I * (x1_2 * r + gm), +0.5 * I * (x2_2 * r + gm), -m * e1, +m * e2, dr, dgm,
    };
}

std::array<cplx, 6> f_s3(const std::array<cplx, 6>& z) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    return {
        -0.5 * I * (r * x1 + gm),
        +0.5 * I * (r * x2 + gm),
        -I * r * e1,
        +I * r * e2,
        0.5 * I * (x2 - x1 + e2 - e1),
        0.5 * I * (e1 * x2 - e2 * x1),
    };
}

std::array<cplx, 4> s1_relations(const std::array<cplx, 6>& z, double g2, const cplx& g3,
                                 const cplx& k2) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    const cplx S = x1 + x2, S2 = S * S;
    const cplx x1_2 = x1 * x1, x2_2 = x2 * x2;
    const cplx x1_4 = x1_2 * x1_2, x2_4 = x2_2 * x2_2;
    return {
        r * r - 2.0 / S - (e1 + e2) / S2,
        r * gm - (4.0 * x1 * x2 - g2) / (4.0 * S) + (x2_2 * e1 + x1_2 * e2) / S2,
        gm * gm + x1 * x2 * g2 / (2.0 * S) - (x2_4 * e1 + x1_4 * e2) / S2 - g3 / 2.0,
        e1 * e2 - k2,
    };
}

std::array<cplx, 4> s2_relations(const std::array<cplx, 6>& z, double g2, const cplx& g3,
                                 const cplx& k2) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    const cplx S = x1 + x2;
    const cplx x1_2 = x1 * x1, x2_2 = x2 * x2;
    const cplx D2 = (x1_2 - x2_2) * (x1_2 - x2_2);
    const cplx S2 = S * S, S3 = S2 * S;
    return {
        r * r - (2.0 * S * (x1_2 + x2_2 - g2 / 2.0) - 2.0 * g3) / D2 - (e1 + e2) / S2,
        r * gm - (S3 * g2 + 4.0 * (x1_2 + x2_2) * g3 - 4.0 * x1 * x2 * S3) / (4.0 * D2) +
            (x2_2 * e1 + x1_2 * e2) / S2,
        gm * gm -
            (-x1 * x2 * S * (x1_2 + x2_2) * g2 - (x1_2 + x2_2) * (x1_2 + x2_2) * g3 +
             8.0 * x1_2 * x1 * x2_2 * x2 * S) /
                (2.0 * D2) +
            (x2_2 * x2_2 * e1 + x1_2 * x1_2 * e2) / S2,
        e1 * e2 - k2,
    };
}

std::array<cplx, 4> s3_integrals(const std::array<cplx, 6>& z) {
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    return {
        r * r - 2.0 * (x1 + x2) - e1 - e2,
        2.0 * (r * gm + x1 * x2 + x2 * e1 + x1 * e2),
        gm * gm - x2 * x2 * e1 - x1 * x1 * e2,
        e1 * e2,
    };
}

// Uniform doubles in [0,1) from the top 53 bits; identical across platforms.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }
};

cplx read_scalar(const nlohmann::json& j, const std::string& location) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw ConfigError("expected a number or [re, im]", location);
}

nlohmann::json write_scalar(const cplx& z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
}

} // namespace

std::string_view system_name(SystemId id) {
    switch (id) {
        case SystemId::S1_REAL: return "S1_REAL";
        case SystemId::S1_COMPLEX: return "S1_COMPLEX";
        case SystemId::S2_TWOPARAM: return "S2_TWOPARAM";
        case SystemId::S3_CUBIC: return "S3_CUBIC";
    }
    return "";
}

std::optional<SystemId> system_from_name(std::string_view name) {
    for (SystemId id : {SystemId::S1_REAL, SystemId::S1_COMPLEX, SystemId::S2_TWOPARAM,
                        SystemId::S3_CUBIC})
        if (name == system_name(id)) return id;
    return std::nullopt;
}

std::size_t state_dim(SystemId id) { return id == SystemId::S1_REAL ? 6 : 12; }

bool is_complex_chart(SystemId id) { return id != SystemId::S1_REAL; }

std::array<cplx, 6> unpack(const StateVec& y) {
    if (y.size() != 12) throw ArityMismatch("complex chart needs 12 reals");
    std::array<cplx, 6> z;
    for (std::size_t i = 0; i < 6; ++i) z[i] = cplx(y[2 * i], y[2 * i + 1]);
    return z;
}

StateVec pack(const std::array<cplx, 6>& z) {
    StateVec y(12);
    for (std::size_t i = 0; i < 6; ++i) {
        y[2 * i] = z[i].real();
        y[2 * i + 1] = z[i].imag();
    }
    return y;
}

std::string_view integral_kind_name(IntegralKind kind) {
    switch (kind) {
        case IntegralKind::unclassified: return "unclassified";
        case IntegralKind::first_integral: return "first_integral";
        case IntegralKind::invariant_relation: return "invariant_relation";
        case IntegralKind::not_invariant: return "not_invariant";
    }
    return "";
}

void require_nonsingular(SystemId id, const SystemParams& params, const StateVec& y) {
    check_dim(id, y);
    const double eps = params.eps_sing;
    auto guard = [&](double mag, const char* what) {
        if (mag < eps)
            throw SingularState(std::string(what) + " below eps_sing on " +
                                std::string(system_name(id)));
    };
    switch (id) {
        case SystemId::S1_REAL:
            guard(std::abs(y[0]), "|p|");
            return;
        case SystemId::S1_COMPLEX: {
            const auto z = unpack(y);
            guard(std::abs(z[0] + z[1]), "|x1+x2|");
            return;
        }
        case SystemId::S2_TWOPARAM: {
            const auto z = unpack(y);
            guard(std::abs(z[0] + z[1]), "|x1+x2|");
            guard(std::abs(z[0] - z[1]), "|x1-x2|");
            guard(std::abs(z[4]), "|r|");
            guard(std::abs(z[5]), "|gamma3|");
            const cplx b1 = z[1] * z[1] * z[4] + z[5], b2 = z[0] * z[0] * z[4] + z[5];
            guard(std::abs(b1 * b1 * z[2] - b2 * b2 * z[3]), "|m denominator bracket|");
            return;
        }
        case SystemId::S3_CUBIC:
            return;
    }
}

StateVec vector_field(SystemId id, const SystemParams& params, const StateVec& y) {
    require_nonsingular(id, params, y);
    switch (id) {
        case SystemId::S1_REAL: {
            const double p = y[0], q = y[1], r = y[2], g1 = y[3], g2v = y[4], g3v = y[5];
            const double g2 = params.g2;
            return {
                p * q * r,
                -0.5 * ((p * p - q * q) * r + g3v),
                -0.5 * (p * q - q * (p * p + q * q) + q * g1 - p * g2v) / (p * p),
                (p * p + q * q) * q * r + 2.0 * p * r * g2v - q * g3v,
                -2.0 * p * q * q * r + p * g3v - p * r * g1,
                (g2 * p * q + 4.0 * q * (p * p + q * q) * (p * p + q * q) +
                 4.0 * q * g1 * (3.0 * p * p - q * q) + 4.0 * p * g2v * (p * p - 3.0 * q * q)) /
                    (8.0 * p * p),
            };
        }
        case SystemId::S1_COMPLEX:
            return pack(f_s1_complex(unpack(y), params.g2));
        case SystemId::S2_TWOPARAM:
            return pack(f_s2(unpack(y), params.g2, params.g3));
        case SystemId::S3_CUBIC:
            return pack(f_s3(unpack(y)));
    }
    throw ConfigError("unknown system id", "/system");
}

StateVec chart_to_complex(const StateVec& y6) {
    if (y6.size() != 6) throw ArityMismatch("real chart needs 6 reals");
    const double p = y6[0], q = y6[1], r = y6[2], g1 = y6[3], g2 = y6[4], g3 = y6[5];
    const cplx x1(p, q), x2(p, -q);
    return pack({x1, x2, x1 * x1 + cplx(g1, g2), x2 * x2 + cplx(g1, -g2), cplx(r, 0.0),
                 cplx(g3, 0.0)});
}

StateVec chart_to_real(const StateVec& z12, double tol) {
    const auto z = unpack(z12);
    const cplx x1 = z[0], x2 = z[1], e1 = z[2], e2 = z[3], r = z[4], gm = z[5];
    const double scale = 1.0 + std::abs(x1) + std::abs(e1);
    if (std::abs(x2 - std::conj(x1)) > tol * scale || std::abs(e2 - std::conj(e1)) > tol * scale ||
        std::abs(r.imag()) > tol * scale || std::abs(gm.imag()) > tol * scale)
        throw NoConsistentState("state is off the real leaf of the chart");
    const cplx a1 = e1 - x1 * x1;
    return {x1.real(), x1.imag(), r.real(), a1.real(), a1.imag(), gm.real()};
}

std::vector<IntegralValue> integral_set(SystemId id, const SystemParams& params,
                                        const StateVec& y) {
    require_nonsingular(id, params, y);
    auto named4 = [](const std::array<cplx, 4>& v, const char* n1, const char* n2, const char* n3,
                     const char* n4) {
        std::vector<IntegralValue> out(4);
        out[0] = {n1, v[0], IntegralKind::unclassified};
        out[1] = {n2, v[1], IntegralKind::unclassified};
        out[2] = {n3, v[2], IntegralKind::unclassified};
        out[3] = {n4, v[3], IntegralKind::unclassified};
        return out;
    };
    switch (id) {
        case SystemId::S1_REAL:
            return named4(s1_relations(unpack(chart_to_complex(y)), params.g2, params.g3,
                                       params.k2),
                          "r_sq", "r_gamma3", "gamma3_sq", "e1e2");
        case SystemId::S1_COMPLEX:
            return named4(s1_relations(unpack(y), params.g2, params.g3, params.k2), "r_sq",
                          "r_gamma3", "gamma3_sq", "e1e2");
        case SystemId::S2_TWOPARAM:
            return named4(s2_relations(unpack(y), params.g2, params.g3, params.k2), "r_sq",
                          "r_gamma3", "gamma3_sq", "e1e2");
        case SystemId::S3_CUBIC:
            return named4(s3_integrals(unpack(y)), "a_hat", "b_hat", "c_hat", "d_sq");
    }
    throw ConfigError("unknown system id", "/system");
}

double divergence(SystemId id, const SystemParams& params, const StateVec& y) {
    require_nonsingular(id, params, y);
    switch (id) {
        case SystemId::S1_REAL:
            return 2.0 * y[1] * y[2];
        case SystemId::S3_CUBIC:
            return 0.0;
        default:
            return fd_divergence([&](const StateVec& s) { return vector_field(id, params, s); },
                                 y);
    }
}

cplx measure_density(SystemId id, const SystemParams& params, const StateVec& y) {
    require_nonsingular(id, params, y);
    switch (id) {
        case SystemId::S1_REAL:
            return cplx(1.0 / (4.0 * y[0] * y[0]), 0.0);
        case SystemId::S1_COMPLEX: {
            const auto z = unpack(y);
            return 1.0 / ((z[0] + z[1]) * (z[0] + z[1]));
        }
        case SystemId::S2_TWOPARAM:
            throw NoKnownDensity("no invariant density is recorded for S2_TWOPARAM");
        case SystemId::S3_CUBIC:
            throw NoKnownDensity(
                "S3_CUBIC preserves the standard measure (density 1); no evaluator needed");
    }
    throw ConfigError("unknown system id", "/system");
}

StateVec sample_initial_state(SystemId id, SystemParams& params, std::uint64_t seed,
                              bool on_invariant_set) {
    Rng rng(seed);
    switch (id) {
        case SystemId::S1_REAL: {
            if (!on_invariant_set) {
                return {rng.sign() * rng.uniform(0.5, 2.0), rng.uniform(-1.5, 1.5),
                        rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                        rng.uniform(-1.0, 1.0)};
            }
            // Real leaf: x2 = conj(x1), e2 = conj(e1) keeps r and gamma3
            // real provided r^2 > 0.
            for (int attempt = 0; attempt < 100; ++attempt) {
                const double p = rng.uniform(0.7, 1.5);
                const double q = rng.sign() * rng.uniform(0.3, 1.2);
                const double k = rng.uniform(0.5, 1.0);
                const double th = rng.uniform(0.0, 6.283185307179586);
                const cplx e1 = k * std::exp(I * th);
                const cplx x1(p, q), x2(p, -q);
                const double r2 = 1.0 / p + e1.real() / (2.0 * p * p);
                if (r2 < 0.04) continue;
                const double r = std::sqrt(r2);
                const double g2 = params.g2;
                const double gm =
                    ((4.0 * (p * p + q * q) - g2) / (8.0 * p) -
                     (x2 * x2 * e1).real() / (2.0 * p * p)) /
                    r;
                params.g3 = 2.0 * (gm * gm + (p * p + q * q) * g2 / (4.0 * p) -
                                   (x2 * x2 * x2 * x2 * e1).real() / (2.0 * p * p));
                params.k2 = k * k;
                const cplx a1 = e1 - x1 * x1;
                return {p, q, r, a1.real(), a1.imag(), gm};
            }
            throw NoConsistentState("no real-leaf state found: r^2 stayed negative");
        }
        case SystemId::S1_COMPLEX: {
            if (!on_invariant_set) {
                for (int attempt = 0; attempt < 500; ++attempt) {
                    std::array<cplx, 6> z;
                    z[0] = cplx(rng.uniform(0.5, 1.5), rng.uniform(0.3, 1.0));
                    z[1] = cplx(rng.uniform(-1.5, -0.5), rng.uniform(0.3, 1.0));
                    for (std::size_t i = 2; i < 6; ++i)
                        z[i] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
                    if (std::abs(z[0] + z[1]) < 0.5) continue;
                    return pack(z);
                }
                throw NoConsistentState("no state cleared the |x1+x2| margin");
            }
            // Generic (off the real leaf) point of the invariant set: pick
            // x1, x2, e1 and the product e1 e2 = k^2, then solve the three
            // relations for r, gamma3, and the conserved g3 in turn.
            for (int attempt = 0; attempt < 500; ++attempt) {
                const cplx x1(rng.uniform(0.5, 1.5), rng.uniform(0.3, 1.0));
                const cplx x2(rng.uniform(-1.5, -0.5), rng.uniform(0.3, 1.0));
                const cplx S = x1 + x2;
                if (std::abs(S) < 0.6) continue;
                const double rho = rng.uniform(0.5, 1.2);
                const double th = rng.uniform(0.0, 6.283185307179586);
                const double k = rng.uniform(0.5, 1.0);
                const cplx e1 = rho * std::exp(I * th);
                const cplx e2 = k * k / e1;
                const cplx r2 = 2.0 / S + (e1 + e2) / (S * S);
                if (std::abs(r2) < 0.1) continue;
                cplx r = std::sqrt(r2);
                if (r.real() < 0.0) r = -r;
                const cplx gm = ((4.0 * x1 * x2 - params.g2) / (4.0 * S) -
                                 (x2 * x2 * e1 + x1 * x1 * e2) / (S * S)) /
                                r;
                if (std::abs(gm) < 0.1) continue;
                params.g3 = 2.0 * (gm * gm + x1 * x2 * params.g2 / (2.0 * S) -
                                   (x2 * x2 * x2 * x2 * e1 + x1 * x1 * x1 * x1 * e2) / (S * S));
                params.k2 = e1 * e2;
                return pack({x1, x2, e1, e2, r, gm});
            }
            throw NoConsistentState("no invariant-set state cleared the margins");
        }
        case SystemId::S2_TWOPARAM: {
            const double g2 = params.g2;
            const cplx g3 = params.g3;
            if (!on_invariant_set) {
                // Generic box draw. Margins are wider than the chart guards so
                // that small displacements of the state stay evaluable, and the
                // bracket denominator floor keeps the field magnitude moderate.
                for (int attempt = 0; attempt < 500; ++attempt) {
                    const cplx x1(rng.uniform(0.6, 1.4), rng.uniform(0.3, 1.0));
                    const cplx x2(rng.uniform(-1.4, -0.6) + 2.2, rng.uniform(-1.0, -0.3));
                    if (std::abs(x1 - x2) < 0.3 || std::abs(x1 + x2) < 0.5) continue;
                    const cplx e1 = rng.uniform(0.4, 1.2) *
                                    std::exp(I * rng.uniform(0.0, 6.283185307179586));
                    const cplx e2 = rng.uniform(0.4, 1.2) *
                                    std::exp(I * rng.uniform(0.0, 6.283185307179586));
                    const cplx r = rng.uniform(0.4, 1.2) *
                                   std::exp(I * rng.uniform(0.0, 6.283185307179586));
                    const cplx gm = rng.uniform(0.3, 1.0) *
                                    std::exp(I * rng.uniform(0.0, 6.283185307179586));
                    const cplx b1 = (x2 * x2 * r + gm), b2 = (x1 * x1 * r + gm);
                    if (std::abs(b1 * b1 * e1 - b2 * b2 * e2) < 0.05) continue;
                    return pack({x1, x2, e1, e2, r, gm});
                }
                throw NoConsistentState("no generic state cleared the margins");
            }
            for (int attempt = 0; attempt < 500; ++attempt) {
                const cplx x1(rng.uniform(0.6, 1.4), rng.uniform(0.3, 1.0));
                const cplx x2(rng.uniform(-1.4, -0.6) + 2.2, rng.uniform(-1.0, -0.3));
                if (std::abs(x1 - x2) < 0.3 || std::abs(x1 + x2) < 0.5) continue;
                const double rho = rng.uniform(0.4, 1.2);
                const double th = rng.uniform(0.0, 6.283185307179586);
                const cplx e1 = rho * std::exp(I * th);
                const cplx S = x1 + x2, S2 = S * S;
                const cplx x1_2 = x1 * x1, x2_2 = x2 * x2;
                const cplx D2 = (x1_2 - x2_2) * (x1_2 - x2_2);
                const cplx a1 = (2.0 * S * (x1_2 + x2_2 - g2 / 2.0) - 2.0 * g3) / D2;
                const cplx a2 =
                    (S * S2 * g2 + 4.0 * (x1_2 + x2_2) * g3 - 4.0 * x1 * x2 * S * S2) /
                    (4.0 * D2);
                const cplx a3 = (-x1 * x2 * S * (x1_2 + x2_2) * g2 -
                                 (x1_2 + x2_2) * (x1_2 + x2_2) * g3 +
                                 8.0 * x1_2 * x1 * x2_2 * x2 * S) /
                                (2.0 * D2);
                // Eliminating r and gamma3 from the three relations leaves
                // (a2 - pair2)^2 = (a1 + sum)(a3 - pair4): a quadratic in e2
                // whose coefficients come from three evaluations.
                auto h = [&](const cplx& e2) {
                    const cplx pair2 = (x2_2 * e1 + x1_2 * e2) / S2;
                    const cplx pair4 = (x2_2 * x2_2 * e1 + x1_2 * x1_2 * e2) / S2;
                    return (a2 - pair2) * (a2 - pair2) - (a1 + (e1 + e2) / S2) * (a3 - pair4);
                };
                const cplx h0 = h(cplx(0.0)), hp = h(cplx(1.0)), hm = h(cplx(-1.0));
                const cplx c2 = (hp + hm) / 2.0 - h0;
                const cplx c1 = (hp - hm) / 2.0;
                if (std::abs(c2) < 1e-12) continue;
                for (const cplx& e2 : quadratic_roots(c2, c1, h0)) {
                    const cplx r2 = a1 + (e1 + e2) / S2;
                    if (std::abs(r2) < 1e-3 || std::abs(e2) < 1e-3) continue;
                    cplx r = std::sqrt(r2);
                    if (r.real() < 0.0) r = -r;
                    const cplx gm = (a2 - (x2_2 * e1 + x1_2 * e2) / S2) / r;
                    if (std::abs(gm) < 0.05) continue;
                    const std::array<cplx, 6> z{x1, x2, e1, e2, r, gm};
                    const cplx b1 = x2_2 * r + gm, b2 = x1_2 * r + gm;
                    if (std::abs(b1 * b1 * e1 - b2 * b2 * e2) < 1e-3) continue;
                    const auto rel = s2_relations(z, g2, g3, e1 * e2);
                    double worst = 0.0;
                    for (const cplx& v : rel) worst = std::max(worst, std::abs(v));
                    if (worst > 1e-10) continue;
                    params.k2 = e1 * e2;
                    return pack(z);
                }
            }
            throw NoConsistentState("no two-parameter invariant-set state found");
        }
        case SystemId::S3_CUBIC: {
            std::array<cplx, 6> z;
            for (std::size_t i = 0; i < 6; ++i)
                z[i] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            // The conserved quantities are definitions here: record their
            // values so drift is measured against t = 0.
            const auto vals = s3_integrals(z);
            params.a = vals[0];
            params.b = vals[1];
            params.c = vals[2];
            params.k2 = vals[3];
            return pack(z);
        }
    }
    throw ConfigError("unknown system id", "/system");
}

nlohmann::json to_json(const SystemParams& params) {
    return nlohmann::json{{"g2", params.g2},         {"g3", write_scalar(params.g3)},
                          {"a", write_scalar(params.a)},  {"b", write_scalar(params.b)},
                          {"c", write_scalar(params.c)},  {"k2", write_scalar(params.k2)},
                          {"eps_sing", params.eps_sing}};
}

SystemParams params_from_json(const nlohmann::json& j, const std::string& location) {
    if (!j.is_object()) throw ConfigError("params must be an object", location);
    SystemParams p;
    for (const auto& [key, value] : j.items()) {
        const std::string where = location + "/" + key;
        if (key == "g2") {
            if (!value.is_number()) throw ConfigError("g2 must be a real number", where);
            p.g2 = value.get<double>();
        } else if (key == "g3") {
            p.g3 = read_scalar(value, where);
        } else if (key == "a") {
            p.a = read_scalar(value, where);
        } else if (key == "b") {
            p.b = read_scalar(value, where);
        } else if (key == "c") {
            p.c = read_scalar(value, where);
        } else if (key == "k2") {
            p.k2 = read_scalar(value, where);
        } else if (key == "k") {
            if (!value.is_number()) throw ConfigError("k must be a real number", where);
            const double k = value.get<double>();
            p.k2 = cplx(k * k, 0.0);
        } else if (key == "d") {
            if (!value.is_number()) throw ConfigError("d must be a real number", where);
            const double d = value.get<double>();
            p.k2 = cplx(d * d, 0.0);
        } else if (key == "eps_sing") {
            if (!value.is_number() || value.get<double>() <= 0.0)
                throw ConfigError("eps_sing must be a positive number", where);
            p.eps_sing = value.get<double>();
        } else {
            throw ConfigError("unknown parameter key", where);
        }
    }
    return p;
}

nlohmann::json state_to_json(SystemId id, const StateVec& y) {
    check_dim(id, y);
    return nlohmann::json{{"chart", std::string(system_name(id))}, {"values", y}};
}

StateVec state_from_json(SystemId id, const nlohmann::json& j, const std::string& location) {
    if (!j.is_object()) throw ConfigError("state must be an object", location);
    StateVec y;
    bool have_values = false;
    for (const auto& [key, value] : j.items()) {
        const std::string where = location + "/" + key;
        if (key == "chart") {
            if (!value.is_string() || value.get<std::string>() != system_name(id))
                throw ConfigError("chart does not match the requested system", where);
        } else if (key == "values") {
            if (!value.is_array()) throw ConfigError("values must be an array", where);
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (!value[i].is_number())
                    throw ConfigError("values must be numbers", where + "/" + std::to_string(i));
                y.push_back(value[i].get<double>());
            }
            have_values = true;
        } else {
            throw ConfigError("unknown state key", where);
        }
    }
    if (!have_values) throw ConfigError("state needs a values array", location);
    if (y.size() != state_dim(id))
        throw ConfigError("values has wrong length for this chart", location + "/values");
    return y;
}

nlohmann::json to_json(const IntegralValue& iv) {
    return nlohmann::json{{"name", iv.name},
                          {"value", write_scalar(iv.value)},
                          {"kind", std::string(integral_kind_name(iv.kind))}};
}

} // namespace kow
