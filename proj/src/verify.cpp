#include "kowtype/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include "kowtype/errors.hpp"
#include "kowtype/format.hpp"

namespace kow {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Classification thresholds on the Richardson directional derivative. The
// measured populations sit at <= 1e-10 (conserved) and >= 1 (violated);
// anything landing between the thresholds is refused, not rounded.
constexpr double kZeroBelow = 1e-5;
constexpr double kNonzeroAbove = 1e-3;
constexpr double kDerivStep = 1e-3;
constexpr double kMotionFloor = 1e-6;

std::array<cplx, 6> chart_slots(SystemId id, const StateVec& y) {
    if (is_complex_chart(id)) return unpack(y);
    return unpack(chart_to_complex(y));
}

// Complex x-velocities of a sample, read off the system's own field. The
// real chart maps through x1 = p + iq, whose time derivative is dp + i dq.
std::pair<cplx, cplx> chart_velocity(SystemId id, const SystemParams& params,
                                     const StateVec& y) {
    const StateVec f = vector_field(id, params, y);
    if (is_complex_chart(id))
        return {cplx(f[0], f[1]), cplx(f[2], f[3])};
    return {cplx(f[0], f[1]), cplx(f[0], -f[1])};
}

// Continuous branch of sqrt over a series, nearest to the linear
// extrapolation of the previous two values. A residual phase jump beyond
// pi/2 means the sampling is too coarse to follow the branch.
std::vector<cplx> sqrt_track(const std::vector<cplx>& vals,
                             const std::vector<double>& times,
                             const char* what) {
    std::vector<cplx> out(vals.size());
    if (vals.empty()) return out;
    out[0] = std::sqrt(vals[0]);
    for (std::size_t k = 1; k < vals.size(); ++k) {
        const cplx v = std::sqrt(vals[k]);
        const cplx pred = (k == 1) ? out[0] : 2.0 * out[k - 1] - out[k - 2];
        out[k] = (std::abs(v - pred) <= std::abs(-v - pred)) ? v : -v;
        if (std::abs(out[k - 1]) > 0.0 && std::abs(out[k]) > 0.0) {
            const double jump = std::abs(std::arg(out[k] / out[k - 1]));
            if (jump > kPi / 2)
                throw BranchTrackingLost(std::string(what) + " branch lost at t=" +
                                             fmt_double(times[k]),
                                         times[k]);
        }
    }
    return out;
}

BiPoly<cplx> slice_s_coeff(const TriQuad<cplx>& F, int k) {
    BiPoly<cplx> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.c[i][j] = F.c[i][j][k];
    return out;
}

// Number of leading samples that sit on the uniform sample_dt grid. The
// integrator appends the exact end time, which may fall off the grid; the
// central-difference checks only run where the spacing is uniform.
std::size_t uniform_prefix(const std::vector<double>& times, double dt) {
    if (times.size() < 2 || dt <= 0.0) return times.size();
    std::size_t n = 1;
    while (n < times.size() &&
           std::abs(times[n] - times[n - 1] - dt) <= 1e-9 * dt)
        ++n;
    return n;
}

double order_between(double coarse, double fine) {
    if (coarse <= 0.0 || fine <= 0.0) return 0.0;
    return std::log2(coarse / fine);
}

nlohmann::json cplx_json(const cplx& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

} // namespace

double DriftReport::max_drift() const {
    double m = 0.0;
    for (const DriftEntry& e : entries) m = std::max(m, e.drift);
    return m;
}

DriftReport drift_report(const Trajectory& traj, const std::vector<IntegralKind>& kinds) {
    if (traj.states.empty()) throw ConfigError("trajectory has no samples", "drift_report");
    const auto initial = integral_set(traj.id, traj.params, traj.states.front());
    if (!kinds.empty() && kinds.size() != initial.size())
        throw ConfigError("kind annotations do not match the integral count", "drift_report");
    DriftReport report;
    report.entries.resize(initial.size());
    for (std::size_t k = 0; k < initial.size(); ++k)
        report.entries[k] = {initial[k].name, initial[k].value, 0.0,
                             kinds.empty() ? initial[k].kind : kinds[k]};
    for (const StateVec& y : traj.states) {
        const auto vals = integral_set(traj.id, traj.params, y);
        for (std::size_t k = 0; k < vals.size(); ++k)
            report.entries[k].drift = std::max(
                report.entries[k].drift, std::abs(vals[k].value - report.entries[k].initial));
    }
    return report;
}

namespace {

// Richardson directional derivative of one relation residual along the
// field. Throws SingularState through from the displaced evaluations when
// the state sits too close to a guard for the step.
double relation_derivative(SystemId id, const SystemParams& params, const StateVec& y,
                           std::size_t index) {
    const StateVec X = vector_field(id, params, y);
    const auto shifted = [&](double h) {
        StateVec yp = y, ym = y;
        for (std::size_t i = 0; i < y.size(); ++i) {
            yp[i] += h * X[i];
            ym[i] -= h * X[i];
        }
        const cplx rp = integral_set(id, params, yp)[index].value;
        const cplx rm = integral_set(id, params, ym)[index].value;
        return (rp - rm) / (2.0 * h);
    };
    const cplx d = (4.0 * shifted(kDerivStep / 2) - shifted(kDerivStep)) / 3.0;
    return std::abs(d);
}

} // namespace

IntegralKind classify_relation(SystemId id, const SystemParams& params,
                               std::size_t relation_index, std::uint64_t seed) {
    {
        SystemParams probe = params;
        const StateVec y = sample_initial_state(id, probe, seed, false);
        if (relation_index >= integral_set(id, probe, y).size())
            throw ConfigError("relation index out of range", "classify_relation");
    }
    constexpr int kStates = 200;
    double generic_max = 0.0, onset_max = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const bool on_set = pass == 1;
        double& acc = on_set ? onset_max : generic_max;
        for (int k = 0; k < kStates; ++k) {
            bool measured = false;
            for (int attempt = 0; attempt < 50 && !measured; ++attempt) {
                SystemParams draw = params;
                const std::uint64_t s =
                    (seed ^ (0x9E3779B97F4A7C15ull * (k + 1 + kStates * pass))) +
                    static_cast<std::uint64_t>(attempt);
                const StateVec y = sample_initial_state(id, draw, s, on_set);
                try {
                    acc = std::max(acc, relation_derivative(id, draw, y, relation_index));
                    measured = true;
                } catch (const SingularState&) {
                    // The displaced evaluation crossed a guard; draw again.
                }
            }
            if (!measured)
                throw ClassificationFailed(
                    "could not evaluate the derivative away from the singular locus");
        }
    }
    const auto decided_zero = [](double v) { return v <= kZeroBelow; };
    const auto decided_nonzero = [](double v) { return v >= kNonzeroAbove; };
    if (!decided_zero(generic_max) && !decided_nonzero(generic_max))
        throw ClassificationFailed("generic derivative " + fmt_double(generic_max) +
                                   " falls between the decision thresholds");
    if (!decided_zero(onset_max) && !decided_nonzero(onset_max))
        throw ClassificationFailed("on-set derivative " + fmt_double(onset_max) +
                                   " falls between the decision thresholds");
    if (decided_zero(generic_max)) {
        if (decided_nonzero(onset_max))
            throw ClassificationFailed(
                "derivative vanishes generically but not on the invariant set");
        return IntegralKind::first_integral;
    }
    return decided_zero(onset_max) ? IntegralKind::invariant_relation
                                   : IntegralKind::not_invariant;
}

SeparationTrack separation_roots(const Trajectory& traj, const TriQuad<cplx>& F) {
    if (traj.states.empty())
        throw ConfigError("trajectory has no samples", "separation_roots");
    const BiPoly<cplx> A = slice_s_coeff(F, 2);
    const BiPoly<cplx> B = slice_s_coeff(F, 1);
    const BiPoly<cplx> C = slice_s_coeff(F, 0);
    SeparationTrack track;
    track.F = F;
    track.times = traj.times;
    const std::size_t n = traj.states.size();
    track.s1.resize(n);
    track.s2.resize(n);
    track.swapped.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto z = chart_slots(traj.id, traj.states[k]);
        const cplx x1 = z[0], x2 = z[1];
        const cplx a = A(x1, x2), b = B(x1, x2), c = C(x1, x2);
        if (std::abs(a) < 1e-12)
            throw DegenerateQuadratic("leading coefficient vanishes at t=" +
                                      fmt_double(traj.times[k]));
        const cplx d = std::sqrt(b * b - 4.0 * a * c);
        const cplx ra = (-b - d) / (2.0 * a);
        const cplx rb = (-b + d) / (2.0 * a);
        if (k == 0) {
            track.s1[k] = ra;
            track.s2[k] = rb;
        } else {
            cplx p1, p2;
            if (k == 1) {
                p1 = track.s1[0];
                p2 = track.s2[0];
            } else {
                p1 = 2.0 * track.s1[k - 1] - track.s1[k - 2];
                p2 = 2.0 * track.s2[k - 1] - track.s2[k - 2];
            }
            const bool keep =
                std::abs(ra - p1) + std::abs(rb - p2) <= std::abs(rb - p1) + std::abs(ra - p2);
            track.s1[k] = keep ? ra : rb;
            track.s2[k] = keep ? rb : ra;
            track.swapped[k] = keep ? 0 : 1;
            const double sep = std::abs(track.s1[k] - track.s2[k]);
            if (sep > 0.0) {
                const double moved = std::max(std::abs(track.s1[k] - track.s1[k - 1]),
                                              std::abs(track.s2[k] - track.s2[k - 1]));
                track.max_step_ratio = std::max(track.max_step_ratio, moved / sep);
            }
        }
        track.max_quadratic_residual =
            std::max({track.max_quadratic_residual, std::abs(F(x1, x2, track.s1[k])),
                      std::abs(F(x1, x2, track.s2[k]))});
    }
    return track;
}

SQuadraticFamily<cplx> separation_family(SystemId id, const SystemParams& params) {
    switch (id) {
        case SystemId::S1_REAL:
        case SystemId::S1_COMPLEX:
            // The catalog relations carry the odd coefficient with the
            // opposite sign from the separation display (docs/findings.md),
            // hence the negation of the label.
            return weierstrass_family<cplx>(cplx(params.g2, 0.0), -params.g3);
        case SystemId::S3_CUBIC:
            return general_cubic_family<cplx>(params.a, params.b, params.c);
        case SystemId::S2_TWOPARAM:
            break;
    }
    throw ConfigError("no separation family is wired for this system",
                      "separation_family");
}

VieteReport viete_residuals(const SeparationTrack& track, const Trajectory& traj,
                            const UniPoly<cplx>& P) {
    if (track.times.size() != traj.times.size())
        throw ConfigError("track does not align with the trajectory", "viete_residuals");
    const BiPoly<cplx> A = slice_s_coeff(track.F, 2);
    const BiPoly<cplx> B = slice_s_coeff(track.F, 1);
    const std::size_t n = track.times.size();
    std::vector<cplx> disc(n);
    std::vector<cplx> lhs(n);
    std::vector<cplx> avals(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto z = chart_slots(traj.id, traj.states[k]);
        disc[k] = 4.0 * P(z[0]) * P(z[1]);
        avals[k] = A(z[0], z[1]);
        lhs[k] = (track.s2[k] - track.s1[k]) * avals[k];
    }
    std::vector<cplx> root = sqrt_track(disc, track.times, "discriminant");
    // The track orients s2 - s1 along one branch; align the initial root
    // with it and let continuity carry the choice forward.
    if (!root.empty() && std::abs(lhs[0] + root[0]) < std::abs(lhs[0] - root[0]))
        for (cplx& v : root) v = -v;
    VieteReport report;
    for (std::size_t k = 0; k < n; ++k) {
        const auto z = chart_slots(traj.id, traj.states[k]);
        const cplx sum = track.s1[k] + track.s2[k] + B(z[0], z[1]) / avals[k];
        report.sum_residual = std::max(report.sum_residual, std::abs(sum));
        report.diff_residual = std::max(report.diff_residual, std::abs(lhs[k] - root[k]));
    }
    return report;
}

VelocityReport velocity_identity(const Trajectory& traj) {
    const SQuadraticFamily<cplx> fam = separation_family(traj.id, traj.params);
    VelocityReport report;
    for (const StateVec& y : traj.states) {
        const auto z = chart_slots(traj.id, y);
        const auto [v1, v2] = chart_velocity(traj.id, traj.params, y);
        const cplx d = (z[0] - z[1]) * (z[0] - z[1]);
        report.res_x1 = std::max(report.res_x1,
                                 std::abs(-4.0 * v1 * v1 - fam.P(z[0]) - d * z[2]));
        report.res_x2 = std::max(report.res_x2,
                                 std::abs(-4.0 * v2 * v2 - fam.P(z[1]) - d * z[3]));
    }
    return report;
}

namespace {

// A differential that is exactly zero contributes nothing even where the
// square root vanishes; equilibria sit on the branch locus and would
// otherwise turn into 0/0.
cplx diff_over(const cplx& ds, const cplx& root) {
    if (ds == cplx(0.0, 0.0)) return {0.0, 0.0};
    return ds / root;
}

struct QuadratureCore {
    std::vector<double> res1, res2;
    double max_res1 = 0.0, max_res2 = 0.0;
    double min_sqrt_phi = std::numeric_limits<double>::infinity();
    int sign1 = 1, sign2 = 1;
};

QuadratureCore quadrature_core(const SeparationTrack& track, double dt, const cplx& k2,
                               const UniPoly<cplx>& P) {
    const cplx k = std::sqrt(k2);
    const auto phi = [&](const cplx& s) { return P(s) * (s - k) * (s + k); };
    const std::size_t n = uniform_prefix(track.times, dt);
    QuadratureCore core;
    if (n < 3) {
        core.min_sqrt_phi = 0.0;
        return core;
    }
    std::vector<cplx> phi1(n), phi2(n);
    for (std::size_t j = 0; j < n; ++j) {
        phi1[j] = phi(track.s1[j]);
        phi2[j] = phi(track.s2[j]);
    }
    const std::vector<cplx> r1 = sqrt_track(phi1, track.times, "sqrt(Phi(s1))");
    const std::vector<cplx> r2 = sqrt_track(phi2, track.times, "sqrt(Phi(s2))");
    for (std::size_t j = 0; j < n; ++j)
        core.min_sqrt_phi = std::min({core.min_sqrt_phi, std::abs(r1[j]), std::abs(r2[j])});
    // Fix the two sign choices at the first interior sample by minimizing
    // the combined residual there.
    {
        const cplx ds1 = (track.s1[2] - track.s1[0]) / 2.0;
        const cplx ds2 = (track.s2[2] - track.s2[0]) / 2.0;
        double best = std::numeric_limits<double>::infinity();
        for (int sg1 : {1, -1})
            for (int sg2 : {1, -1}) {
                const cplx t1 = diff_over(ds1, double(sg1) * r1[1]);
                const cplx t2 = diff_over(ds2, double(sg2) * r2[1]);
                const double score =
                    std::abs(t1 + t2) +
                    std::abs(track.s1[1] * t1 + track.s2[1] * t2 - cplx(0.0, dt));
                if (score < best) {
                    best = score;
                    core.sign1 = sg1;
                    core.sign2 = sg2;
                }
            }
    }
    core.res1.reserve(n - 2);
    core.res2.reserve(n - 2);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const cplx ds1 = (track.s1[j + 1] - track.s1[j - 1]) / 2.0;
        const cplx ds2 = (track.s2[j + 1] - track.s2[j - 1]) / 2.0;
        const cplx t1 = diff_over(ds1, double(core.sign1) * r1[j]);
        const cplx t2 = diff_over(ds2, double(core.sign2) * r2[j]);
        const double v1 = std::abs(t1 + t2);
        const double v2 = std::abs(track.s1[j] * t1 + track.s2[j] * t2 - cplx(0.0, dt));
        core.res1.push_back(v1);
        core.res2.push_back(v2);
        core.max_res1 = std::max(core.max_res1, v1);
        core.max_res2 = std::max(core.max_res2, v2);
    }
    return core;
}

} // namespace

QuadratureReport quadrature_residuals(const SeparationTrack& track,
                                      const Trajectory& traj,
                                      const SystemParams& params) {
    if (track.times.size() != traj.times.size())
        throw ConfigError("track does not align with the trajectory",
                          "quadrature_residuals");
    if (traj.sample_dt <= 0.0)
        throw ConfigError("quadrature needs a uniform sample grid",
                          "quadrature_residuals");
    const SQuadraticFamily<cplx> fam = separation_family(traj.id, traj.params);
    QuadratureCore core = quadrature_core(track, traj.sample_dt, params.k2, fam.P);

    QuadratureReport report;
    report.res1 = std::move(core.res1);
    report.res2 = std::move(core.res2);
    report.max_res1 = core.max_res1;
    report.max_res2 = core.max_res2;
    report.min_sqrt_phi = core.min_sqrt_phi;
    report.sign1 = core.sign1;
    report.sign2 = core.sign2;

    report.min_motion = std::numeric_limits<double>::infinity();
    for (const StateVec& y : traj.states) {
        const auto [v1, v2] = chart_velocity(traj.id, traj.params, y);
        report.min_motion = std::min(report.min_motion, std::hypot(std::abs(v1), std::abs(v2)));
    }
    report.below_motion_floor = report.min_motion < kMotionFloor;

    // Convergence order against a rerun at half the sample spacing, from the
    // same initial state over the same span.
    const Trajectory half = integrate(traj.id, traj.params, traj.states.front(),
                                      traj.t_end, traj.tol, traj.sample_dt / 2.0,
                                      traj.reversed);
    const SeparationTrack half_track = separation_roots(half, track.F);
    const QuadratureCore half_core =
        quadrature_core(half_track, half.sample_dt, params.k2, fam.P);
    report.order1 = order_between(report.max_res1, half_core.max_res1);
    report.order2 = order_between(report.max_res2, half_core.max_res2);
    return report;
}

KowchReport kowch_residuals(const SeparationTrack& track, const Trajectory& traj,
                            const UniPoly<cplx>& P) {
    if (track.times.size() != traj.times.size())
        throw ConfigError("track does not align with the trajectory", "kowch_residuals");
    if (traj.sample_dt <= 0.0)
        throw ConfigError("the residuals need a uniform sample grid", "kowch_residuals");
    const std::size_t n = uniform_prefix(track.times, traj.sample_dt);
    KowchReport report;
    if (n < 3) return report;
    std::vector<cplx> x1(n), x2(n), p1(n), p2(n), ps1(n), ps2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto z = chart_slots(traj.id, traj.states[j]);
        x1[j] = z[0];
        x2[j] = z[1];
        p1[j] = P(z[0]);
        p2[j] = P(z[1]);
        ps1[j] = P(track.s1[j]);
        ps2[j] = P(track.s2[j]);
    }
    const std::vector<cplx> rx1 = sqrt_track(p1, track.times, "sqrt(P(x1))");
    const std::vector<cplx> rx2 = sqrt_track(p2, track.times, "sqrt(P(x2))");
    const std::vector<cplx> rs1 = sqrt_track(ps1, track.times, "sqrt(P(s1))");
    const std::vector<cplx> rs2 = sqrt_track(ps2, track.times, "sqrt(P(s2))");
    // Sixteen sign assignments are possible a priori; the first interior
    // sample picks the one the run actually follows.
    {
        const cplx dx1 = (x1[2] - x1[0]) / 2.0, dx2 = (x2[2] - x2[0]) / 2.0;
        const cplx ds1 = (track.s1[2] - track.s1[0]) / 2.0;
        const cplx ds2 = (track.s2[2] - track.s2[0]) / 2.0;
        double best = std::numeric_limits<double>::infinity();
        for (int sa : {1, -1})
            for (int sb : {1, -1})
                for (int sc : {1, -1})
                    for (int sd : {1, -1}) {
                        const cplx ta = diff_over(dx1, double(sa) * rx1[1]);
                        const cplx tb = diff_over(dx2, double(sb) * rx2[1]);
                        const cplx tc = diff_over(ds1, double(sc) * rs1[1]);
                        const cplx td = diff_over(ds2, double(sd) * rs2[1]);
                        const double score = std::abs(ta + tb - tc) + std::abs(ta - tb + td);
                        if (score < best) {
                            best = score;
                            report.sign_x1 = sa;
                            report.sign_x2 = sb;
                            report.sign_s1 = sc;
                            report.sign_s2 = sd;
                        }
                    }
    }
    report.res1.reserve(n - 2);
    report.res2.reserve(n - 2);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const cplx dx1 = (x1[j + 1] - x1[j - 1]) / 2.0, dx2 = (x2[j + 1] - x2[j - 1]) / 2.0;
        const cplx ds1 = (track.s1[j + 1] - track.s1[j - 1]) / 2.0;
        const cplx ds2 = (track.s2[j + 1] - track.s2[j - 1]) / 2.0;
        const cplx ta = diff_over(dx1, double(report.sign_x1) * rx1[j]);
        const cplx tb = diff_over(dx2, double(report.sign_x2) * rx2[j]);
        const cplx tc = diff_over(ds1, double(report.sign_s1) * rs1[j]);
        const cplx td = diff_over(ds2, double(report.sign_s2) * rs2[j]);
        const double v1 = std::abs(ta + tb - tc);
        const double v2 = std::abs(ta - tb + td);
        report.res1.push_back(v1);
        report.res2.push_back(v2);
        report.max_res1 = std::max(report.max_res1, v1);
        report.max_res2 = std::max(report.max_res2, v2);
    }
    return report;
}

nlohmann::json to_json(const DriftReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const DriftEntry& e : report.entries)
        entries.push_back({{"name", e.name},
                           {"initial", cplx_json(e.initial)},
                           {"drift", e.drift},
                           {"kind", std::string(integral_kind_name(e.kind))}});
    return {{"entries", entries}, {"max_drift", report.max_drift()}};
}

nlohmann::json to_json(const SeparationTrack& track) {
    nlohmann::json s1 = nlohmann::json::array(), s2 = nlohmann::json::array();
    nlohmann::json swapped = nlohmann::json::array();
    for (std::size_t k = 0; k < track.s1.size(); ++k) {
        s1.push_back(cplx_json(track.s1[k]));
        s2.push_back(cplx_json(track.s2[k]));
        swapped.push_back(track.swapped[k] != 0);
    }
    return {{"times", track.times},
            {"s1", s1},
            {"s2", s2},
            {"swapped", swapped},
            {"max_quadratic_residual", track.max_quadratic_residual},
            {"max_step_ratio", track.max_step_ratio}};
}

nlohmann::json to_json(const VieteReport& report) {
    return {{"sum_residual", report.sum_residual},
            {"diff_residual", report.diff_residual}};
}

nlohmann::json to_json(const VelocityReport& report) {
    return {{"res_x1", report.res_x1}, {"res_x2", report.res_x2}};
}

nlohmann::json to_json(const QuadratureReport& report) {
    return {{"max_res1", report.max_res1},
            {"max_res2", report.max_res2},
            {"order1", report.order1},
            {"order2", report.order2},
            {"min_sqrt_phi", report.min_sqrt_phi},
            {"min_motion", report.min_motion},
            {"below_motion_floor", report.below_motion_floor},
            {"sign1", report.sign1},
            {"sign2", report.sign2},
            {"res1", report.res1},
            {"res2", report.res2}};
}

nlohmann::json to_json(const KowchReport& report) {
    return {{"max_res1", report.max_res1},
            {"max_res2", report.max_res2},
            {"signs", {report.sign_x1, report.sign_x2, report.sign_s1, report.sign_s2}},
            {"res1", report.res1},
            {"res2", report.res2}};
}

void write_track_csv(const SeparationTrack& track, const QuadratureReport& quad,
                     std::ostream& out) {
    out << "t,s1_re,s1_im,s2_re,s2_im,res1,res2\n";
    for (std::size_t k = 0; k < track.times.size(); ++k) {
        out << fmt_double(track.times[k]) << "," << fmt_double(track.s1[k].real()) << ","
            << fmt_double(track.s1[k].imag()) << "," << fmt_double(track.s2[k].real()) << ","
            << fmt_double(track.s2[k].imag());
        if (k >= 1 && k - 1 < quad.res1.size())
            out << "," << fmt_double(quad.res1[k - 1]) << "," << fmt_double(quad.res2[k - 1]);
        else
            out << ",,";
        out << "\n";
    }
}

} // namespace kow
