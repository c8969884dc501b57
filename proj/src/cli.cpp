#include "kowtype/cli.hpp"

#include "kowtype/errors.hpp"
#include "kowtype/families.hpp"
#include "kowtype/separability.hpp"
#include "kowtype/theorem.hpp"
#include "kowtype/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <string_view>
#include <utility>

namespace kow {

namespace {

constexpr std::array<SystemId, 4> kAllSystems{SystemId::S1_REAL, SystemId::S1_COMPLEX,
                                              SystemId::S2_TWOPARAM, SystemId::S3_CUBIC};

// Verify targets in report order. "all" expands to the full list.
constexpr std::array<std::string_view, 5> kTargets{"integrals", "measure", "quadrature",
                                                   "separability", "theorem"};

bool known_target(std::string_view t) {
    if (t == "all") return true;
    return std::find(kTargets.begin(), kTargets.end(), t) != kTargets.end();
}

struct RatRng {
    std::mt19937_64 eng;
    explicit RatRng(std::uint64_t seed) : eng(seed) {}
    std::int64_t ival(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Rat value() { return Rat(Int(ival(-8, 8)), Int(ival(1, 5))); }
    // Point off the singular locus of the profile, with x1, x2 != 0.
    std::pair<Rat, Rat> point(const ExponentProfile& pr) {
        for (;;) {
            const Rat x1 = value(), x2 = value();
            if (x1 == 0 || x2 == 0) continue;
            auto ip = [](Rat base, int e) {
                Rat acc(1);
                for (int i = 0; i < e; ++i) acc *= base;
                return acc;
            };
            const Rat u = ip(x1, pr.m1), v = ip(x1, pr.n1);
            const Rat w = ip(x2, pr.m2), z = ip(x2, pr.n2);
            if (u * z - w * v == 0 || v * z == 0) continue;
            return {x1, x2};
        }
    }
};

UniPoly<Rat> monic_of(const UniPoly<Rat>& p) { return p.scaled(Rat(1) / p.c[p.degree()]); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Appends one target's checks; the relation field records the sense the
// status was decided by.
struct Sink {
    std::vector<CheckResult>& out;
    std::string target;
    std::string system;

    CheckResult& push(std::string name, std::string status, double measured, double threshold,
                      std::string relation, std::string note) {
        out.push_back(CheckResult{target, system, std::move(name), std::move(status), measured,
                                  threshold, std::move(relation), std::move(note)});
        return out.back();
    }
    void bound(std::string name, double measured, double threshold, std::string note = "") {
        push(std::move(name), measured <= threshold ? "pass" : "fail", measured, threshold, "<=",
             std::move(note));
    }
    void least(std::string name, double measured, double threshold, std::string note = "") {
        push(std::move(name), measured >= threshold ? "pass" : "fail", measured, threshold, ">=",
             std::move(note));
    }
    void count(std::string name, int measured, int want, std::string note = "") {
        push(std::move(name), measured == want ? "pass" : "fail", measured, want, "==",
             std::move(note));
    }
    void finding(std::string name, double measured, std::string note) {
        push(std::move(name), "finding", measured, 0.0, "", std::move(note));
    }
    void skip(std::string name, std::string note, double measured = 0.0, double threshold = 0.0,
              std::string relation = "") {
        push(std::move(name), "skipped", measured, threshold, std::move(relation),
             std::move(note));
    }
};

std::vector<SystemId> selected_systems(const RunConfig& cfg) {
    if (cfg.system) return {*cfg.system};
    return {kAllSystems.begin(), kAllSystems.end()};
}

// Verification re-integrates from a sampled state; a run that dies before
// t_end cannot certify anything, so the abort is surfaced as the cause.
void require_completed(const Trajectory& traj, const std::string& where) {
    if (traj.termination == Termination::completed) return;
    const std::string at = " at t = " + fmt(traj.times.empty() ? 0.0 : traj.times.back());
    if (traj.termination == Termination::singularity)
        throw SingularState(where + " hit the singular locus" + at);
    throw StepUnderflow(where + " stalled below the minimum step" + at);
}

void run_separability(Sink& sink, const RunConfig& cfg) {
    RatRng rng(cfg.seed ^ 0xe7037ed1a0b428dbull);

    int good = 0;
    for (int iter = 0; iter < 20; ++iter) {
        const Rat g2 = rng.value(), g3 = rng.value();
        const auto fam = weierstrass_family(g2, g3);
        const auto rep = check_separable(fam.F);
        const auto monicP = monic_of(fam.P);
        const bool ok = rep.is_separable && rep.is_strong && rep.is_strong_raw &&
                        rep.in_s.multiplier == Rat(16) && rep.in_x1.multiplier == Rat(16) &&
                        rep.in_x2.multiplier == Rat(16) && rep.in_s.factor1 == monicP &&
                        rep.in_s.factor2 == monicP && rep.in_x1.factor2 == monicP;
        good += ok ? 1 : 0;
    }
    sink.count("weierstrass family: strongly separable, all multipliers 16", good, 20,
               "exact rational discriminant identities at random (g2, g3)");

    good = 0;
    int strong = 0;
    for (int iter = 0; iter < 20; ++iter) {
        Rat a = rng.value(), b = rng.value(), c = rng.value();
        if (a == 0 && c == 0) a = 1;
        const auto fam = general_cubic_family(a, b, c);
        const auto rep = check_separable(fam.F);
        const auto monicP = monic_of(fam.P);
        const auto reflected = UniPoly<Rat>::from_coeffs({-c / 2, b / 2, -a / 2, Rat(1)});
        const bool ok = rep.is_separable && rep.in_s.multiplier == Rat(16) &&
                        rep.in_x1.multiplier == Rat(-16) && rep.in_x2.multiplier == Rat(-16) &&
                        rep.in_s.factor1 == monicP && rep.in_s.factor2 == monicP &&
                        rep.in_x1.factor1 == monicP && rep.in_x1.factor2 == reflected &&
                        rep.in_x2.factor2 == reflected;
        good += ok ? 1 : 0;
        strong += rep.is_strong_raw ? 1 : 0;
    }
    sink.count("general cubic family: separable, multipliers (16, -16, -16), reflected s-factor",
               good, 20, "exact rational discriminant identities at random (a, b, c)");
    sink.finding("general cubic family: strong form with unit multiplier",
                 static_cast<double>(strong),
                 "the transcribed reference display claims the strong form with multiplier 1; "
                 "measured multipliers split as (16, -16, -16) and the cross discriminants carry "
                 "the reflected argument; see docs/findings.md");

    const auto top = kowalevski_top_family(Rat(1), Rat(1), Rat(2), Rat(1));
    const auto rep = check_separable(top.Q);
    const auto monicP = monic_of(top.P);
    const bool top_ok = rep.is_separable && rep.in_s.multiplier == Rat(4) &&
                        rep.in_x1.multiplier == Rat(-8) && rep.in_x2.multiplier == Rat(-8) &&
                        rep.in_s.factor1 == monicP && rep.in_s.factor2 == monicP &&
                        rep.in_x1.factor1 == monicP && rep.in_x1.factor2 == top.J &&
                        rep.in_x2.factor2 == top.J;
    sink.count("heavy-top fixture: discriminants split as (4, -8, -8) with monic factors",
               top_ok ? 1 : 0, 1,
               "the cross-discriminant sign matches the display only after monic normalization "
               "of the quartic; see docs/findings.md");
}

void run_theorem(Sink& sink, const RunConfig& cfg) {
    RatRng rng(cfg.seed ^ 0x9e3779b185ebca87ull);

    struct Combo {
        const char* name;
        CoefficientSet cs;
    };
    const auto modal = weierstrass_family(rat(3, 7), rat(-2, 5));
    const auto cubic = general_cubic_family(rat(1, 3), rat(-2, 7), rat(3, 5));
    const std::array<Combo, 4> combos{
        Combo{"symmetric-square profile, plus branch",
              thm1_coefficients({2, 0, 2, 0}, modal.A, modal.C, modal.P,
                                BFunction::from_poly(modal.B), Branch::plus)},
        Combo{"symmetric-square profile, minus branch",
              thm1_coefficients({2, 0, 2, 0}, modal.A, modal.C, modal.P,
                                BFunction::from_poly(modal.B), Branch::minus)},
        Combo{"linear profile, plus branch",
              thm1_coefficients({1, 0, 1, 0}, cubic.A, cubic.C, cubic.P,
                                BFunction::from_poly(cubic.B), Branch::plus)},
        Combo{"linear profile, minus branch",
              thm1_coefficients({1, 0, 1, 0}, cubic.A, cubic.C, cubic.P,
                                BFunction::from_poly(cubic.B), Branch::minus)},
    };
    for (const Combo& combo : combos) {
        int nonzero = 0;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [x1, x2] = rng.point(combo.cs.profile);
            for (const Rat& r : verify_coefficient_system(combo.cs, x1, x2))
                nonzero += r == 0 ? 0 : 1;
            nonzero += verify_E_quadratic(combo.cs, x1, x2) == 0 ? 0 : 1;
        }
        sink.count(std::string(combo.name) + ": defining equations and the E quadratic vanish",
                   nonzero, 0, "exact rational residuals at 100 random points");
    }

    // Display comparisons at a fixed off-locus point. Residuals are exact
    // rationals; a nonzero one is a sign mismatch with the display.
    {
        const Rat g2 = rat(7, 5), g3 = rat(-3, 8);
        const auto fam = weierstrass_family(g2, g3);
        const auto cs = thm1_coefficients({2, 0, 2, 0}, fam.A, fam.C, fam.P,
                                          BFunction::from_poly(fam.B), Branch::plus);
        const Rat x1 = 1, x2 = 2, S = x1 + x2;
        const auto cv = cs.eval(x1, x2);
        const Rat g_display = -x1 * x2 * g2 / (2 * S) + g3 / 2;
        sink.finding("symmetric-square profile: sign of the constant coefficient",
                     std::abs(to_double(cv.G - g_display)),
                     "the constant coefficient measures -g3/2 where the transcribed reference "
                     "display shows +g3/2; see docs/findings.md");
    }
    {
        const Rat a = rat(-1, 2), b = rat(3, 5), c = rat(2, 7);
        const auto fam = general_cubic_family(a, b, c);
        const auto cs = thm1_coefficients({1, 0, 1, 0}, fam.A, fam.C, fam.P,
                                          BFunction::from_poly(fam.B), Branch::plus);
        const Rat x1 = 1, x2 = 2, S = x1 + x2, d2 = (x1 - x2) * (x1 - x2);
        const auto cv = cs.eval(x1, x2);
        const Rat f_display = -(2 * x1 * x2 * (3 * x1 * x1 + 2 * x1 * x2 + 3 * x2 * x2) +
                                4 * a * x1 * x2 * S - b * (x1 * x1 + 6 * x1 * x2 + x2 * x2) -
                                4 * c * S) /
                              (2 * d2);
        sink.finding("linear profile, plus branch: sign of the b and c groups of F",
                     std::abs(to_double(cv.F - f_display)),
                     "the b and c groups of F measure negated relative to the transcribed "
                     "reference display; see docs/findings.md");
    }
}

void run_measure(Sink& sink, const RunConfig& cfg, SystemId id) {
    const SystemParams params = effective_params(cfg, id);
    const int n_states = 1000;
    auto state_at = [&](int i) {
        SystemParams ps = params;
        return sample_initial_state(id, ps, cfg.seed * 1000000ull + static_cast<std::uint64_t>(i),
                                    false);
    };
    auto field = [&](const StateVec& s) { return vector_field(id, params, s); };

    switch (id) {
        case SystemId::S1_REAL: {
            auto weighted = [&](const StateVec& s) {
                StateVec f = vector_field(id, params, s);
                const double rho = 1.0 / (4.0 * s[0] * s[0]);
                for (double& v : f) v *= rho;
                return f;
            };
            double max_weighted = 0.0, max_closed = 0.0;
            for (int i = 0; i < n_states; ++i) {
                const StateVec y = state_at(i);
                max_weighted = std::max(max_weighted, std::abs(fd_divergence(weighted, y)));
                const double exact = 2.0 * y[1] * y[2];
                max_closed = std::max(max_closed, std::abs(fd_divergence(field, y) - exact));
            }
            sink.bound("continuity equation for the density 1/(4 p^2)", max_weighted, 1e-8,
                       "1000 sampled states");
            sink.bound("divergence matches its closed form 2 q r", max_closed, 1e-8,
                       "1000 sampled states");
            break;
        }
        case SystemId::S1_COMPLEX: {
            auto weighted = [&](const StateVec& s) {
                const StateVec f = vector_field(id, params, s);
                const auto z = unpack(s);
                const cplx mu = 1.0 / ((z[0] + z[1]) * (z[0] + z[1]));
                auto fz = unpack(f);
                for (auto& v : fz) v *= mu;
                return pack(fz);
            };
            double max_weighted = 0.0;
            for (int i = 0; i < n_states; ++i)
                max_weighted =
                    std::max(max_weighted, std::abs(fd_divergence(weighted, state_at(i))));
            sink.bound("continuity equation for the density 1/(x1 + x2)^2", max_weighted, 1e-8,
                       "1000 sampled states");
            break;
        }
        case SystemId::S2_TWOPARAM:
            sink.skip("invariant density", "no known density is wired for this system");
            break;
        case SystemId::S3_CUBIC: {
            double max_div = 0.0;
            for (int i = 0; i < n_states; ++i) {
                const StateVec y = state_at(i);
                max_div = std::max(max_div, std::abs(divergence(id, params, y)));
                max_div = std::max(max_div, std::abs(fd_divergence(field, y)));
            }
            sink.bound("the field is divergence free", max_div, 1e-8, "1000 sampled states");
            break;
        }
    }
}

void run_integrals(Sink& sink, const RunConfig& cfg, SystemId id) {
    SystemParams params = effective_params(cfg, id);
    const StateVec y0 = sample_initial_state(id, params, cfg.seed, true);

    std::vector<IntegralKind> kinds;
    for (std::size_t i = 0; i < 4; ++i)
        kinds.push_back(classify_relation(id, params, i, cfg.seed));
    const auto values = integral_set(id, params, y0);

    const bool pin_all = id == SystemId::S3_CUBIC;
    const bool pin_product = id == SystemId::S1_COMPLEX || id == SystemId::S2_TWOPARAM;
    const bool never_fails = id == SystemId::S1_COMPLEX;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string name = "classification: " + values[i].name;
        const std::string kind(integral_kind_name(kinds[i]));
        const bool pinned = pin_all || (pin_product && i == 3) || never_fails;
        if (kinds[i] != IntegralKind::not_invariant) {
            sink.push(name, "pass", 0.0, 0.0, "", "classified " + kind);
        } else if (pinned) {
            sink.push(name, "fail", 0.0, 0.0, "", "classified " + kind);
        } else {
            sink.finding(name, 0.0,
                         "the flow measurably fails the transcribed relation; see "
                         "docs/findings.md");
        }
    }

    const Trajectory traj = integrate(id, params, y0, cfg.t_end, cfg.tol, cfg.sample_dt);
    require_completed(traj, "integrals: " + std::string(system_name(id)));
    const DriftReport rep = drift_report(traj, kinds);

    double conserved = 0.0, failing = 0.0;
    std::string failing_names;
    for (const DriftEntry& e : rep.entries) {
        if (e.kind == IntegralKind::not_invariant) {
            failing = std::max(failing, e.drift);
            failing_names += (failing_names.empty() ? "" : ", ") + e.name;
        } else {
            conserved = std::max(conserved, e.drift);
        }
    }
    sink.bound("conserved relations hold along the flow", conserved,
               id == SystemId::S3_CUBIC ? 1e-8 : 1e-7,
               "max drift over the relations the classification marks invariant");
    if (!failing_names.empty())
        sink.finding("drift of the relations the flow fails (" + failing_names + ")", failing,
                     "see docs/findings.md");

    if (id == SystemId::S3_CUBIC) {
        const double fine = drift_report(refine(traj, 10.0), kinds).max_drift();
        const double ratio = rep.max_drift() / std::max(fine, 1e-300);
        sink.least("tolerance refinement x10 divides the drift", ratio, 10.0);
    }
}

void run_quadrature(Sink& sink, const RunConfig& cfg, SystemId id) {
    if (id == SystemId::S2_TWOPARAM) {
        sink.skip("separation battery", "no separation family is wired for this system");
        return;
    }
    if (id == SystemId::S1_REAL) {
        sink.skip("separation battery",
                  "real-chart motion crosses the degenerate locus of the separation quadratic "
                  "(x1 = x2 where q = 0) and the transcribed field fails the velocity identity; "
                  "see docs/findings.md");
        return;
    }
    SystemParams params = effective_params(cfg, id);
    const StateVec y0 = sample_initial_state(id, params, cfg.seed, true);
    // The battery is a convergence study: its grid is pinned so halving it
    // measures an order, independent of the trajectory export grid.
    const double dt = 1e-3;
    try {
        const Trajectory traj = integrate(id, params, y0, cfg.t_end, cfg.tol, dt);
        require_completed(traj, "quadrature: " + std::string(system_name(id)));
        const auto fam = separation_family(id, params);
        const SeparationTrack track = separation_roots(traj, fam.F);
        sink.bound("separation roots satisfy their quadratic", track.max_quadratic_residual,
                   1e-8);
        const VieteReport vi = viete_residuals(track, traj, fam.P);
        sink.bound("sum identity for the separation roots", vi.sum_residual, 1e-9);
        sink.bound("difference identity for the separation roots", vi.diff_residual, 1e-9);
        const VelocityReport ve = velocity_identity(traj);
        sink.bound("velocity identity on the invariant set", std::max(ve.res_x1, ve.res_x2),
                   1e-7);

        const QuadratureReport quad = quadrature_residuals(track, traj, params);
        if (quad.below_motion_floor) {
            sink.skip("quadrature relations", "the trajectory sits below the motion floor");
            sink.skip("separated differential identity",
                      "the trajectory sits below the motion floor");
        } else if (quad.min_sqrt_phi < 0.1) {
            const std::string note =
                "the track approaches the branch locus of the separation curve; derivative "
                "checks are not certified there";
            sink.skip("quadrature relations", note, quad.min_sqrt_phi, 0.1, ">=");
            sink.skip("separated differential identity", note, quad.min_sqrt_phi, 0.1, ">=");
        } else {
            sink.bound("first quadrature relation", quad.max_res1, 1e-7);
            sink.bound("second quadrature relation", quad.max_res2, 1e-7);
            sink.least("first quadrature relation: convergence order", quad.order1, 1.8);
            sink.least("second quadrature relation: convergence order", quad.order2, 1.8);

            const KowchReport kow = kowch_residuals(track, traj, fam.P);
            const Trajectory half = integrate(id, params, y0, cfg.t_end, cfg.tol, dt / 2.0);
            const KowchReport kow_half =
                kowch_residuals(separation_roots(half, fam.F), half, fam.P);
            sink.bound("separated differential identity",
                       std::max(kow.max_res1, kow.max_res2), 1e-7);
            const double order =
                std::min(std::log2(kow.max_res1 / std::max(kow_half.max_res1, 1e-300)),
                         std::log2(kow.max_res2 / std::max(kow_half.max_res2, 1e-300)));
            sink.least("separated differential identity: convergence order", order, 1.8);
        }
    } catch (const BranchTrackingLost& e) {
        sink.push("square-root branch continuity", "fail", e.t, 0.0, "", e.what());
    } catch (const DegenerateQuadratic& e) {
        sink.push("separation quadratic stays non-degenerate", "fail", 0.0, 0.0, "", e.what());
    }
}

void count_statuses(VerifyReport& report) {
    for (const CheckResult& c : report.checks) {
        if (c.status == "pass") ++report.passed;
        else if (c.status == "fail") ++report.failed;
        else if (c.status == "finding") ++report.findings;
        else ++report.skipped;
    }
}

} // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (!j.is_object()) throw ConfigError("config must be a JSON object", "/");
    for (const auto& [key, value] : j.items()) {
        const std::string where = "/" + key;
        if (key == "system") {
            if (!value.is_string())
                throw ConfigError("system must be a string id", where);
            const auto id = system_from_name(value.get<std::string>());
            if (!id)
                throw ConfigError("unknown system \"" + value.get<std::string>() + "\"", where);
            cfg.system = *id;
        } else if (key == "params") {
            cfg.params = params_from_json(value, where);
        } else if (key == "seed") {
            if (!value.is_number_unsigned())
                throw ConfigError("seed must be a non-negative integer", where);
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "on_invariant_set") {
            if (!value.is_boolean()) throw ConfigError("on_invariant_set must be a bool", where);
            cfg.on_invariant_set = value.get<bool>();
        } else if (key == "state") {
            // A bare coordinate array or the {"values": [...]} object the
            // trajectory files use.
            if (!value.is_array() && !value.is_object())
                throw ConfigError("state must be a coordinate array or a state object", where);
            cfg.state = value;
        } else if (key == "t_end") {
            if (!value.is_number() || !(value.get<double>() > 0.0))
                throw ConfigError("t_end must be a positive number", where);
            cfg.t_end = value.get<double>();
        } else if (key == "tol") {
            if (!value.is_object()) throw ConfigError("tol must be an object", where);
            TolSpec tol;
            for (const auto& [tk, tv] : value.items()) {
                if (!tv.is_number())
                    throw ConfigError("tolerance entries must be numbers", where + "/" + tk);
                const double d = tv.get<double>();
                if (tk == "rtol") tol.rtol = d;
                else if (tk == "atol") tol.atol = d;
                else if (tk == "h_init") tol.h_init = d;
                else if (tk == "h_min") tol.h_min = d;
                else if (tk == "h_max") tol.h_max = d;
                else throw ConfigError("unknown key \"" + tk + "\"", where + "/" + tk);
            }
            validate(tol, where);
            cfg.tol = tol;
        } else if (key == "sample_dt") {
            if (!value.is_number() || !(value.get<double>() > 0.0))
                throw ConfigError("sample_dt must be a positive number", where);
            cfg.sample_dt = value.get<double>();
        } else if (key == "out_dir") {
            if (!value.is_string()) throw ConfigError("out_dir must be a string", where);
            cfg.out_dir = value.get<std::string>();
        } else if (key == "targets") {
            std::vector<std::string> targets;
            if (value.is_string()) {
                targets.push_back(value.get<std::string>());
            } else if (value.is_array()) {
                for (const auto& t : value) {
                    if (!t.is_string())
                        throw ConfigError("targets must be strings", where);
                    targets.push_back(t.get<std::string>());
                }
            } else {
                throw ConfigError("targets must be a string or an array of strings", where);
            }
            for (const std::string& t : targets)
                if (!known_target(t))
                    throw ConfigError("unknown verify target \"" + t + "\"", where);
            if (targets.empty()) throw ConfigError("targets must not be empty", where);
            cfg.targets = std::move(targets);
        } else if (key == "reversed") {
            if (!value.is_boolean()) throw ConfigError("reversed must be a bool", where);
            cfg.reversed = value.get<bool>();
        } else {
            throw ConfigError("unknown key \"" + key + "\"", where);
        }
    }
    return cfg;
}

SystemParams effective_params(const RunConfig& cfg, SystemId id) {
    SystemParams params;
    if (cfg.params) {
        params = *cfg.params;
    } else {
        switch (id) {
            case SystemId::S1_REAL:
            case SystemId::S1_COMPLEX: params.g2 = 0.8; break;
            case SystemId::S2_TWOPARAM:
                params.g2 = 0.7;
                params.g3 = cplx(0.3, 0.0);
                break;
            case SystemId::S3_CUBIC: break;
        }
    }
    if (cfg.eps_sing_override) params.eps_sing = *cfg.eps_sing_override;
    return params;
}

VerifyReport run_verify(const RunConfig& cfg) {
    if (cfg.state)
        throw ConfigError("explicit initial states apply to simulate only", "/state");
    for (const std::string& t : cfg.targets)
        if (!known_target(t)) throw ConfigError("unknown verify target \"" + t + "\"", "/targets");

    auto wants = [&](std::string_view t) {
        for (const std::string& sel : cfg.targets)
            if (sel == "all" || sel == t) return true;
        return false;
    };

    VerifyReport report;
    for (const std::string_view target : kTargets) {
        if (!wants(target)) continue;
        Sink sink{report.checks, std::string(target), ""};
        if (target == "separability") {
            run_separability(sink, cfg);
        } else if (target == "theorem") {
            run_theorem(sink, cfg);
        } else {
            for (const SystemId id : selected_systems(cfg)) {
                sink.system = std::string(system_name(id));
                if (target == "integrals") run_integrals(sink, cfg, id);
                else if (target == "measure") run_measure(sink, cfg, id);
                else run_quadrature(sink, cfg, id);
            }
        }
    }
    count_statuses(report);
    return report;
}

nlohmann::json to_json(const VerifyReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : report.checks) {
        checks.push_back({{"target", c.target},
                          {"system", c.system},
                          {"name", c.name},
                          {"status", c.status},
                          {"measured", c.measured},
                          {"threshold", c.threshold},
                          {"relation", c.relation},
                          {"note", c.note}});
    }
    return {{"command", "verify"},
            {"checks", std::move(checks)},
            {"summary",
             {{"total", report.checks.size()},
              {"passed", report.passed},
              {"failed", report.failed},
              {"findings", report.findings},
              {"skipped", report.skipped}}},
            {"status", report.ok() ? "pass" : "fail"}};
}

namespace {

void print_text(const VerifyReport& report, std::ostream& out) {
    for (const CheckResult& c : report.checks) {
        const char* tag = c.status == "pass"      ? "[PASS]"
                          : c.status == "fail"    ? "[FAIL]"
                          : c.status == "finding" ? "[FIND]"
                                                  : "[SKIP]";
        out << tag << " " << c.target;
        if (!c.system.empty()) out << "/" << c.system;
        out << ": " << c.name;
        if (!c.relation.empty() && c.status == "skipped")
            out << " (measured " << fmt(c.measured) << ", gate " << c.relation << " "
                << fmt(c.threshold) << ")";
        else if (!c.relation.empty())
            out << " (measured " << fmt(c.measured) << " " << c.relation << " "
                << fmt(c.threshold) << ")";
        if (!c.note.empty()) out << "; " << c.note;
        out << "\n";
    }
    out << "verify: " << report.checks.size() << " checks: " << report.passed << " passed, "
        << report.failed << " failed, " << report.findings << " findings, " << report.skipped
        << " skipped\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open \"" + path.string() + "\" for writing", "/out_dir");
    f << content;
}

} // namespace

int cmd_catalog(bool json, std::ostream& out) {
    struct Entry {
        SystemId id;
        const char* chart;
        std::vector<std::string> parameters;
        const char* integral_role;
        const char* density;
        const char* guards;
    };
    const std::array<Entry, 4> entries{
        Entry{SystemId::S1_REAL, "real, 6 coordinates (p, q, r, gamma1, gamma2, gamma3)",
              {"g2", "g3"}, "residuals of the conserved relations", "1/(4 p^2)",
              "denominators below eps_sing reject the state"},
        Entry{SystemId::S1_COMPLEX,
              "complex, 6 slots (x1, x2, e1, e2, r, gamma3) as 12 interleaved reals",
              {"g2", "g3"}, "residuals of the conserved relations", "1/(x1 + x2)^2",
              "denominators below eps_sing reject the state"},
        Entry{SystemId::S2_TWOPARAM,
              "complex, 6 slots (x1, x2, e1, e2, r, gamma3) as 12 interleaved reals",
              {"g2", "g3"}, "residuals of the transcribed relations", "none known",
              "denominators below eps_sing reject the state"},
        Entry{SystemId::S3_CUBIC,
              "complex, 6 slots (x1, x2, e1, e2, r, gamma3) as 12 interleaved reals",
              {}, "conserved values recorded from initial data", "uniform (divergence free)",
              "none"},
    };

    nlohmann::json jout = nlohmann::json::array();
    for (const Entry& e : entries) {
        SystemParams params;
        const StateVec y = sample_initial_state(e.id, params, 0, false);
        std::vector<std::string> integrals;
        for (const auto& iv : integral_set(e.id, params, y)) integrals.push_back(iv.name);
        bool family = true;
        try {
            separation_family(e.id, params);
        } catch (const ConfigError&) {
            family = false;
        }
        if (json) {
            jout.push_back({{"name", std::string(system_name(e.id))},
                            {"chart", e.chart},
                            {"dim", state_dim(e.id)},
                            {"parameters", e.parameters},
                            {"integrals", integrals},
                            {"integral_role", e.integral_role},
                            {"density", e.density},
                            {"separation_family", family},
                            {"guards", e.guards}});
            continue;
        }
        out << system_name(e.id) << "\n";
        out << "  chart:      " << e.chart << "\n";
        out << "  parameters: ";
        if (e.parameters.empty()) {
            out << "none (a, b, c, k2 are recorded from initial data)";
        } else {
            for (std::size_t i = 0; i < e.parameters.size(); ++i)
                out << (i ? ", " : "") << e.parameters[i];
        }
        out << "\n  integrals:  ";
        for (std::size_t i = 0; i < integrals.size(); ++i) out << (i ? ", " : "") << integrals[i];
        out << " (" << e.integral_role << ")\n";
        out << "  density:    " << e.density << "\n";
        out << "  separation: " << (family ? "wired" : "none") << "\n";
        out << "  guards:     " << e.guards << "\n";
    }
    if (json) out << jout.dump(2) << "\n";
    else out << entries.size() << " systems\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, bool json, std::ostream& out, std::ostream& err) {
    try {
        const VerifyReport report = run_verify(cfg);
        if (json) out << to_json(report).dump(2) << "\n";
        else print_text(report, out);
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            write_file(std::filesystem::path(cfg.out_dir) / "verify.json",
                       to_json(report).dump(2) + "\n");
        }
        return report.ok() ? 0 : 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SingularState& e) {
        err << "singularity abort: " << e.what() << "\n";
        return 3;
    } catch (const StepUnderflow& e) {
        err << "integration stalled: " << e.what() << "\n";
        return 1;
    }
}

int cmd_simulate(const RunConfig& cfg, bool json, std::ostream& out, std::ostream& err) {
    try {
        if (!cfg.system) throw ConfigError("simulate needs a system id", "/system");
        const SystemId id = *cfg.system;
        SystemParams params = effective_params(cfg, id);
        StateVec y0;
        if (cfg.state) {
            const nlohmann::json boxed = cfg.state->is_array()
                                             ? nlohmann::json{{"values", *cfg.state}}
                                             : *cfg.state;
            y0 = state_from_json(id, boxed, "/state");
        } else {
            y0 = sample_initial_state(id, params, cfg.seed, cfg.on_invariant_set);
        }
        const Trajectory traj =
            integrate(id, params, y0, cfg.t_end, cfg.tol, cfg.sample_dt, cfg.reversed);
        const DriftReport drift = drift_report(traj);

        const std::filesystem::path dir = cfg.out_dir.empty() ? "out" : cfg.out_dir;
        std::filesystem::create_directories(dir);
        {
            std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
            if (!csv)
                throw ConfigError("cannot open \"" + (dir / "trajectory.csv").string() +
                                      "\" for writing",
                                  "/out_dir");
            write_csv(traj, csv);
        }
        write_file(dir / "trajectory.json", to_json(traj).dump(2) + "\n");
        write_file(dir / "drift.json", to_json(drift).dump(2) + "\n");

        const std::string cause(termination_name(traj.termination));
        if (json) {
            out << nlohmann::json{{"command", "simulate"},
                                  {"system", std::string(system_name(id))},
                                  {"samples", traj.times.size()},
                                  {"t_reached", traj.times.back()},
                                  {"termination", cause},
                                  {"max_drift", drift.max_drift()},
                                  {"files",
                                   {(dir / "trajectory.csv").string(),
                                    (dir / "trajectory.json").string(),
                                    (dir / "drift.json").string()}}}
                       .dump(2)
                << "\n";
        } else {
            out << "system      " << system_name(id) << "\n";
            out << "samples     " << traj.times.size() << " over t in [" << fmt(traj.times.front())
                << ", " << fmt(traj.times.back()) << "]\n";
            out << "termination " << cause << "\n";
            out << "max drift   " << fmt(drift.max_drift()) << "\n";
            out << "wrote       " << (dir / "trajectory.csv").string() << ", trajectory.json, "
                << "drift.json\n";
        }
        if (traj.termination == Termination::singularity) {
            err << "singular stop at t = " << fmt(traj.times.back())
                << "; partial trajectory written\n";
            return 3;
        }
        if (traj.termination == Termination::step_underflow) {
            err << "step underflow at t = " << fmt(traj.times.back())
                << "; partial trajectory written\n";
            return 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SingularState& e) {
        err << "singularity abort: " << e.what() << "\n";
        return 3;
    } catch (const StepUnderflow& e) {
        err << "integration stalled: " << e.what() << "\n";
        return 1;
    } catch (const NoConsistentState& e) {
        err << "sampler failed: " << e.what() << "\n";
        return 2;
    }
}

} // namespace kow
