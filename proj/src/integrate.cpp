#include "kowtype/integrate.hpp"

#include "kowtype/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace kow {

namespace {

// Dormand-Prince 5(4) tableau. The last row of a doubles as the 5th-order
// weights (FSAL: k7 of an accepted step is k1 of the next).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Stage times are not needed: every catalog field is autonomous.
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Quartic dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseStep {
    double t = 0.0, h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;

    // Continuous extension; theta = 1 must reproduce the step endpoint
    // bit-exactly, so callers shortcut that case.
    StateVec at(double theta) const {
        const std::size_t n = r1.size();
        StateVec y(n);
        const double om = 1.0 - theta;
        for (std::size_t i = 0; i < n; ++i)
            y[i] = r1[i] + theta * (r2[i] + om * (r3[i] + theta * (r4[i] + om * r5[i])));
        return y;
    }
};

void axpy(StateVec& out, const StateVec& y, double h, std::initializer_list<const StateVec*> ks,
          std::initializer_list<double> ws) {
    const std::size_t n = y.size();
    out.assign(y.begin(), y.end());
    auto k = ks.begin();
    auto w = ws.begin();
    for (; k != ks.end(); ++k, ++w)
        for (std::size_t i = 0; i < n; ++i) out[i] += h * (*w) * (**k)[i];
}

} // namespace

void validate(const TolSpec& tol, const std::string& location) {
    if (!(tol.rtol > 0.0)) throw ConfigError("rtol must be positive", location + "/rtol");
    if (!(tol.atol > 0.0)) throw ConfigError("atol must be positive", location + "/atol");
    if (!(tol.h_min > 0.0)) throw ConfigError("h_min must be positive", location + "/h_min");
    if (!(tol.h_min <= tol.h_init))
        throw ConfigError("h_init must be at least h_min", location + "/h_init");
    if (!(tol.h_init <= tol.h_max))
        throw ConfigError("h_max must be at least h_init", location + "/h_max");
}

std::string_view termination_name(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::singularity: return "singularity";
        case Termination::step_underflow: return "step_underflow";
    }
    return "";
}

std::optional<Termination> termination_from_name(std::string_view name) {
    for (Termination t :
         {Termination::completed, Termination::singularity, Termination::step_underflow})
        if (name == termination_name(t)) return t;
    return std::nullopt;
}

Trajectory integrate(SystemId id, const SystemParams& params, const StateVec& state0,
                     double t_end, TolSpec tol, double sample_dt, bool reversed) {
    validate(tol, "/tol");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive", "/t_end");
    if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive", "/sample_dt");
    require_nonsingular(id, params, state0); // SingularState at t = 0 propagates

    auto f = [&](const StateVec& y) {
        StateVec dy = vector_field(id, params, y);
        if (reversed)
            for (double& v : dy) v = -v;
        return dy;
    };

    Trajectory traj;
    traj.id = id;
    traj.params = params;
    traj.t_end = t_end;
    traj.sample_dt = sample_dt;
    traj.tol = tol;
    traj.reversed = reversed;
    traj.stats.smallest_step = std::numeric_limits<double>::infinity();
    traj.times.push_back(0.0);
    traj.states.push_back(state0);

    const std::size_t n = state0.size();
    const double t_eps = sample_dt * 1e-9;

    StateVec y = state0;
    StateVec k1 = f(y), k2, k3, k4, k5, k6, k7, ytmp, y1(n), err_vec(n);
    double t = 0.0;
    double h = std::min(tol.h_init, std::min(tol.h_max, t_end));

    // Hairer's PI controller constants for this pair.
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    const double fac1 = 0.2, fac2 = 10.0;
    double facold = 1e-4;
    bool reject_last = false;
    std::int64_t next_sample = 1;

    auto finish = [&](Termination cause) {
        if (traj.stats.accepted == 0)
            traj.stats.smallest_step = 0.0;
        traj.termination = cause;
        // Keep the last reached point so partial runs show where they
        // stopped.
        if (cause != Termination::completed && t > traj.times.back() + t_eps) {
            traj.times.push_back(t);
            traj.states.push_back(y);
        }
        return traj;
    };

    for (;;) {
        if (t >= t_end) return finish(Termination::completed);
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        if (h < tol.h_min) {
            if (traj.stats.accepted == 0)
                throw StepUnderflow("step size underflow before any progress");
            return finish(Termination::step_underflow);
        }

        // Any stage may trip a singularity guard; shrink toward the locus
        // and stop once the minimum step still fails.
        double err;
        try {
            axpy(ytmp, y, h, {&k1}, {a21});
            k2 = f(ytmp);
            axpy(ytmp, y, h, {&k1, &k2}, {a31, a32});
            k3 = f(ytmp);
            axpy(ytmp, y, h, {&k1, &k2, &k3}, {a41, a42, a43});
            k4 = f(ytmp);
            axpy(ytmp, y, h, {&k1, &k2, &k3, &k4}, {a51, a52, a53, a54});
            k5 = f(ytmp);
            axpy(ytmp, y, h, {&k1, &k2, &k3, &k4, &k5}, {a61, a62, a63, a64, a65});
            k6 = f(ytmp);
            axpy(y1, y, h, {&k1, &k3, &k4, &k5, &k6}, {a71, a73, a74, a75, a76});
            k7 = f(y1);

            err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                err_vec[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
                const double sk =
                    tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
                err += (err_vec[i] / sk) * (err_vec[i] / sk);
            }
            err = std::sqrt(err / static_cast<double>(n));
        } catch (const SingularState&) {
            if (h / 2.0 < tol.h_min) return finish(Termination::singularity);
            h /= 2.0;
            continue;
        }
        if (!std::isfinite(err)) err = 1e10;

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
            double hnew = h / fac;
            if (reject_last) hnew = std::min(hnew, h);
            reject_last = false;

            traj.stats.accepted += 1;
            traj.stats.smallest_step = std::min(traj.stats.smallest_step, h);
            traj.stats.largest_step = std::max(traj.stats.largest_step, h);

            DenseStep dense;
            dense.t = t;
            dense.h = h;
            dense.r1 = y;
            dense.r2.resize(n);
            dense.r3.resize(n);
            dense.r4.resize(n);
            dense.r5.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                dense.r2[i] = ydiff;
                dense.r3[i] = bspl;
                dense.r4[i] = ydiff - h * k7[i] - bspl;
                dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
            }

            const double t_new = last ? t_end : t + h;
            while (true) {
                const double ts = static_cast<double>(next_sample) * sample_dt;
                if (ts > t_new + t_eps) break;
                // Step endpoints reproduce bit-exactly instead of through
                // the interpolant.
                StateVec ys = (ts >= t_new - t_eps) ? y1 : dense.at((ts - t) / h);
                try {
                    require_nonsingular(id, params, ys);
                } catch (const SingularState&) {
                    // End at the last valid sample; a guard-violating state
                    // never enters the trajectory.
                    t = traj.times.back();
                    y = traj.states.back();
                    return finish(Termination::singularity);
                }
                traj.times.push_back(ts);
                traj.states.push_back(std::move(ys));
                ++next_sample;
            }

            t = t_new;
            y = y1;
            k1 = k7;
            if (last) {
                if (traj.times.back() < t_end - t_eps) {
                    traj.times.push_back(t_end);
                    traj.states.push_back(y);
                }
                return finish(Termination::completed);
            }
            h = std::min(hnew, tol.h_max);
        } else {
            reject_last = true;
            traj.stats.rejected += 1;
            h = h / std::min(1.0 / fac1, fac11 / safe);
        }
    }
}

Trajectory refine(const Trajectory& traj, double factor) {
    if (!(factor > 1.0)) throw ConfigError("refinement factor must exceed 1", "/refine/factor");
    if (traj.states.empty()) throw ConfigError("cannot refine an empty trajectory", "/refine");
    TolSpec tol = traj.tol;
    tol.rtol /= factor;
    tol.atol /= factor;
    return integrate(traj.id, traj.params, traj.states.front(), traj.t_end, tol, traj.sample_dt,
                     traj.reversed);
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    static const char* kRealCols[] = {"p", "q", "r", "gamma1", "gamma2", "gamma3"};
    static const char* kComplexCols[] = {"x1_re", "x1_im", "x2_re", "x2_im", "e1_re", "e1_im",
                                         "e2_re", "e2_im", "r_re",  "r_im",  "gamma3_re",
                                         "gamma3_im"};
    out << "t";
    const bool cx = is_complex_chart(traj.id);
    for (std::size_t i = 0; i < state_dim(traj.id); ++i)
        out << "," << (cx ? kComplexCols[i] : kRealCols[i]);
    std::vector<std::string> names;
    if (!traj.states.empty())
        for (const auto& iv : integral_set(traj.id, traj.params, traj.states.front()))
            names.push_back(iv.name);
    for (const auto& name : names) out << "," << name << "_re," << name << "_im";
    out << "\n";

    for (std::size_t row = 0; row < traj.times.size(); ++row) {
        out << fmt_double(traj.times[row]);
        for (double v : traj.states[row]) out << "," << fmt_double(v);
        for (const auto& iv : integral_set(traj.id, traj.params, traj.states[row]))
            out << "," << fmt_double(iv.value.real()) << "," << fmt_double(iv.value.imag());
        out << "\n";
    }
}

nlohmann::json to_json(const Trajectory& traj) {
    return nlohmann::json{
        {"system", std::string(system_name(traj.id))},
        {"params", to_json(traj.params)},
        {"t_end", traj.t_end},
        {"sample_dt", traj.sample_dt},
        {"reversed", traj.reversed},
        {"termination", std::string(termination_name(traj.termination))},
        {"tol",
         {{"rtol", traj.tol.rtol},
          {"atol", traj.tol.atol},
          {"h_init", traj.tol.h_init},
          {"h_min", traj.tol.h_min},
          {"h_max", traj.tol.h_max}}},
        {"stats",
         {{"accepted", traj.stats.accepted},
          {"rejected", traj.stats.rejected},
          {"smallest_step", traj.stats.smallest_step},
          {"largest_step", traj.stats.largest_step}}},
        {"times", traj.times},
        {"states", traj.states},
    };
}

Trajectory trajectory_from_json(const nlohmann::json& j, const std::string& location) {
    if (!j.is_object()) throw ConfigError("trajectory must be an object", location);
    Trajectory traj;
    bool have_system = false, have_times = false, have_states = false;
    for (const auto& [key, value] : j.items()) {
        const std::string where = location + "/" + key;
        if (key == "system") {
            const auto id = value.is_string()
                                ? system_from_name(value.get<std::string>())
                                : std::nullopt;
            if (!id) throw ConfigError("unknown system name", where);
            traj.id = *id;
            have_system = true;
        } else if (key == "params") {
            traj.params = params_from_json(value, where);
        } else if (key == "t_end") {
            if (!value.is_number()) throw ConfigError("t_end must be a number", where);
            traj.t_end = value.get<double>();
        } else if (key == "sample_dt") {
            if (!value.is_number()) throw ConfigError("sample_dt must be a number", where);
            traj.sample_dt = value.get<double>();
        } else if (key == "reversed") {
            if (!value.is_boolean()) throw ConfigError("reversed must be a boolean", where);
            traj.reversed = value.get<bool>();
        } else if (key == "termination") {
            const auto term = value.is_string()
                                  ? termination_from_name(value.get<std::string>())
                                  : std::nullopt;
            if (!term) throw ConfigError("unknown termination cause", where);
            traj.termination = *term;
        } else if (key == "tol") {
            if (!value.is_object()) throw ConfigError("tol must be an object", where);
            for (const auto& [tk, tv] : value.items()) {
                if (!tv.is_number())
                    throw ConfigError("tolerance entries must be numbers", where + "/" + tk);
                const double d = tv.get<double>();
                if (tk == "rtol") traj.tol.rtol = d;
                else if (tk == "atol") traj.tol.atol = d;
                else if (tk == "h_init") traj.tol.h_init = d;
                else if (tk == "h_min") traj.tol.h_min = d;
                else if (tk == "h_max") traj.tol.h_max = d;
                else throw ConfigError("unknown tolerance key", where + "/" + tk);
            }
            validate(traj.tol, where);
        } else if (key == "stats") {
            if (!value.is_object()) throw ConfigError("stats must be an object", where);
            for (const auto& [sk, sv] : value.items()) {
                if (!sv.is_number())
                    throw ConfigError("stats entries must be numbers", where + "/" + sk);
                if (sk == "accepted") traj.stats.accepted = sv.get<std::int64_t>();
                else if (sk == "rejected") traj.stats.rejected = sv.get<std::int64_t>();
                else if (sk == "smallest_step") traj.stats.smallest_step = sv.get<double>();
                else if (sk == "largest_step") traj.stats.largest_step = sv.get<double>();
                else throw ConfigError("unknown stats key", where + "/" + sk);
            }
        } else if (key == "times") {
            if (!value.is_array()) throw ConfigError("times must be an array", where);
            traj.times = value.get<std::vector<double>>();
            have_times = true;
        } else if (key == "states") {
            if (!value.is_array()) throw ConfigError("states must be an array", where);
            traj.states = value.get<std::vector<StateVec>>();
            have_states = true;
        } else {
            throw ConfigError("unknown trajectory key", where);
        }
    }
    if (!have_system || !have_times || !have_states)
        throw ConfigError("trajectory needs system, times, and states", location);
    if (traj.times.size() != traj.states.size())
        throw ConfigError("times and states lengths differ", location + "/states");
    for (std::size_t i = 1; i < traj.times.size(); ++i)
        if (!(traj.times[i] > traj.times[i - 1]))
            throw ConfigError("times must be strictly increasing",
                              location + "/times/" + std::to_string(i));
    for (const auto& s : traj.states)
        if (s.size() != state_dim(traj.id))
            throw ConfigError("state length does not match the chart", location + "/states");
    return traj;
}

} // namespace kow
