// Integrator: pinned behaviors of the adaptive pair, dense sampling,
// conserved-quantity drift, termination causes, and trajectory export.

#include "doctest.h"

#include "kowtype/integrate.hpp"

#include <cmath>
#include <sstream>

using namespace kow;

namespace {

const StateVec kCubicStart{1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0};

double max_integral_drift(const Trajectory& tr) {
    const auto init = integral_set(tr.id, tr.params, tr.states.front());
    double worst = 0.0;
    for (const auto& s : tr.states) {
        const auto cur = integral_set(tr.id, tr.params, s);
        for (std::size_t k = 0; k < cur.size(); ++k)
            worst = std::max(worst, std::abs(cur[k].value - init[k].value));
    }
    return worst;
}

} // namespace

TEST_CASE("equilibrium stays put with zero rejections") {
    SystemParams params;
    params.g2 = 0.0;
    const StateVec y0{1, 0, 0, 5, 0, 0};
    const Trajectory tr = integrate(SystemId::S1_REAL, params, y0, 10.0, {}, 1e-2);
    CHECK(tr.termination == Termination::completed);
    CHECK(tr.times.size() == 1001);
    CHECK(tr.stats.rejected == 0);
    for (const auto& s : tr.states) CHECK(s == y0);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 10.0);
    for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
}

TEST_CASE("cubic system conserves e1 e2 along the run") {
    SystemParams params;
    const Trajectory tr = integrate(SystemId::S3_CUBIC, params, kCubicStart, 5.0);
    CHECK(tr.termination == Termination::completed);
    for (const auto& s : tr.states) {
        const auto z = unpack(s);
        CHECK(std::abs(z[2] * z[3] - cplx(1.0)) <= 1e-9);
    }
}

TEST_CASE("time reversal returns to the start") {
    SystemParams params;
    const Trajectory fwd = integrate(SystemId::S3_CUBIC, params, kCubicStart, 2.0);
    const Trajectory bwd =
        integrate(SystemId::S3_CUBIC, params, fwd.states.back(), 2.0, {}, 1e-2, true);
    for (int i = 0; i < 12; ++i) CHECK(std::abs(bwd.states.back()[i] - kCubicStart[i]) <= 1e-7);

    SystemParams pr;
    pr.g2 = 0.3;
    const StateVec r0{1.0, 0.8, 0.5, 0.2, -0.3, 0.4};
    const Trajectory f2 = integrate(SystemId::S1_REAL, pr, r0, 2.0);
    const Trajectory b2 = integrate(SystemId::S1_REAL, pr, f2.states.back(), 2.0, {}, 1e-2, true);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(b2.states.back()[i] - r0[i]) <= 1e-7);
}

TEST_CASE("sampling density does not perturb the solution") {
    // Dense output is a pure observer: the step sequence and the final
    // state are bit-identical whether one or a thousand samples are drawn,
    // and the t_end sample comes from the step endpoint, not the
    // interpolant.
    SystemParams params;
    const Trajectory fine = integrate(SystemId::S3_CUBIC, params, kCubicStart, 3.0, {}, 1e-3);
    const Trajectory coarse = integrate(SystemId::S3_CUBIC, params, kCubicStart, 3.0, {}, 3.0);
    CHECK(coarse.times.size() == 2);
    CHECK(fine.states.back() == coarse.states.back());
    CHECK(fine.stats.accepted == coarse.stats.accepted);

    const Trajectory again = integrate(SystemId::S3_CUBIC, params, kCubicStart, 3.0, {}, 1e-3);
    CHECK(fine.times == again.times);
    CHECK(fine.states == again.states);
}

TEST_CASE("interpolated samples track a tiny-step reference") {
    // Fourth-order interpolation between fifth-order steps: against a
    // reference forced to step at most sample_dt, interior samples must
    // agree to the integration tolerance scale.
    SystemParams params;
    const Trajectory tr = integrate(SystemId::S3_CUBIC, params, kCubicStart, 1.0, {}, 1e-2);
    TolSpec tiny;
    tiny.rtol = 1e-12;
    tiny.atol = 1e-14;
    tiny.h_max = 1e-2;
    const Trajectory ref = integrate(SystemId::S3_CUBIC, params, kCubicStart, 1.0, tiny, 1e-2);
    REQUIRE(tr.times.size() == ref.times.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        for (int c = 0; c < 12; ++c)
            CHECK(std::abs(tr.states[i][c] - ref.states[i][c]) <= 1e-8);
}

TEST_CASE("halving rtol never worsens the final state") {
    SystemParams params;
    TolSpec ref_tol;
    ref_tol.rtol = 1e-13;
    ref_tol.atol = 1e-15;
    const StateVec ref =
        integrate(SystemId::S3_CUBIC, params, kCubicStart, 3.0, ref_tol, 3.0).states.back();
    auto final_err = [&](double rtol) {
        TolSpec tol;
        tol.rtol = rtol;
        tol.atol = rtol * 1e-2;
        const StateVec got =
            integrate(SystemId::S3_CUBIC, params, kCubicStart, 3.0, tol, 3.0).states.back();
        double err = 0.0;
        for (int i = 0; i < 12; ++i) err = std::max(err, std::abs(got[i] - ref[i]));
        return err;
    };
    double prev = final_err(1e-6);
    for (double rtol : {5e-7, 2.5e-7, 1.25e-7, 6.25e-8}) {
        const double cur = final_err(rtol);
        CHECK(cur <= 2.0 * prev);
        prev = cur;
    }
}

TEST_CASE("tolerance refinement divides conserved-quantity drift") {
    SystemParams params;
    TolSpec tol;
    tol.rtol = 1e-8;
    tol.atol = 1e-10;
    const Trajectory tr = integrate(SystemId::S3_CUBIC, params, kCubicStart, 5.0, tol, 1e-2);
    const Trajectory fine = refine(tr, 10.0);
    CHECK(fine.termination == tr.termination);
    const double d0 = max_integral_drift(tr), d1 = max_integral_drift(fine);
    CHECK(d1 <= d0);
    CHECK(d0 / d1 >= 10.0);
    CHECK_THROWS_AS(refine(tr, 1.0), ConfigError);
}

TEST_CASE("termination causes") {
    SUBCASE("singular start throws") {
        SystemParams params;
        CHECK_THROWS_AS(integrate(SystemId::S1_REAL, params, {1e-9, 1, 1, 0, 0, 0}, 1.0),
                        SingularState);
    }
    SUBCASE("guard trip mid-run ends early with valid samples") {
        SystemParams params;
        params.g2 = 0.0;
        params.eps_sing = 0.5;
        const Trajectory tr =
            integrate(SystemId::S1_REAL, params, {0.6, 1.0, -1.0, 0, 0, 0}, 10.0, {}, 1e-2);
        CHECK(tr.termination == Termination::singularity);
        CHECK(tr.times.back() < 10.0);
        for (const auto& s : tr.states) CHECK(std::abs(s[0]) >= 0.5);
    }
    SUBCASE("unguarded decay to the singular locus underflows the step") {
        // With the guard effectively disabled, p decays through zero
        // scale; 1/p^2 terms blow up and the controller collapses h.
        SystemParams params;
        params.g2 = 0.0;
        params.eps_sing = 1e-300;
        const Trajectory tr =
            integrate(SystemId::S1_REAL, params, {0.6, 1.0, -1.0, 0, 0, 0}, 50.0, {}, 1e-2);
        CHECK(tr.termination == Termination::step_underflow);
        CHECK(tr.times.back() < 50.0);
        CHECK(tr.times.back() > 1.0);
    }
}

TEST_CASE("configuration rejection") {
    SystemParams params;
    TolSpec bad;
    bad.rtol = 0.0;
    CHECK_THROWS_AS(integrate(SystemId::S3_CUBIC, params, kCubicStart, 1.0, bad), ConfigError);
    bad = TolSpec{};
    bad.h_min = 1e-2;
    bad.h_init = 1e-3;
    CHECK_THROWS_AS(integrate(SystemId::S3_CUBIC, params, kCubicStart, 1.0, bad), ConfigError);
    CHECK_THROWS_AS(integrate(SystemId::S3_CUBIC, params, kCubicStart, -1.0), ConfigError);
    CHECK_THROWS_AS(integrate(SystemId::S3_CUBIC, params, kCubicStart, 1.0, {}, 0.0),
                    ConfigError);
}

TEST_CASE("step statistics are populated") {
    SystemParams params;
    const Trajectory tr = integrate(SystemId::S3_CUBIC, params, kCubicStart, 5.0);
    CHECK(tr.stats.accepted > 0);
    CHECK(tr.stats.smallest_step > 0.0);
    CHECK(tr.stats.smallest_step <= tr.stats.largest_step);
    CHECK(tr.stats.largest_step <= tr.tol.h_max);
}

TEST_CASE("json round trip preserves the trajectory exactly") {
    SystemParams params;
    params.g2 = 0.25;
    const StateVec y0 = [&] {
        SystemParams sp = params;
        return sample_initial_state(SystemId::S1_COMPLEX, sp, 4, true);
    }();
    SystemParams sp = params;
    const StateVec y = sample_initial_state(SystemId::S1_COMPLEX, sp, 4, true);
    const Trajectory tr = integrate(SystemId::S1_COMPLEX, sp, y, 1.0, {}, 1e-2);
    CHECK(y0 == y);

    const auto j = to_json(tr);
    const Trajectory back = trajectory_from_json(j, "/trajectory");
    CHECK(back.id == tr.id);
    CHECK(back.times == tr.times);
    CHECK(back.states == tr.states);
    CHECK(back.termination == tr.termination);
    CHECK(back.tol.rtol == tr.tol.rtol);
    CHECK(back.params.g2 == tr.params.g2);
    CHECK(back.params.g3 == tr.params.g3);
    CHECK(back.stats.accepted == tr.stats.accepted);

    // Serialized text is reproducible byte for byte.
    CHECK(j.dump() == to_json(back).dump());

    auto broken = j;
    broken["extra"] = 1;
    CHECK_THROWS_AS(trajectory_from_json(broken, "/trajectory"), ConfigError);
    broken = j;
    broken["times"] = nlohmann::json::array({0.0, 0.0});
    CHECK_THROWS_AS(trajectory_from_json(broken, "/trajectory"), ConfigError);
}

TEST_CASE("csv export shape") {
    SystemParams params;
    const Trajectory tr = integrate(SystemId::S3_CUBIC, params, kCubicStart, 0.1, {}, 1e-2);
    std::ostringstream out;
    write_csv(tr, out);
    const std::string text = out.str();
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "t,x1_re,x1_im,x2_re,x2_im,e1_re,e1_im,e2_re,e2_im,r_re,r_im,gamma3_re,gamma3_im,"
          "a_hat_re,a_hat_im,b_hat_re,b_hat_im,c_hat_re,c_hat_im,d_sq_re,d_sq_im");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == tr.times.size());
    CHECK(text.substr(text.find('\n') + 1, 2) == "0,"); // first row starts at t = 0
}
