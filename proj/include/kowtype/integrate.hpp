#pragma once

// Adaptive Dormand-Prince 5(4) integration of catalog systems over their
// flat real state vectors, with dense sampled output, PI step-size control,
// and guard-triggered early termination.

#include "kowtype/catalog.hpp"

#include <cstdint>
#include <iosfwd>

namespace kow {

struct TolSpec {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-14;
    double h_max = 0.25;
};

// Throws ConfigError unless 0 < h_min <= h_init <= h_max and rtol, atol > 0.
void validate(const TolSpec& tol, const std::string& location);

enum class Termination { completed, singularity, step_underflow };

std::string_view termination_name(Termination t);
std::optional<Termination> termination_from_name(std::string_view name);

struct StepStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    double smallest_step = 0.0;
    double largest_step = 0.0;
};

// Immutable once returned. times are strictly increasing multiples of
// sample_dt (plus the final time reached); states align one-to-one.
struct Trajectory {
    SystemId id = SystemId::S3_CUBIC;
    SystemParams params;
    std::vector<double> times;
    std::vector<StateVec> states;
    StepStats stats;
    Termination termination = Termination::completed;
    double t_end = 0.0;
    double sample_dt = 0.0;
    TolSpec tol;
    bool reversed = false;
};

// Throws SingularState when state0 itself trips a guard and StepUnderflow
// when no step at all can be completed; later guard trips or underflow end
// the run early with the matching termination cause instead. reversed
// integrates the negated field (the time-reversal of the flow).
Trajectory integrate(SystemId id, const SystemParams& params, const StateVec& state0,
                     double t_end, TolSpec tol = {}, double sample_dt = 1e-2,
                     bool reversed = false);

// Re-integrates the same run with rtol and atol divided by factor (> 1).
Trajectory refine(const Trajectory& traj, double factor);

// Columns: t, chart components, then re/im of every conserved-quantity
// residual or value.
void write_csv(const Trajectory& traj, std::ostream& out);

nlohmann::json to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j, const std::string& location);

} // namespace kow
