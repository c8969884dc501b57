#pragma once

#include "kowtype/catalog.hpp"
#include "kowtype/integrate.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kow {

// One JSON document drives every command, so a run is archivable and
// replayable byte for byte. Unknown keys are rejected with their location.
// Command-line flags overwrite individual fields after parsing.
struct RunConfig {
    std::optional<SystemId> system;
    std::optional<SystemParams> params;
    std::uint64_t seed = 0;
    bool on_invariant_set = true;
    std::optional<nlohmann::json> state; // explicit start; simulate only
    double t_end = 5.0;
    TolSpec tol;
    double sample_dt = 1e-2;
    std::string out_dir;
    std::vector<std::string> targets{"all"};
    bool reversed = false;
    // KOWTYPE_EPS_SING, applied after the config so the environment wins.
    std::optional<double> eps_sing_override;
};

RunConfig config_from_json(const nlohmann::json& j);

// Parameter set a command actually runs with: explicit config params when
// given, otherwise the per-system documented defaults, then the guard
// override. The defaults keep seeded sampling away from degenerate data.
SystemParams effective_params(const RunConfig& cfg, SystemId id);

// One measured check inside a verify run. pass and fail drive the exit
// code. finding marks a measured mismatch with a transcribed reference
// display (see docs/findings.md); skipped marks checks whose preconditions
// the run does not meet. Both leave the exit code alone.
struct CheckResult {
    std::string target;
    std::string system; // empty for family-level checks
    std::string name;
    std::string status; // pass | fail | finding | skipped
    double measured = 0.0;
    double threshold = 0.0;
    std::string relation; // sense of measured vs threshold: <=, >=, ==
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    int passed = 0;
    int failed = 0;
    int findings = 0;
    int skipped = 0;

    bool ok() const { return failed == 0; }
};

nlohmann::json to_json(const VerifyReport& report);

// Runs the selected targets in name order: integrals, measure, quadrature,
// separability, theorem. cfg.system restricts the per-system targets; the
// family-level targets (separability, theorem) always run when selected.
VerifyReport run_verify(const RunConfig& cfg);

// Exit codes shared by all commands: 0 success, 1 failed check or a step
// underflow, 2 config error, 3 singularity abort.
int cmd_catalog(bool json, std::ostream& out);
int cmd_verify(const RunConfig& cfg, bool json, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, bool json, std::ostream& out, std::ostream& err);

} // namespace kow
