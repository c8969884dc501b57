#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kowtype/catalog.hpp"
#include "kowtype/families.hpp"
#include "kowtype/integrate.hpp"

namespace kow {

// Measured residuals along trajectories: integral drift, relation
// classification, separation roots, and the identity checks that tie the
// flow to its separation polynomial.

struct DriftEntry {
    std::string name;
    cplx initial{};
    double drift = 0.0;
    IntegralKind kind = IntegralKind::unclassified;
};

struct DriftReport {
    std::vector<DriftEntry> entries;
    double max_drift() const;
};

// Evaluates the integral set at every sample and reports, per integral, the
// largest distance from its initial value. kinds, when nonempty, annotates
// the entries (classify_relation produces them) and must match the integral
// count.
DriftReport drift_report(const Trajectory& traj,
                         const std::vector<IntegralKind>& kinds = {});

// Classifies one relation by the directional derivative of its residual
// along the field: zero at generic states makes it a first integral, zero
// only on the joint zero set of all relations makes it an invariant
// relation, zero nowhere means the flow does not preserve it. Derivatives
// between the decision thresholds are ambiguous and raise
// ClassificationFailed rather than guessing.
IntegralKind classify_relation(SystemId id, const SystemParams& params,
                               std::size_t relation_index, std::uint64_t seed);

struct SeparationTrack {
    std::vector<double> times;
    std::vector<cplx> s1, s2;
    // Root pairing per sample: false keeps the quadratic-formula order in
    // which s1 carries the -sqrt branch, true exchanges the pair.
    std::vector<std::uint8_t> swapped;
    double max_quadratic_residual = 0.0;
    // Largest per-step root movement relative to the root separation; label
    // continuity is trustworthy while this stays below 0.5.
    double max_step_ratio = 0.0;
    TriQuad<cplx> F;
};

// Roots of F(x1, x2, s) = 0 in s along the trajectory, with branch
// continuity by nearest match to the linear extrapolation of the previous
// two samples.
SeparationTrack separation_roots(const Trajectory& traj, const TriQuad<cplx>& F);

// The separation family whose coefficients match a run's parameter labels.
// On the Weierstrass-chart systems the odd coefficient enters the catalog
// relations with the opposite sign from the separation display, so the
// bridge negates that label here (docs/findings.md).
SQuadraticFamily<cplx> separation_family(SystemId id, const SystemParams& params);

struct VieteReport {
    double sum_residual = 0.0;   // max |s1 + s2 + B/A|
    double diff_residual = 0.0;  // max |(s2 - s1) A - sqrt(4 P(x1) P(x2))|
};

VieteReport viete_residuals(const SeparationTrack& track, const Trajectory& traj,
                            const UniPoly<cplx>& P);

struct VelocityReport {
    double res_x1 = 0.0;  // max |-4 x1'^2 - P(x1) - (x1 - x2)^2 e1|
    double res_x2 = 0.0;  // max |-4 x2'^2 - P(x2) - (x2 - x1)^2 e2|
};

// Velocities come from the vector field, not finite differences. The
// separation polynomial is built from the trajectory's own labels.
VelocityReport velocity_identity(const Trajectory& traj);

struct QuadratureReport {
    // Central-difference residuals of the two differential relations at the
    // interior samples, starting at the second sample of the run.
    std::vector<double> res1, res2;
    double max_res1 = 0.0, max_res2 = 0.0;
    // Convergence orders measured against a rerun at half the sample
    // spacing; zero when either run produced an exactly zero residual.
    double order1 = 0.0, order2 = 0.0;
    double min_sqrt_phi = 0.0;  // closest approach to the branch locus
    double min_motion = 0.0;    // smallest |dx/dt| along the run
    // Set when the run never moves faster than the motion floor; res2 then
    // sits at sample_dt by construction and is reported, not failed.
    bool below_motion_floor = false;
    int sign1 = 1, sign2 = 1;  // sqrt branch signs fixed at the first interior sample
};

QuadratureReport quadrature_residuals(const SeparationTrack& track,
                                      const Trajectory& traj,
                                      const SystemParams& params);

struct KowchReport {
    std::vector<double> res1, res2;
    double max_res1 = 0.0, max_res2 = 0.0;
    int sign_x1 = 1, sign_x2 = 1, sign_s1 = 1, sign_s2 = 1;
};

KowchReport kowch_residuals(const SeparationTrack& track, const Trajectory& traj,
                            const UniPoly<cplx>& P);

nlohmann::json to_json(const DriftReport& report);
nlohmann::json to_json(const SeparationTrack& track);
nlohmann::json to_json(const VieteReport& report);
nlohmann::json to_json(const VelocityReport& report);
nlohmann::json to_json(const QuadratureReport& report);
nlohmann::json to_json(const KowchReport& report);

// CSV of (t, s1, s2, res1, res2). Residual columns are empty on rows where
// no central difference exists (the endpoints and any trailing sample that
// falls off the uniform grid).
void write_track_csv(const SeparationTrack& track, const QuadratureReport& quad,
                     std::ostream& out);

} // namespace kow
