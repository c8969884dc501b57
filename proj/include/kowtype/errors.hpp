#pragma once

#include <stdexcept>
#include <string>

namespace kow {

// Every failure mode callers are expected to branch on gets its own type.
// Message text is for humans; catch sites dispatch on the type alone.

struct DegreeOverflow : std::runtime_error {
    explicit DegreeOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct ArityMismatch : std::runtime_error {
    explicit ArityMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NotSeparable : std::runtime_error {
    explicit NotSeparable(const std::string& what) : std::runtime_error(what) {}
};

struct AllSectionsDegenerate : std::runtime_error {
    explicit AllSectionsDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct EvaluationAtSingularLocus : std::runtime_error {
    explicit EvaluationAtSingularLocus(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by vector fields when a guarded denominator falls below eps_sing.
struct SingularState : std::runtime_error {
    explicit SingularState(const std::string& what) : std::runtime_error(what) {}
};

struct NoConsistentState : std::runtime_error {
    explicit NoConsistentState(const std::string& what) : std::runtime_error(what) {}
};

struct NoKnownDensity : std::runtime_error {
    explicit NoKnownDensity(const std::string& what) : std::runtime_error(what) {}
};

struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateQuadratic : std::runtime_error {
    explicit DegenerateQuadratic(const std::string& what) : std::runtime_error(what) {}
};

// Carries the sample time at which square-root phase continuity broke.
struct BranchTrackingLost : std::runtime_error {
    double t;
    BranchTrackingLost(const std::string& what, double t_) : std::runtime_error(what), t(t_) {}
};

struct ClassificationFailed : std::runtime_error {
    explicit ClassificationFailed(const std::string& what) : std::runtime_error(what) {}
};

// Config parse/validation failure; location is a JSON-pointer-like path.
struct ConfigError : std::runtime_error {
    std::string location;
    ConfigError(const std::string& what, std::string location_)
        : std::runtime_error(what + " (at " + location_ + ")"), location(std::move(location_)) {}
};

} // namespace kow
