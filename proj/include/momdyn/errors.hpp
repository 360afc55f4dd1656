#pragma once

#include <stdexcept>
#include <string>

namespace momdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation produced NaN/Inf; usually a chart singularity (s=0, s_i=s_j, sin(beta)=0, ...).
struct NonFinite : Error {
    using Error::Error;
};
struct SingularChart : Error {
    using Error::Error;
};
struct NegativeDiscriminant : Error {
    using Error::Error;
};
struct DegreeTooLarge : Error {
    using Error::Error;
};
struct MissingMoment : Error {
    using Error::Error;
};
struct MissingPredecessor : Error {
    using Error::Error;
};
struct SmoothnessRequired : Error {
    using Error::Error;
};
struct NoMinimumFound : Error {
    using Error::Error;
};
struct NonConvergedEigen : Error {
    using Error::Error;
};
struct NotPositiveDefinite : Error {
    using Error::Error;
};
struct ComplexFrequency : Error {
    using Error::Error;
};
struct CutoffTooSmall : Error {
    using Error::Error;
};
struct SeriesDiverging : Error {
    using Error::Error;
};
struct DensityFloorHit : Error {
    using Error::Error;
};
struct StepFailure : Error {
    using Error::Error;
};
struct SingularityStop : Error {
    double time = 0.0;
    explicit SingularityStop(const std::string& msg, double t) : Error(msg), time(t) {}
};
// Bad user input (CLI/config); maps to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace momdyn
