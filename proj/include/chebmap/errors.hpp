#pragma once

#include <stdexcept>
#include <string>

namespace chebmap {

// Base for all library errors; specific types below so callers can
// distinguish precondition failures from numerical breakdowns.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadParam : Error {
    using Error::Error;
};

// Latitude at or beyond the Mercator cap (isometric latitude diverges).
struct PoleError : Error {
    using Error::Error;
};

struct BadRegion : Error {
    using Error::Error;
};

struct NotSimple : BadRegion {
    using BadRegion::BadRegion;
};

struct RegionTooThin : BadRegion {
    using BadRegion::BadRegion;
};

struct SingularPoint : Error {
    using Error::Error;
};

struct StepUnderflow : Error {
    using Error::Error;
};

struct NotConformal : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

struct NoIntersection : Error {
    using Error::Error;
};

struct DegenerateCenters : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    NoConvergence(const std::string& what, double residual_, long iterations_)
        : Error(what), residual(residual_), iterations(iterations_) {}
    double residual;
    long iterations;
};

struct NotHarmonic : Error {
    using Error::Error;
};

struct PathInconsistency : Error {
    using Error::Error;
};

struct NetTooSmall : Error {
    using Error::Error;
};

struct MissingNeighbor : Error {
    using Error::Error;
};

struct BadSeedAngle : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace chebmap
