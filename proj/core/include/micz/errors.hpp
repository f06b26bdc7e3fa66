#pragma once

#include <stdexcept>
#include <string>

namespace micz {

/// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

/// Evaluation point coincides with a dyon center. `dyon` is the offending index
/// (-1 when there is no meaningful index).
struct AtCenterError : Error {
    int dyon;
    explicit AtCenterError(int idx = -1)
        : Error("evaluation point at dyon center #" + std::to_string(idx)), dyon(idx) {}
};

/// Evaluation point lies on (or too close to) a Dirac string ray.
struct OnStringError : Error {
    int dyon;
    explicit OnStringError(int idx = -1)
        : Error("evaluation point on Dirac string of dyon #" + std::to_string(idx)), dyon(idx) {}
};

/// Point coincides with a focus of the elliptic coordinate system.
struct AtFocusError : Error {
    int focus;
    explicit AtFocusError(int idx)
        : Error("point coincides with focus #" + std::to_string(idx)), focus(idx) {}
};

struct SingularJacobianError : Error {
    SingularJacobianError() : Error("coordinate map Jacobian is singular at this point") {}
};

struct BoundaryDegenerateError : Error {
    BoundaryDegenerateError()
        : Error("separated Hamiltonian is degenerate at a coordinate boundary with nonzero momenta") {}
};

struct AtOriginError : Error {
    AtOriginError() : Error("parabolic coordinates degenerate at the origin") {}
};

struct DomainError : Error {
    using Error::Error;
};

struct FamilyMismatchError : Error {
    using Error::Error;
};

struct UnpatchableError : Error {
    UnpatchableError() : Error("point coincides with a dyon center; no string assignment works") {}
};

struct NoLibrationError : Error {
    NoLibrationError() : Error("radicand is negative throughout the search interval") {}
};

struct DegenerateIntervalError : Error {
    DegenerateIntervalError() : Error("libration interval has collapsed to a point") {}
};

struct BranchTrackingFailureError : Error {
    using Error::Error;
};

struct NumericalFailureError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace micz
