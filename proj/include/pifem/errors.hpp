#pragma once

#include <stdexcept>
#include <string>

namespace pifem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interface crosses an element in a configuration the method does not admit
// (e.g. enters and exits through the same edge).
struct GeometryViolation : Error {
    using Error::Error;
};

// Root bracketing on an edge failed to reach the requested residual.
struct NonConvergence : Error {
    using Error::Error;
};

// The 6x6 local constraint system for an interface element is singular.
struct SingularLocalSystem : Error {
    using Error::Error;
};

struct OutsideElement : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct MaxIterations : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

}  // namespace pifem
