#pragma once

#include <stdexcept>
#include <string>

namespace gptc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Cone is {0}, the full space, or otherwise fails to be proper.
struct DegenerateCone : Error {
    using Error::Error;
};

/// LP-based operation was invoked on a model without a polyhedral cone.
struct NonPolyhedralModel : Error {
    using Error::Error;
};

/// Simplex exceeded its cycling guard or a certificate failed to re-verify.
/// Reported distinctly from infeasibility.
struct LpNumericalFailure : Error {
    using Error::Error;
};

struct SizeLimitExceeded : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace gptc
