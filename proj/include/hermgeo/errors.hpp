#pragma once

#include <stdexcept>
#include <string>

namespace hermgeo {

// Precondition failures map to CLI exit 3, numerical failures to exit 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

struct DimensionMismatch : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct InvalidArgument : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NotHermitian : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NotUnitary : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct BasePointNotCanonical : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct NotInSigmaK : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct StepTooSmall : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct DegenerateBoundary : NumericalError {
    using NumericalError::NumericalError;
};

struct SubspacesTooFar : NumericalError {
    using NumericalError::NumericalError;
};

struct ConvergenceFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct DepthCapReached : NumericalError {
    using NumericalError::NumericalError;
};

struct NewtonDiverged : NumericalError {
    using NumericalError::NumericalError;
};

struct MatchingCollision : NumericalError {
    using NumericalError::NumericalError;
};

// Fit did not settle on an integer slope; exit 5.
struct InconclusiveFit : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace hermgeo
