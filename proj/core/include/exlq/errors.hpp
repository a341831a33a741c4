#pragma once

#include <stdexcept>
#include <string>

namespace exlq {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor or operation received parameters violating its contract.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// An evaluation received a NaN or infinite input.
class NonFiniteInput : public Error {
public:
    using Error::Error;
};

/// Adaptive integration exhausted its refinement budget above tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// The randomized policy is not well defined (normalizer diverges, or the
/// well-posedness condition on the control penalty fails).
class IllPosedPolicy : public Error {
public:
    using Error::Error;
};

/// The scalar fixed-point equation has no admissible root in the scanned range.
class NoSolution : public Error {
public:
    using Error::Error;
};

/// A linear equation degenerated (zero coefficient after rearrangement).
class DegenerateEquation : public Error {
public:
    using Error::Error;
};

/// Config file could not be parsed or failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Path simulation failed (state blow-up, infeasible scenario, horizon too short).
class SimulationError : public Error {
public:
    using Error::Error;
};

} // namespace exlq
