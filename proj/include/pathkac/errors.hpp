#pragma once

#include <stdexcept>
#include <string>

namespace pathkac {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time or index argument falls outside the valid grid.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Mismatched dimensions, step sizes or coefficient lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An operation tried to read a path past its lifetime (dead/coffin state).
class LifetimeError : public Error {
public:
    using Error::Error;
};

/// An exponent grew past the representable range; message names the first bad time.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// The solver partition would exceed the configured subinterval budget.
class PartitionError : public Error {
public:
    using Error::Error;
};

/// Spectral projection produced a non-finite coefficient.
class ProjectionError : public Error {
public:
    using Error::Error;
};

/// A translation argument lies outside the reliable quadrature window,
/// or too many Monte Carlo samples had to be rejected for that reason.
class WindowError : public Error {
public:
    using Error::Error;
};

/// A deterministic solver (e.g. the PDE reference) produced a non-finite state.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace pathkac
