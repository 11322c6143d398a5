#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leafmatch {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The caller handed in something invalid. CLI exit code 2, HTTP 400.
class InputError : public Error {
public:
    using Error::Error;
};

/// A value violates a domain invariant (non-positive frequency, negative
/// capacitance, empty list where one is required ...).
class DomainError : public InputError {
public:
    using InputError::InputError;
};

/// A well-formed input whose evaluation cannot proceed. CLI exit code 3.
class ComputeError : public Error {
public:
    using Error::Error;
};

/// Zero-magnitude reciprocal or a vanishing denominator.
class DegenerateError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

/// Query outside the support of tabulated data; no extrapolation is done.
class RangeError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class NearFieldError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

/// Discrete search would exceed the candidate cap.
class CapacityError : public ComputeError {
public:
    CapacityError(const std::string& what, std::size_t candidates)
        : ComputeError(what), candidates_(candidates) {}
    std::size_t candidates() const noexcept { return candidates_; }

private:
    std::size_t candidates_;
};

/// Outline construction failed (self-intersection, envelope).
class GeometryError : public ComputeError {
public:
    using ComputeError::ComputeError;
};

}  // namespace leafmatch
