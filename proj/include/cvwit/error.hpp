#pragma once

#include <stdexcept>
#include <string>

namespace cvwit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument is outside the documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The Fock cutoff is too small to represent the requested state or action.
class CutoffTooSmall : public Error {
public:
    using Error::Error;
};

/// Exact integer arithmetic would overflow.
class Overflow : public Error {
public:
    using Error::Error;
};

/// The phase grid is too coarse for the requested Fourier coefficient.
class AliasingDetected : public Error {
public:
    using Error::Error;
};

/// The requested (family, operation) pair has no implementation.
class Unsupported : public Error {
public:
    using Error::Error;
};

}  // namespace cvwit
