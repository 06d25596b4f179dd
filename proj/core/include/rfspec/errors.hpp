// errors.hpp: exception hierarchy shared by all rfspec modules

#pragma once

#include <stdexcept>
#include <string>

namespace rfspec {

// Root of everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates a documented precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A Fock-space truncation cannot hold the requested probability mass.
class TruncationError : public Error {
public:
    using Error::Error;
};

// A requested optical transition refers to a negative Fock index.
class InvalidTransition : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Time step or quadrature grid is too coarse for the oracle's accuracy policy.
class StepSizeError : public InvalidInput {
public:
    StepSizeError(const std::string& what, double suggested);
    double suggested() const noexcept { return suggested_; }

private:
    double suggested_;
};

// Spectrum carries no usable peak.
class EmptySpectrum : public Error {
public:
    using Error::Error;
};

// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

// File content does not follow the expected format.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace rfspec
