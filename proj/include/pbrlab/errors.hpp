#pragma once

#include <stdexcept>
#include <string>

namespace pbrlab {

/// Base of everything the library throws on a violated precondition.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    using Error::Error;
};

/// Antisymmetrizing a function with itself (up to phase) yields the zero function.
class DegenerateAntisymmetrization : public Error {
public:
    using Error::Error;
};

/// Raised when an internal postcondition fails; the CLI maps it to exit code 3.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace pbrlab
