#pragma once

#include <stdexcept>
#include <string>

namespace assaylens {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input: precondition violations, malformed files, unusable arguments.
class ValidationError : public Error {
public:
    using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// A reading falls outside the invertible span of a calibration curve.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

// No calibration record matches the query context.
class NoMatchError : public Error {
public:
    using Error::Error;
};

// No contiguous run of the series qualifies as a sensitive range.
class NoSensitiveRangeError : public Error {
public:
    using Error::Error;
};

} // namespace assaylens
