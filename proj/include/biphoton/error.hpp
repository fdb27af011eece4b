#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: non-positive physical fields, malformed config lines.
class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericError {
public:
    using NumericError::NumericError;
};

class NoHalfCrossing : public NumericError {
public:
    using NumericError::NumericError;
};

class ZeroKernel : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainOverflow : public NumericError {
public:
    using NumericError::NumericError;
};

// The requested quantity is not meaningful for this pulse regime / time range.
class RegimeError : public Error {
public:
    using Error::Error;
};

class ShortPulseRegime : public RegimeError {
public:
    using RegimeError::RegimeError;
};

class AnalyticOutOfRegime : public RegimeError {
public:
    using RegimeError::RegimeError;
};

class ApproxOutOfDomain : public RegimeError {
public:
    using RegimeError::RegimeError;
};

class RegionMismatch : public RegimeError {
public:
    using RegimeError::RegimeError;
};

class OutOfBranch : public RegimeError {
public:
    using RegimeError::RegimeError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace biphoton
