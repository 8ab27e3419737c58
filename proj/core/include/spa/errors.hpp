#pragma once

#include <stdexcept>
#include <string>

namespace spa {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument values: invalid flags, infeasible configurations, domain
// violations (e.g. nonpositive sigma).
class ValueError : public Error {
public:
    using Error::Error;
};

// Shape mismatches: wrong vector length, k exceeding min(n-1, D), etc.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Fewer points than a fit requires (n < p+2).
class InsufficientPointsError : public Error {
public:
    using Error::Error;
};

// Center solve is not unique: local scatter matrix rank-deficient beyond the
// pseudo-inverse cutoff. Only raised under SingularPolicy::strict.
class SingularFitError : public Error {
public:
    using Error::Error;
};

// Non-finite values showed up where they must not.
class NumericError : public Error {
public:
    using Error::Error;
};

// Malformed input data: bad CSV cell, ragged row, out-of-range pixel.
// what() carries the row/column location when known.
class ParseError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failures: missing file, unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace spa
