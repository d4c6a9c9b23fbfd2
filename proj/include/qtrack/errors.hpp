#pragma once

#include <stdexcept>
#include <string>

namespace qtrack {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV / input-file problems (CLI exit code 3).
struct ParseError : Error {
    using Error::Error;
};

// Bad values in otherwise well-formed input (CLI exit code 1 or 3).
struct ValidationError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

// Dimension mismatches between panels, schemes, models and assignments.
struct ShapeError : Error {
    using Error::Error;
};

// Encoding parameters that cannot yield any feasible portfolio.
struct InfeasibleSchemeError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// A metric whose denominator vanishes everywhere.
struct UndefinedMetricError : Error {
    using Error::Error;
};

struct DegenerateRiskError : Error {
    using Error::Error;
};

// Exhaustive solve requested beyond the enumerable size cap.
struct TooLargeError : Error {
    using Error::Error;
};

}  // namespace qtrack
