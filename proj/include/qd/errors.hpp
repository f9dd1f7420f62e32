#pragma once

#include <stdexcept>
#include <string>

namespace qd {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

/// expand_small exceeded its degree budget; caller falls back to evaluation mode.
struct DegreeOverflow : Error {
    using Error::Error;
};

struct NotGaugeNode : Error {
    using Error::Error;
};

struct RankError : Error {
    using Error::Error;
};

struct UnknownScenario : Error {
    using Error::Error;
};

/// Requested identity case is inconsistent with the shape (e.g. m != n for the equal-rank case).
struct CaseMismatch : Error {
    using Error::Error;
};

/// Too many sampled points hit poles; the attempt budget is exhausted.
struct EvaluationExhausted : Error {
    using Error::Error;
};

/// Series truncation order too small for the requested kernel comparison.
struct TruncationTooSmall : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace qd
