#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mre {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Vector lengths disagree (counts vs. labels, point vs. model, index out of range).
struct DimensionError : Error {
    using Error::Error;
};

/// An operation that needs observed data received an empty sample (n = 0).
struct EmptySampleError : Error {
    using Error::Error;
};

/// relative_entropy: p puts mass where q has none.
struct SupportError : Error {
    using Error::Error;
};

/// Deterministic simplex integration was requested for k > 5.
struct UseMonteCarloError : Error {
    using Error::Error;
};

/// A nested series sum exceeded its term budget without meeting the stop rule.
struct SeriesDivergenceError : Error {
    int level;
    double t;
    std::int64_t terms;

    SeriesDivergenceError(const std::string& msg, int level_, double t_, std::int64_t terms_)
        : Error(msg), level(level_), t(t_), terms(terms_) {}
};

/// Target moment outside the open feasible interval.
struct InfeasibleMomentError : Error {
    using Error::Error;
};

/// Root bracket grew past the multiplier limit, or iteration failed to converge.
struct DivergenceError : Error {
    using Error::Error;
};

/// A domain-type invariant was violated by an input.
struct ValidationError : Error {
    using Error::Error;
};

/// Malformed input file; message carries the parser's location diagnostics.
struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace mre
