#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ruvn {

/// Direct factorization hit a pivot below tolerance.
struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// A row of the source matrix is identically zero, so it cannot be row-normalized.
struct ZeroRowError : std::runtime_error {
    std::size_t row;
    explicit ZeroRowError(std::size_t r)
        : std::runtime_error("row " + std::to_string(r) + " of the matrix is identically zero"),
          row(r) {}
};

/// A weight ratio was requested across a transition the kernel assigns probability zero.
struct ZeroProbabilityError : std::runtime_error {
    explicit ZeroProbabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file; carries the 1-based line number of the offending line.
struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t ln, const std::string& what)
        : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

/// File header names a matrix flavor this reader does not handle.
struct UnsupportedFormatError : std::runtime_error {
    explicit UnsupportedFormatError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative estimate hit its iteration budget without settling.
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Every entry was flagged, leaving nothing to measure.
struct AllFlaggedError : std::runtime_error {
    AllFlaggedError() : std::runtime_error("all entries are flagged") {}
};

/// Trace of the reference matrix is zero; relative trace error undefined.
struct ZeroTraceError : std::runtime_error {
    ZeroTraceError() : std::runtime_error("reference trace is zero") {}
};

/// Regression inputs do not determine a slope (coincident x-values).
struct DegenerateFitError : std::runtime_error {
    explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ruvn
