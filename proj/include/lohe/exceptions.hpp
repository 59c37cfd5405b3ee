#pragma once

#include <stdexcept>
#include <string>

namespace lohe {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LOHE_DEFINE_ERROR(Name)                \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    };

LOHE_DEFINE_ERROR(DimensionMismatch)
LOHE_DEFINE_ERROR(NotStronglyConnected)
LOHE_DEFINE_ERROR(NoSpanningTree)
LOHE_DEFINE_ERROR(NotSkewSymmetric)
LOHE_DEFINE_ERROR(NonFinite)
LOHE_DEFINE_ERROR(InvariantViolation)
LOHE_DEFINE_ERROR(InsufficientData)
LOHE_DEFINE_ERROR(EmptySeries)
LOHE_DEFINE_ERROR(ValidationError)

#undef LOHE_DEFINE_ERROR

/// Malformed text input. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& source, int line, const std::string& what)
        : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string{}) + ": " + what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace lohe
