#ifndef CREDAL_ERRORS_HPP
#define CREDAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace credal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed KB text. Carries the 1-based line number of the offending line.
struct SyntaxError : Error {
    int line;
    SyntaxError(int line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

/// Interval endpoints outside [0,1] or inverted on input.
struct BoundsError : Error {
    using Error::Error;
};

/// Two interval constraints on the same quantity exclude each other.
struct EmptyIntersection : Error {
    using Error::Error;
};

/// The knowledge base admits no probability distribution. Raised by the
/// propagation engine (empty intersection, positive circuit) and by the
/// oracle (infeasible linear program).
struct Inconsistent : Error {
    using Error::Error;
};

struct UnknownAtom : Error {
    using Error::Error;
};

struct NotBaseAtom : Error {
    using Error::Error;
};

struct TooManyAtoms : Error {
    using Error::Error;
};

/// The conditioning event of a query has zero probability in every model.
struct DegenerateDenominator : Error {
    using Error::Error;
};

/// P(A | A or B) is undefined when both membership arguments are certainly zero.
struct UndefinedMembership : Error {
    using Error::Error;
};

struct IterationLimit : Error {
    using Error::Error;
};

} // namespace credal

#endif
