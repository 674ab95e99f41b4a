#ifndef CREDAL_INTERVAL_HPP
#define CREDAL_INTERVAL_HPP

#include <string>

#include "credal/errors.hpp"

namespace credal {

/** A closed subinterval of [0,1] bounding one conditional probability.
 *
 *  Endpoints are plain doubles. Inversions no larger than kEmptyTol are
 *  treated as floating-point jitter and collapse to a point interval;
 *  larger inversions are a proof of inconsistency.
 */
class Interval {
public:
    /// Tolerance below which an inverted pair of endpoints collapses to a
    /// point instead of signalling an empty intersection.
    static constexpr double kEmptyTol = 1e-9;

    /// Default-constructed intervals are vacuous: [0,1].
    constexpr Interval() = default;

    /// Throws BoundsError unless 0 <= lo <= hi <= 1.
    Interval(double lo, double hi);

    static constexpr Interval vacuous() { return {}; }
    static Interval certain() { return {1.0, 1.0}; }
    static Interval impossible() { return {0.0, 0.0}; }

    /** Builds an interval from raw rule output. Endpoints are clamped to
     *  [0,1]; an inversion within kEmptyTol collapses to the midpoint,
     *  a larger one throws EmptyIntersection. */
    static Interval checked(double lo, double hi);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }

    bool is_vacuous() const { return lo_ == 0.0 && hi_ == 1.0; }
    bool is_point() const { return lo_ == hi_; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }
    friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
};

/// [max of lows, min of highs]. Throws EmptyIntersection when the result is
/// inverted by more than Interval::kEmptyTol.
Interval intersect(const Interval& a, const Interval& b);

/// outer.lo <= inner.lo and inner.hi <= outer.hi, up to kEmptyTol slack.
bool contains(const Interval& outer, const Interval& inner);

/// Renders "[l.llllll;h.hhhhhh]" with exactly six decimals.
std::string to_string(const Interval& v);

/// Six-decimal rendering of a single endpoint.
std::string format_prob(double v);

} // namespace credal

#endif
