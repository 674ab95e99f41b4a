#include "credal/interval.hpp"

#include <algorithm>
#include <cstdio>

namespace credal {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo <= hi)) {
        throw BoundsError("invalid probability interval [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
}

Interval Interval::checked(double lo, double hi) {
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
    if (lo > hi) {
        if (lo - hi > kEmptyTol) {
            throw EmptyIntersection("empty interval [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
        }
        double mid = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
        lo = hi = mid;
    }
    Interval out;
    out.lo_ = lo;
    out.hi_ = hi;
    return out;
}

Interval intersect(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo(), b.lo());
    double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        if (lo - hi > Interval::kEmptyTol) {
            throw EmptyIntersection("intersection of " + to_string(a) + " and " + to_string(b) +
                                    " is empty");
        }
        double mid = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
        return Interval(mid, mid);
    }
    return Interval(lo, hi);
}

bool contains(const Interval& outer, const Interval& inner) {
    return outer.lo() <= inner.lo() + Interval::kEmptyTol &&
           inner.hi() <= outer.hi() + Interval::kEmptyTol;
}

std::string format_prob(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string to_string(const Interval& v) {
    return "[" + format_prob(v.lo()) + ";" + format_prob(v.hi()) + "]";
}

} // namespace credal
