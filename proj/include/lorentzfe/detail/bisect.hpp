#pragma once

#include <cmath>
#include <limits>

#include "lorentzfe/errors.hpp"

namespace lorentzfe::detail {

/// Solves fn(t) = target for t >= 0 by bisection, for nondecreasing fn with
/// fn(0) <= target. The bracket is grown or shrunk geometrically first, so
/// targets anywhere in the double range resolve to full resolution.
template <class Fn>
double monotone_inverse(const Fn& fn, double target) {
    if (!(target >= 0.0) || std::isinf(target))
        throw NumericalError("monotone_inverse: target must be finite and >= 0");
    if (target == 0.0 && fn(0.0) >= 0.0) return 0.0;

    double hi = 1.0;
    if (fn(hi) >= target) {
        while (hi > std::numeric_limits<double>::denorm_min() && fn(hi * 0.5) >= target) hi *= 0.5;
    } else {
        int guard = 0;
        while (fn(hi) < target) {
            hi *= 2.0;
            if (++guard > 1100 || std::isinf(hi))
                throw NumericalError("monotone_inverse: target not attained");
        }
    }
    double lo = hi * 0.5;
    if (fn(lo) >= target) lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (fn(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    // pick the closer endpoint in value
    return std::abs(fn(lo) - target) < std::abs(fn(hi) - target) ? lo : hi;
}

}  // namespace lorentzfe::detail
