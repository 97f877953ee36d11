#include "v2x/pathloss.hpp"

#include <algorithm>
#include <cmath>

namespace v2x {

double Pathloss::at(double d_m) const {
    const double d = std::max(d_m, spec_.d_min_m);
    if (spec_.kind == PathlossKind::LogDistance)
        return spec_.pl0_db + 10.0 * spec_.exponent * std::log10(d / spec_.ref_m);
    if (d <= spec_.wb1_breakpoint_m)
        return spec_.wb1_b1 + spec_.wb1_a1 * std::log10(d);
    return spec_.wb1_b2 + spec_.wb1_a2 * std::log10(d);
}

double Pathloss::distance_for_loss(double pl_db, double limit_m) const {
    double lo = spec_.d_min_m, hi = limit_m;
    if (at(lo) >= pl_db) return lo;
    if (at(hi) < pl_db) return hi;
    for (int i = 0; i < 200 && hi - lo > 1e-6; ++i) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) < pl_db ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace v2x
