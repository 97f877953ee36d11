#pragma once

#include <array>
#include <vector>

#include "v2x/pathloss.hpp"
#include "v2x/propagation.hpp"
#include "v2x/scenario.hpp"

namespace v2x {

// Per-vehicle channel occupancy contribution at distance d: lambda * T * PSR(d).
double load_at(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

/**
 * Uncompressed channel busy ratio: sum of load_at over every lattice vehicle
 * i/beta, i != 0.  The sum is truncated once PSR drops below kPsrCut (with a
 * hard cap on the number of lattice terms) and the result is clamped to
 * [0,1].
 */
double cbr_upper(const ScenarioConfig& cfg, const Pathloss& pl);

// Overlap compression: cbr = p1*x^2 + p2*x + p3, clamped to [0,1].
double cbr_from_upper(const ScenarioConfig& cfg, double cbr_u);

struct CbrEstimate {
    double upper = 0.0;       // uncompressed sum of loads
    double compressed = 0.0;  // after the quadratic compression
};

CbrEstimate estimate_cbr(const ScenarioConfig& cfg, const Pathloss& pl);

// Least-squares fit of the compression coefficients from (upper, measured)
// pairs; returns {p1, p2, p3}.  Needs at least three distinct points.
std::array<double, 3> fit_compression(const std::vector<double>& cbr_u,
                                      const std::vector<double>& cbr_measured);

inline constexpr double kPsrCut = 1e-4;      // lattice truncation for load sums
inline constexpr long kMaxLatticeTerms = 100000;

}  // namespace v2x
