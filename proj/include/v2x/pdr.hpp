#pragma once

#include <string>
#include <vector>

#include "v2x/fer_table.hpp"
#include "v2x/mac_errors.hpp"
#include "v2x/pathloss.hpp"
#include "v2x/scenario.hpp"

namespace v2x {

struct ErrorProbs {
    double sen = 0.0, rxb = 0.0, pro = 0.0, col = 0.0;
};

struct PdrPoint {
    double pdr = 1.0;
    ErrorProbs raw;     // conditional probabilities
    ErrorProbs hatted;  // normalized, mutually exclusive shares
};

// PDR = prod(1 - delta); hatted values chain the survival probabilities so
// that pdr + sum(hatted) = 1.
PdrPoint compose_pdr(const ErrorProbs& d);

struct LinkCurve {
    std::string fingerprint;
    double cbr = 0.0;  // network CBR used for the MAC error terms
    std::vector<double> distance_m;
    std::vector<PdrPoint> points;
};

struct SweepOptions {
    bool interference = true;  // when false only SEN and PRO are evaluated
};

// Evaluates the full error decomposition on the distance grid.  The network
// CBR is estimated once per scenario and reused for every distance.
LinkCurve sweep(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
                const std::vector<double>& d_grid_m, const SweepOptions& opt = {});

std::vector<double> default_distance_grid(double max_m = 1000.0, double step_m = 10.0);

void write_curve_csv(const LinkCurve& curve, const std::string& path);
LinkCurve read_curve_csv(const std::string& path);

}  // namespace v2x
