#include "v2x/channel_load.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2x {

double load_at(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    return cfg.lambda * packet_airtime(cfg) * psr(cfg, pl, d_m);
}

double cbr_upper(const ScenarioConfig& cfg, const Pathloss& pl) {
    double sum = 0.0;
    for (long i = 1; i <= kMaxLatticeTerms; ++i) {
        const double d = static_cast<double>(i) / cfg.beta;
        sum += 2.0 * load_at(cfg, pl, d);  // lattice is symmetric around ego
        if (psr(cfg, pl, d) < kPsrCut) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double cbr_from_upper(const ScenarioConfig& cfg, double cbr_u) {
    if (cbr_u < 0.0 || cbr_u > 1.0)
        throw std::invalid_argument("cbr_from_upper: cbr_u outside [0,1]");
    const double y = cfg.cbr_p1 * cbr_u * cbr_u + cfg.cbr_p2 * cbr_u + cfg.cbr_p3;
    return std::clamp(y, 0.0, 1.0);
}

CbrEstimate estimate_cbr(const ScenarioConfig& cfg, const Pathloss& pl) {
    CbrEstimate e;
    e.upper = cbr_upper(cfg, pl);
    e.compressed = cbr_from_upper(cfg, e.upper);
    return e;
}

std::array<double, 3> fit_compression(const std::vector<double>& cbr_u,
                                      const std::vector<double>& cbr_measured) {
    if (cbr_u.size() != cbr_measured.size())
        throw std::invalid_argument("fit_compression: length mismatch");
    if (cbr_u.size() < 3)
        throw std::invalid_argument("fit_compression: need at least three points");

    // normal equations for y = a*x^2 + b*x + c
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t k = 0; k < cbr_u.size(); ++k) {
        const double x = cbr_u[k], y = cbr_measured[k];
        const double x2 = x * x;
        s0 += 1; s1 += x; s2 += x2; s3 += x2 * x; s4 += x2 * x2;
        t0 += y; t1 += x * y; t2 += x2 * y;
    }
    double m[3][4] = {{s4, s3, s2, t2}, {s3, s2, s1, t1}, {s2, s1, s0, t0}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12)
            throw std::invalid_argument("fit_compression: degenerate points");
        std::swap(m[piv], m[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace v2x
