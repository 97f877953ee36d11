#include "v2x/mac_errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2x {

double interference_radius(const ScenarioConfig& cfg, const Pathloss& pl) {
    const double sigma = shadowing_sigma(cfg);
    // received power below this never leaves the n0 bin of the grid
    const double collapse =
        cfg.n0 + 10.0 * std::log10(std::pow(10.0, cfg.grid_step_db / 20.0) - 1.0);
    const double pl_int = cfg.p_t + 6.0 * sigma - collapse;
    const double pl_det = cfg.p_t - cfg.p_sen + 6.5 * sigma;
    return pl.distance_for_loss(std::max(pl_int, pl_det)) + 1.0 / cfg.beta;
}

LinkGeometry make_lattice_geometry(const ScenarioConfig& cfg, const Pathloss& pl,
                                   double d_tr_m) {
    return make_lattice_geometry(cfg, pl, d_tr_m, interference_radius(cfg, pl));
}

LinkGeometry make_lattice_geometry(const ScenarioConfig& cfg, const Pathloss& pl,
                                   double d_tr_m, double radius_m) {
    (void)pl;
    LinkGeometry g;
    g.d_tr = d_tr_m;
    const auto i_lo = static_cast<long>(std::ceil((d_tr_m - radius_m) * cfg.beta));
    const auto i_hi = static_cast<long>(std::floor((d_tr_m + radius_m) * cfg.beta));
    if (i_hi - i_lo > 4 * kMaxLatticeTerms)
        throw std::invalid_argument("make_lattice_geometry: lattice too large");
    for (long i = i_lo; i <= i_hi; ++i) {
        if (i == 0) continue;  // the transmitter itself
        const double x = static_cast<double>(i) / cfg.beta;
        g.interferers.push_back({x, std::abs(x), std::abs(x - d_tr_m)});
    }
    return g;
}

double r_psr(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    const double s = 1.0 / cfg.beta;
    long jmax = 1;
    while (jmax < kMaxLatticeTerms && psr(cfg, pl, static_cast<double>(jmax) * s) >= kPsrCut)
        ++jmax;
    double num = 0.0, den = 0.0;
    for (long j = -jmax; j <= jmax; ++j) {
        const double base = psr(cfg, pl, std::abs(static_cast<double>(j) * s));
        num += psr(cfg, pl, std::abs(static_cast<double>(j) * s + d_m)) * base;
        den += base * base;
    }
    if (den == 0.0) return d_m == 0.0 ? 1.0 : 0.0;
    return std::clamp(num / den, 0.0, 1.0);
}

double omega(const ScenarioConfig& cfg, const Pathloss& pl, double d_m, double cbr) {
    if (cbr < 0.0 || cbr >= 1.0)
        throw std::domain_error("omega: cbr must lie in [0,1) (saturated channel unsupported)");
    return 1.0 - cbr * r_psr(cfg, pl, d_m);
}

double p_sim_ht_core(double lambda_hz, double airtime_s, double psr_ti, double omega_v) {
    return std::clamp(lambda_hz * airtime_s * (1.0 - psr_ti) / omega_v, 0.0, 1.0);
}

double p_sim_ct_core(double lambda_hz, double slot_s, double psr_ti, double omega_v) {
    return std::clamp(lambda_hz * slot_s * psr_ti / omega_v, 0.0, 1.0);
}

double p_sim_ht(const ScenarioConfig& cfg, const Pathloss& pl, double d_ti_m, double cbr) {
    return p_sim_ht_core(cfg.lambda, packet_airtime(cfg), psr(cfg, pl, d_ti_m),
                         omega(cfg, pl, d_ti_m, cbr));
}

double p_sim_ct(const ScenarioConfig& cfg, const Pathloss& pl, double d_ti_m, double cbr) {
    return p_sim_ct_core(cfg.lambda, cfg.slot_time, psr(cfg, pl, d_ti_m),
                         omega(cfg, pl, d_ti_m, cbr));
}

double delta_rxb(const ScenarioConfig& cfg, const Pathloss& pl, const LinkGeometry& geom,
                 double cbr) {
    double prod = 1.0;
    for (const auto& in : geom.interferers) {
        const double det = psr(cfg, pl, in.d_ir);
        double term = p_sim_ht(cfg, pl, in.d_ti, cbr) * det;
        if (in.d_ir < geom.d_tr)  // closer interferer wins the radio
            term += p_sim_ct(cfg, pl, in.d_ti, cbr) * det;
        prod *= 1.0 - std::clamp(term, 0.0, 1.0);
    }
    return 1.0 - prod;
}

DiscretePdf interference_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_ir_m) {
    const DiscretePdf p = DiscretePdf::gaussian(mean_rx_power(cfg, pl, d_ir_m),
                                                shadowing_sigma(cfg), cfg.grid_step_db);
    return p.add_power_floor(cfg.n0);
}

double p_sinr(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
              double d_tr_m, double d_ir_m) {
    const DiscretePdf rx = truncated_rx_power_pdf(cfg, pl, d_tr_m);
    if (rx.empty()) return 0.0;
    const DiscretePdf sinr = rx.difference(interference_pdf(cfg, pl, d_ir_m));
    return sinr.expect([&](double s) { return fer_at_snr(cfg, fer, s); });
}

double p_int_core(double p_sinr_v, double delta_pro_v) {
    if (delta_pro_v >= 1.0) return 0.0;
    return std::clamp((p_sinr_v - delta_pro_v) / (1.0 - delta_pro_v), 0.0, 1.0);
}

double p_int(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
             double d_tr_m, double d_ir_m) {
    return p_int_core(p_sinr(cfg, pl, fer, d_tr_m, d_ir_m),
                      delta_pro(cfg, pl, fer, d_tr_m));
}

double col_term(const ScenarioConfig& cfg, double p_sim_ht_v, double p_sim_ct_v,
                double p_int_v, double psr_ir, bool ct_gate) {
    double term = cfg.col_weight_first * p_sim_ht_v * p_int_v +
                  cfg.col_weight_second * p_sim_ht_v * p_int_v * (1.0 - psr_ir);
    if (ct_gate) term += p_sim_ct_v * p_int_v;
    return std::clamp(term, 0.0, 1.0);
}

double delta_col(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
                 const LinkGeometry& geom, double cbr) {
    const DiscretePdf rx = truncated_rx_power_pdf(cfg, pl, geom.d_tr);
    if (rx.empty()) return 0.0;

    // fer_vs_noise[j]: expected FER when the noise-plus-interference level
    // sits j grid steps above n0; index 0 doubles as delta_pro.
    std::vector<double> fer_vs_noise;
    auto fer_at_level = [&](std::size_t j) {
        while (fer_vs_noise.size() <= j) {
            const double level = cfg.n0 + static_cast<double>(fer_vs_noise.size()) *
                                              cfg.grid_step_db;
            fer_vs_noise.push_back(
                rx.expect([&](double p) { return fer_at_snr(cfg, fer, p - level); }));
        }
        return fer_vs_noise[j];
    };
    const double dpro = fer_at_level(0);

    double prod = 1.0;
    for (const auto& in : geom.interferers) {
        const DiscretePdf fi = interference_pdf(cfg, pl, in.d_ir);
        double ps = 0.0;
        for (std::size_t j = 0; j < fi.size(); ++j) {
            if (fi.density(j) == 0.0) continue;
            ps += fi.density(j) * fer_at_level(j);
        }
        ps *= fi.step();
        const double pint = p_int_core(ps, dpro);

        const double om = omega(cfg, pl, in.d_ti, cbr);
        const double term = col_term(
            cfg, p_sim_ht_core(cfg.lambda, packet_airtime(cfg), psr(cfg, pl, in.d_ti), om),
            p_sim_ct_core(cfg.lambda, cfg.slot_time, psr(cfg, pl, in.d_ti), om), pint,
            psr(cfg, pl, in.d_ir), in.d_ir >= geom.d_tr);
        prod *= 1.0 - term;
    }
    return 1.0 - prod;
}

}  // namespace v2x
