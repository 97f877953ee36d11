#include "v2x/propagation.hpp"

#include <cmath>

namespace v2x {

double mean_rx_power(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    return cfg.p_t - pl.at(d_m);
}

double shadowing_sigma(const ScenarioConfig& cfg) {
    return cfg.shadowing_enabled ? cfg.sigma_sh : 0.0;
}

double delta_sen(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    const double margin = mean_rx_power(cfg, pl, d_m) - cfg.p_sen;
    const double sigma = shadowing_sigma(cfg);
    if (sigma == 0.0) return margin > 0.0 ? 0.0 : (margin < 0.0 ? 1.0 : 0.5);
    return 0.5 * (1.0 - std::erf(margin / (sigma * std::sqrt(2.0))));
}

double psr(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    return 1.0 - delta_sen(cfg, pl, d_m);
}

double snr_to_ebn0(const ScenarioConfig& cfg, double snr_db) {
    return snr_db + 10.0 * std::log10(cfg.bandwidth_hz / cfg.data_rate);
}

double fer_at_snr(const ScenarioConfig& cfg, const FerTable& fer, double snr_db) {
    const double ebn0 = snr_to_ebn0(cfg, snr_db);
    // Ablation: the lookup is replaced by a hard decode threshold on its argument.
    if (!cfg.fading_lut_enabled) return ebn0 < cfg.snr_threshold_db ? 1.0 : 0.0;
    return fer.lookup(ebn0);
}

DiscretePdf rx_power_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    return DiscretePdf::gaussian(mean_rx_power(cfg, pl, d_m), shadowing_sigma(cfg),
                                 cfg.grid_step_db);
}

DiscretePdf truncated_rx_power_pdf(const ScenarioConfig& cfg, const Pathloss& pl,
                                   double d_m) {
    DiscretePdf pdf = rx_power_pdf(cfg, pl, d_m);
    pdf.truncate_below(cfg.p_sen);
    return pdf;
}

DiscretePdf truncated_snr_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_m) {
    DiscretePdf pdf = truncated_rx_power_pdf(cfg, pl, d_m);
    if (pdf.empty()) return pdf;
    return DiscretePdf(pdf.origin() - cfg.n0, pdf.step(), pdf.densities());
}

double delta_pro(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
                 double d_m) {
    const DiscretePdf pdf = truncated_rx_power_pdf(cfg, pl, d_m);
    if (pdf.empty()) return 0.0;  // everything is lost to sensing already
    return pdf.expect([&](double p_dbm) { return fer_at_snr(cfg, fer, p_dbm - cfg.n0); });
}

}  // namespace v2x
