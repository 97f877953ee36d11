#pragma once

#include "v2x/db_grid.hpp"
#include "v2x/fer_table.hpp"
#include "v2x/pathloss.hpp"
#include "v2x/scenario.hpp"

namespace v2x {

// Mean received power Pt - PL(d) in dBm; shadowing spreads a Gaussian of
// sigma_sh around it.
double mean_rx_power(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// Effective shadowing std dev: 0 when the shadowing toggle is off.
double shadowing_sigma(const ScenarioConfig& cfg);

// Probability the packet arrives below the sensing threshold:
// 0.5*(1 - erf((Pt - PL(d) - Psen) / (sigma*sqrt(2)))).  With sigma = 0 this
// degenerates to a step (1/2 exactly at the threshold).
double delta_sen(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// Packet sensing ratio, 1 - delta_sen.
double psr(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// SNR -> Eb/N0: snr + 10*log10(bandwidth / data_rate).
double snr_to_ebn0(const ScenarioConfig& cfg, double snr_db);

// Frame error probability at a given SNR (or SINR).  With the fading LUT on,
// the SNR is converted to Eb/N0 and looked up; with it off the decode check
// is a hard threshold on the SNR itself.
double fer_at_snr(const ScenarioConfig& cfg, const FerTable& fer, double snr_db);

// Received-power pdf at distance d (Gaussian in dBm, or a point mass when
// sigma = 0), discretized at cfg.grid_step_db.
DiscretePdf rx_power_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// The same pdf conditioned on Pr > Psen: mass below the sensing threshold is
// removed and the remainder renormalized.  Empty when essentially no mass
// survives (delta_sen ~ 1).
DiscretePdf truncated_rx_power_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// Conditional SNR pdf given the packet was sensed: the truncated power pdf
// shifted down by the noise floor.
DiscretePdf truncated_snr_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// Probability the sensed packet still fails on noise alone:
// E[FER(Eb/N0)] over the truncated SNR pdf.  Returns 0 when delta_sen = 1.
double delta_pro(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
                 double d_m);

}  // namespace v2x
