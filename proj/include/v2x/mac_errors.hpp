#pragma once

#include <vector>

#include "v2x/channel_load.hpp"
#include "v2x/fer_table.hpp"
#include "v2x/pathloss.hpp"
#include "v2x/propagation.hpp"
#include "v2x/scenario.hpp"

namespace v2x {

struct Interferer {
    double x_m;    // road position, transmitter sits at x = 0
    double d_ti;   // distance interferer -> transmitter
    double d_ir;   // distance interferer -> receiver
};

// Transmitter at x=0, receiver at x=d_tr (not itself a lattice member),
// interferers on the lattice i/beta.
struct LinkGeometry {
    double d_tr = 0.0;
    std::vector<Interferer> interferers;
};

// Lattice interferers with d_ir within the given radius.  The default radius
// is interference_radius(), beyond which a vehicle can affect neither
// detection nor SINR on the discretization grid.
LinkGeometry make_lattice_geometry(const ScenarioConfig& cfg, const Pathloss& pl,
                                   double d_tr_m);
LinkGeometry make_lattice_geometry(const ScenarioConfig& cfg, const Pathloss& pl,
                                   double d_tr_m, double radius_m);

// Distance beyond which an interferer's received power pdf collapses into the
// noise-floor bin (and its PSR is negligible), making its contribution vanish.
double interference_radius(const ScenarioConfig& cfg, const Pathloss& pl);

// Normalized lattice autocorrelation of the PSR curve at lag d; r_psr(0) = 1.
double r_psr(const ScenarioConfig& cfg, const Pathloss& pl, double d_m);

// Fraction of time the channel appears free at a vehicle at distance d from
// the ego transmitter: 1 - cbr * r_psr(d).  Requires cbr in [0,1).
double omega(const ScenarioConfig& cfg, const Pathloss& pl, double d_m, double cbr);

// Probability an interferer at d_ti starts during the packet airtime while
// hidden from the transmitter: lambda * T * (1 - PSR(d_ti)) / omega(d_ti).
double p_sim_ht(const ScenarioConfig& cfg, const Pathloss& pl, double d_ti_m, double cbr);

// Probability of a backoff-expiry concurrent start within one slot:
// lambda * aSlotTime * PSR(d_ti) / omega(d_ti).
double p_sim_ct(const ScenarioConfig& cfg, const Pathloss& pl, double d_ti_m, double cbr);

// Cores with every dependency explicit (clamped to [0,1]).
double p_sim_ht_core(double lambda_hz, double airtime_s, double psr_ti, double omega_v);
double p_sim_ct_core(double lambda_hz, double slot_s, double psr_ti, double omega_v);

// Receiver-busy probability: 1 - prod_i (1 - delta_rxb_i), where vehicle i
// contributes p_sim_ht*psr(d_ir) plus, when closer to the receiver than the
// transmitter, p_sim_ct*psr(d_ir).
double delta_rxb(const ScenarioConfig& cfg, const Pathloss& pl, const LinkGeometry& geom,
                 double cbr);

// Noise-plus-interference power pdf at the receiver for an interferer at
// d_ir: shadowed power mapped through the linear-domain noise floor addition.
// The grid is anchored exactly at n0.
DiscretePdf interference_pdf(const ScenarioConfig& cfg, const Pathloss& pl, double d_ir_m);

// Error probability with the interferer active: E[FER] over the SINR pdf,
// built as the difference of the sensing-truncated received power pdf and the
// interference pdf.
double p_sinr(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
              double d_tr_m, double d_ir_m);

// Interference-attributable error probability among packets that survive
// noise alone: max(0, (p_sinr - delta_pro) / (1 - delta_pro)).
double p_int(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
             double d_tr_m, double d_ir_m);
double p_int_core(double p_sinr_v, double delta_pro_v);

// Per-interferer collision probability from the two hidden-terminal arrival
// orders plus the concurrent-start branch (gated to interferers at least as
// far from the receiver as the transmitter).
double col_term(const ScenarioConfig& cfg, double p_sim_ht_v, double p_sim_ct_v,
                double p_int_v, double psr_ir, bool ct_gate);

// Collision probability: 1 - prod_i (1 - col_term_i).
double delta_col(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
                 const LinkGeometry& geom, double cbr);

}  // namespace v2x
