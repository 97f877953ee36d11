#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "v2x/fer_table.hpp"
#include "v2x/scenario.hpp"

namespace v2x {

/**
 * One simulated road.  Vehicles broadcast periodically with a random (or
 * forced) phase, defer via CSMA/CA, and every transmission is classified at
 * every receiver as OK or exactly one of the four error types.
 *
 * Shadowing is frozen per ordered vehicle pair for a whole replication;
 * carrier sensing reacts with a small latency (cca_s), which is what lets two
 * backoff timers expiring within a slot start concurrent transmissions.
 */
struct SimScenario {
    ScenarioConfig cfg;
    std::vector<double> positions_m;
    std::vector<bool> muted;            // muted vehicles listen but never transmit
    std::vector<double> forced_phase_s; // empty -> uniform random phases

    double span_m = 5000.0;
    double central_frac = 0.4;  // statistics come from this central share of the span
    double warmup_s = 1.0;
    double window_s = 19.0;     // measurement window after warm-up
    double bin_m = 25.0;
    double max_bin_d_m = 1000.0;
    double cca_s = -1.0;        // sensing latency; negative -> slot_time / 2

    // Lattice of vehicles at i/beta covering [0, span].
    static SimScenario lattice(const ScenarioConfig& cfg, double span_m = 5000.0);

    // Keeps only the vehicle closest to the road center transmitting.
    void mute_all_but_center();

    void validate() const;  // throws ConfigError
    double cca() const { return cca_s < 0.0 ? 0.5 * cfg.slot_time : cca_s; }
};

struct SimBin {
    long attempts = 0;
    long ok = 0, sen = 0, rxb = 0, pro = 0, col = 0;
    long pair_units = 0;  // distinct (tx, rx) pairs x replications
};

struct SimReport {
    std::string fingerprint;
    std::vector<std::uint64_t> seeds;
    int replications = 0;
    double bin_m = 25.0;
    std::vector<SimBin> bins;    // bin k covers [k*bin_m, (k+1)*bin_m)
    double cbr_measured = 0.0;   // mean over central vehicles (and replications)
};

// One replication; bit-identical output for identical scenario and seed.
SimReport run_sim(const SimScenario& sc, const FerTable& fer, std::uint64_t seed);

// Replication r uses seed base_seed + r; counts are summed, CBR averaged.
SimReport run_replications(const SimScenario& sc, const FerTable& fer,
                           std::uint64_t base_seed, int replications);

SimReport merge_reports(const std::vector<SimReport>& parts);

double measure_cbr(const SimReport& report);

void write_sim_csv(const SimReport& report, const std::string& path);
SimReport read_sim_csv(const std::string& path);

}  // namespace v2x
