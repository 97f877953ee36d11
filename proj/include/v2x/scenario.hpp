#pragma once

#include <stdexcept>
#include <string>

#include "v2x/db_grid.hpp"

namespace v2x {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PathlossKind { LogDistance, WinnerB1 };

// Distance -> mean pathloss mapping; every constant is configuration-supplied.
struct PathlossSpec {
    PathlossKind kind = PathlossKind::WinnerB1;
    double d_min_m = 1.0;  // distances are clamped below this

    // log-distance: pl0 + 10*n*log10(d/ref)
    double pl0_db = 47.86;
    double exponent = 2.3;
    double ref_m = 1.0;

    // dual-slope: b1 + a1*log10(d) up to the breakpoint, b2 + a2*log10(d) past it
    double wb1_a1 = 22.7;
    double wb1_b1 = 47.86;
    double wb1_a2 = 40.0;
    double wb1_b2 = 8.97;
    double wb1_breakpoint_m = 177.0;
};

/**
 * Full description of one broadcast scenario: traffic, radio, MAC timing and
 * model knobs.  Defaults describe 190-byte beacons at 10 Hz, 6 Mbit/s and
 * 23 dBm on a 10 MHz channel.
 */
struct ScenarioConfig {
    double beta = 0.06;            // vehicle density (vehicles per meter)
    double lambda = 10.0;          // packet generation rate (Hz)
    double p_t = 23.0;             // transmit power (dBm)
    int payload_b = 190;           // application payload (bytes)
    double data_rate = 6e6;        // PHY data rate (bit/s)
    double sigma_sh = 3.0;         // shadowing std dev (dB)
    double p_sen = -85.0;          // carrier sensing threshold (dBm)
    double n0 = -95.0;             // noise floor (dBm)
    double slot_time = 13e-6;      // aSlotTime (s)
    int mac_overhead_bytes = 36;   // MAC header + FCS added to the payload
    double phy_preamble_s = 40e-6; // preamble + PLCP header duration (s)
    double symbol_s = 8e-6;        // OFDM symbol duration (s)
    bool shadowing_enabled = true;
    bool fading_lut_enabled = true;
    double snr_threshold_db = 8.0; // decode step used when the FER LUT is off
    double bandwidth_hz = 10e6;    // occupied bandwidth for Eb/N0 conversion
    double grid_step_db = 0.1;     // discretization step for power pdfs
    int cw = 15;                   // contention window (slots)

    // CBR compression polynomial cbr = p1*x^2 + p2*x + p3
    double cbr_p1 = -0.2481;
    double cbr_p2 = 0.913;
    double cbr_p3 = 0.003844;

    // Arrival-order weights of the two hidden-terminal collision terms.
    double col_weight_first = 1.0;
    double col_weight_second = 1.0;

    PathlossSpec pathloss;

    void validate() const;  // throws ConfigError

    // Stable 64-bit digest of every field, used to match artifacts produced
    // from the same scenario.
    std::string fingerprint() const;
};

// On-air duration of one packet: preamble plus ceil((service + tail +
// 8*(payload+overhead)) / bits-per-symbol) OFDM symbols.
double packet_airtime(const ScenarioConfig& cfg);

// Flat key=value scenario file ('#' comments); unknown keys are an error.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");

}  // namespace v2x
