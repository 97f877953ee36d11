#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "v2x/sim.hpp"

using v2x::FerTable;
using v2x::PathlossKind;
using v2x::ScenarioConfig;
using v2x::SimReport;
using v2x::SimScenario;

namespace {

// Unit sensing probability out to exactly 505 m, zero beyond (no shadowing).
ScenarioConfig rect_cfg() {
    ScenarioConfig cfg;
    cfg.payload_b = 320;
    cfg.phy_preamble_s = 20e-6;  // airtime becomes exactly 500 us
    cfg.shadowing_enabled = false;
    cfg.pathloss.kind = PathlossKind::LogDistance;
    cfg.pathloss.exponent = 2.0;
    cfg.pathloss.ref_m = 1.0;
    cfg.pathloss.pl0_db = (cfg.p_t - cfg.p_sen) - 20.0 * std::log10(505.0);
    return cfg;
}

FerTable perfect_decode() { return v2x::parse_fer_table("0,0.0\n20,0.0"); }

// Fails below 10 dB, decodes above; the clean link at a few hundred meters
// sits comfortably above, an equal-power collision far below.
FerTable cliff_decode() { return v2x::parse_fer_table("0,1.0\n9,1.0\n10,0.0"); }

long total(const SimReport& r, long v2x::SimBin::*field) {
    long s = 0;
    for (const auto& b : r.bins) s += b.*field;
    return s;
}

}  // namespace

TEST_CASE("lattice factory places vehicles at the density spacing") {
    const SimScenario sc = SimScenario::lattice(rect_cfg(), 5000.0);
    REQUIRE(sc.positions_m.size() == 301);
    CHECK(sc.positions_m.front() == 0.0);
    CHECK(sc.positions_m.back() == doctest::Approx(5000.0).epsilon(1e-12));
    CHECK(sc.muted.size() == 301);
    for (bool m : sc.muted) CHECK_FALSE(m);
    CHECK_NOTHROW(sc.validate());
}

TEST_CASE("identical seeds reproduce the report bit for bit") {
    SimScenario sc = SimScenario::lattice(ScenarioConfig{}, 500.0);
    sc.warmup_s = 0.2;
    sc.window_s = 5.0;
    sc.validate();
    const FerTable fer = cliff_decode();

    const SimReport a = v2x::run_sim(sc, fer, 42);
    const SimReport b = v2x::run_sim(sc, fer, 42);
    REQUIRE(a.bins.size() == b.bins.size());
    for (std::size_t i = 0; i < a.bins.size(); ++i) {
        CHECK(a.bins[i].attempts == b.bins[i].attempts);
        CHECK(a.bins[i].ok == b.bins[i].ok);
        CHECK(a.bins[i].sen == b.bins[i].sen);
        CHECK(a.bins[i].rxb == b.bins[i].rxb);
        CHECK(a.bins[i].pro == b.bins[i].pro);
        CHECK(a.bins[i].col == b.bins[i].col);
    }
    CHECK(a.cbr_measured == b.cbr_measured);
    CHECK(a.seeds == std::vector<std::uint64_t>{42});

    const SimReport c = v2x::run_sim(sc, fer, 43);
    CHECK(a.cbr_measured != c.cbr_measured);
}

TEST_CASE("every attempt lands in exactly one outcome") {
    SimScenario sc = SimScenario::lattice(ScenarioConfig{}, 2000.0);
    sc.warmup_s = 0.2;
    sc.window_s = 5.0;
    sc.validate();
    const SimReport r = v2x::run_sim(sc, cliff_decode(), 7);

    long attempts = 0;
    for (const auto& b : r.bins) {
        CHECK(b.ok + b.sen + b.rxb + b.pro + b.col == b.attempts);
        attempts += b.attempts;
    }
    CHECK(attempts > 1000);
    CHECK(r.bins.size() * r.bin_m <= sc.max_bin_d_m + r.bin_m);
}

TEST_CASE("an interference-free audible pair delivers everything") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.positions_m = {0.0, 100.0};
    sc.muted = {false, false};
    sc.forced_phase_s = {0.0, 0.05};  // staggered by half a period
    sc.span_m = 100.0;
    sc.central_frac = 1.0;
    sc.warmup_s = 0.48;
    sc.window_s = 5.0;
    sc.validate();

    const SimReport r = v2x::run_sim(sc, perfect_decode(), 5);
    CHECK(total(r, &v2x::SimBin::attempts) == 100);  // 50 packets each way
    CHECK(total(r, &v2x::SimBin::ok) == 100);
}

TEST_CASE("a pair beyond the sensing range loses everything to detection") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.positions_m = {0.0, 2000.0};
    sc.muted = {false, false};
    sc.span_m = 2000.0;
    sc.central_frac = 1.0;
    sc.max_bin_d_m = 3000.0;
    sc.warmup_s = 0.48;
    sc.window_s = 5.0;
    sc.validate();

    const SimReport r = v2x::run_sim(sc, perfect_decode(), 5);
    const auto& far = r.bins[static_cast<std::size_t>(2000.0 / r.bin_m)];
    CHECK(far.attempts == 100);
    CHECK(far.sen == far.attempts);
    CHECK(total(r, &v2x::SimBin::attempts) == far.attempts);
}

TEST_CASE("a lone transmitter produces exactly its duty cycle of busy air") {
    SimScenario sc = SimScenario::lattice(rect_cfg(), 1000.0);
    sc.mute_all_but_center();
    sc.forced_phase_s.assign(sc.positions_m.size(), 0.0);
    sc.warmup_s = 0.5;
    sc.window_s = 5.0;
    sc.validate();

    const SimReport r = v2x::run_sim(sc, perfect_decode(), 11);
    // 25 central vehicles; the transmitter contributes no busy air to itself
    const double lt = sc.cfg.lambda * v2x::packet_airtime(sc.cfg);
    CHECK(r.cbr_measured == doctest::Approx(lt * 24.0 / 25.0).epsilon(1e-9));
    for (const auto& b : r.bins)
        CHECK(b.ok == b.attempts);  // nothing else on the air, nothing lost
}

TEST_CASE("synchronized hidden transmitters overlap into a single busy stretch") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.positions_m = {0.0, 800.0, 400.0};  // outer pair mutually hidden
    sc.muted = {false, false, true};       // center vehicle only listens
    sc.forced_phase_s = {0.0, 0.0, 0.0};
    sc.span_m = 800.0;
    sc.central_frac = 0.1;  // statistics from the listener alone
    sc.warmup_s = 0.5;
    sc.window_s = 5.0;
    sc.validate();

    const double lt = sc.cfg.lambda * v2x::packet_airtime(sc.cfg);
    const SimReport together = v2x::run_sim(sc, perfect_decode(), 3);
    CHECK(together.cbr_measured == doctest::Approx(lt).epsilon(1e-9));

    sc.forced_phase_s = {0.0, 0.05, 0.0};  // now disjoint in time
    const SimReport apart = v2x::run_sim(sc, perfect_decode(), 3);
    CHECK(apart.cbr_measured == doctest::Approx(2.0 * lt).epsilon(1e-9));
}

TEST_CASE("the stronger of two simultaneous frames wins the radio") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.positions_m = {100.0, 800.0, 400.0};  // transmitters hidden from each other
    sc.muted = {false, false, true};         // the middle vehicle only receives
    sc.forced_phase_s = {0.0, 0.0, 0.0};
    sc.span_m = 800.0;
    sc.central_frac = 1.0;
    sc.warmup_s = 0.48;
    sc.window_s = 5.0;
    sc.validate();

    const SimReport r = v2x::run_sim(sc, cliff_decode(), 17);
    const auto& near = r.bins[static_cast<std::size_t>(300.0 / r.bin_m)];
    const auto& far = r.bins[static_cast<std::size_t>(400.0 / r.bin_m)];
    CHECK(near.attempts == 50);
    CHECK(near.col == near.attempts);  // captured but jammed by the other frame
    CHECK(far.attempts == 50);
    CHECK(far.rxb == far.attempts);  // arrived while the radio was taken

    // the outcome must not depend on vehicle enumeration order
    SimScenario swapped = sc;
    swapped.positions_m = {800.0, 100.0, 400.0};
    const SimReport r2 = v2x::run_sim(swapped, cliff_decode(), 17);
    const auto& near2 = r2.bins[static_cast<std::size_t>(300.0 / r2.bin_m)];
    const auto& far2 = r2.bins[static_cast<std::size_t>(400.0 / r2.bin_m)];
    CHECK(near2.col == near.col);
    CHECK(far2.rxb == far.rxb);
}

TEST_CASE("random hidden-pair overlap matches twice the airtime exposure") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.cfg.lambda = 100.0;  // short periods keep many replications cheap
    sc.positions_m = {0.0, 800.0, 400.0};
    sc.muted = {false, false, true};
    sc.span_m = 800.0;
    sc.central_frac = 1.0;
    sc.warmup_s = 0.5;
    sc.window_s = 0.6;
    sc.validate();

    const SimReport r = v2x::run_replications(sc, cliff_decode(), 2024, 1500);
    const auto& bin = r.bins[static_cast<std::size_t>(400.0 / r.bin_m)];
    REQUIRE(bin.attempts > 100000);
    const double frac =
        static_cast<double>(bin.rxb + bin.col) / static_cast<double>(bin.attempts);
    // each replication overlaps entirely or not at all; the overlap chance is
    // 2*lambda*T = 0.1 and 1500 replications put 3 sigma at 0.024
    CHECK(std::fabs(frac - 0.1) <= 0.025);
}

TEST_CASE("merged reports sum counts and average the busy ratio") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.positions_m = {0.0, 100.0};
    sc.muted = {false, false};
    sc.span_m = 100.0;
    sc.central_frac = 1.0;
    sc.warmup_s = 0.2;
    sc.window_s = 5.0;
    sc.validate();
    const FerTable fer = perfect_decode();

    const SimReport a = v2x::run_sim(sc, fer, 1);
    const SimReport b = v2x::run_sim(sc, fer, 2);
    const SimReport m = v2x::merge_reports({a, b});
    CHECK(m.replications == 2);
    CHECK(m.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(total(m, &v2x::SimBin::attempts) ==
          total(a, &v2x::SimBin::attempts) + total(b, &v2x::SimBin::attempts));
    CHECK(m.cbr_measured ==
          doctest::Approx((a.cbr_measured + b.cbr_measured) / 2.0).epsilon(1e-12));

    SimReport alien = b;
    alien.fingerprint = "something-else";
    CHECK_THROWS_AS(v2x::merge_reports({a, alien}), v2x::ConfigError);
}

TEST_CASE("replication helper equals manually merged runs") {
    SimScenario sc;
    sc.cfg = rect_cfg();
    sc.positions_m = {0.0, 100.0};
    sc.muted = {false, false};
    sc.span_m = 100.0;
    sc.central_frac = 1.0;
    sc.warmup_s = 0.2;
    sc.window_s = 5.0;
    const FerTable fer = perfect_decode();

    const SimReport two = v2x::run_replications(sc, fer, 9, 2);
    const SimReport m = v2x::merge_reports({v2x::run_sim(sc, fer, 9), v2x::run_sim(sc, fer, 10)});
    CHECK(two.cbr_measured == m.cbr_measured);
    CHECK(total(two, &v2x::SimBin::ok) == total(m, &v2x::SimBin::ok));
    CHECK_THROWS_AS(v2x::run_replications(sc, fer, 9, 0), v2x::ConfigError);
}

TEST_CASE("simulation reports round-trip through their file format") {
    SimScenario sc = SimScenario::lattice(ScenarioConfig{}, 500.0);
    sc.warmup_s = 0.2;
    sc.window_s = 5.0;
    const SimReport r = v2x::run_replications(sc, cliff_decode(), 21, 2);

    const std::string path = "sim_roundtrip_test.csv";
    v2x::write_sim_csv(r, path);
    const SimReport back = v2x::read_sim_csv(path);
    std::remove(path.c_str());

    CHECK(back.fingerprint == r.fingerprint);
    CHECK(back.seeds == r.seeds);
    CHECK(back.replications == r.replications);
    CHECK(back.bin_m == r.bin_m);
    REQUIRE(back.bins.size() == r.bins.size());
    for (std::size_t i = 0; i < r.bins.size(); ++i) {
        CHECK(back.bins[i].attempts == r.bins[i].attempts);
        CHECK(back.bins[i].ok == r.bins[i].ok);
        CHECK(back.bins[i].sen == r.bins[i].sen);
        CHECK(back.bins[i].rxb == r.bins[i].rxb);
        CHECK(back.bins[i].pro == r.bins[i].pro);
        CHECK(back.bins[i].col == r.bins[i].col);
        CHECK(back.bins[i].pair_units == r.bins[i].pair_units);
    }
    CHECK(std::fabs(back.cbr_measured - r.cbr_measured) <= 1e-9);
}

TEST_CASE("scenario validation rejects under-sampled windows") {
    SimScenario sc = SimScenario::lattice(rect_cfg(), 500.0);
    sc.window_s = 4.9;  // fewer than 50 packet periods at 10 Hz
    CHECK_THROWS_AS(sc.validate(), v2x::ConfigError);
    sc.window_s = 5.0;
    CHECK_NOTHROW(sc.validate());
    sc.muted.pop_back();
    CHECK_THROWS_AS(sc.validate(), v2x::ConfigError);
}
