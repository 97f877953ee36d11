#pragma once

#include <map>
#include <string>
#include <vector>

#include "v2x/pdr.hpp"
#include "v2x/sim.hpp"

namespace v2x {

// Mean absolute deviation between two equally long curves, in percent of 1.
double mad_pct(const std::vector<double>& a, const std::vector<double>& b);

struct Tolerances {
    double mad_pdr_max_pct = 2.0;
    double mad_dsen_max_pct = 5.0;
    double mad_drxb_max_pct = 5.0;
    double mad_dpro_max_pct = 5.0;
    double mad_dcol_max_pct = 5.0;
    double cbr_abs_max = 0.03;
    long min_attempts = 200;  // bins below this are excluded from the MADs
};

Tolerances load_tolerances(const std::string& path);

struct ComparisonReport {
    std::string scenario;
    double mad_pdr_pct = 0.0;
    double mad_dsen_pct = 0.0;
    double mad_drxb_pct = 0.0;
    double mad_dpro_pct = 0.0;
    double mad_dcol_pct = 0.0;
    double cbr_analytic = 0.0;
    double cbr_measured = 0.0;
    bool pass = false;
    long bins_used = 0;
    std::vector<double> excluded_bins_m;  // centers dropped for thin statistics
};

// Evaluates the analytic curve at the simulation bin centers and reports the
// MAD of the PDR and of each normalized error share.  Refuses to compare
// artifacts with different scenario fingerprints.
ComparisonReport compare(const LinkCurve& curve, const SimReport& sim,
                         const Tolerances& tol);

void write_report_json(const ComparisonReport& rep, const std::string& path);

struct SweepSpec {
    std::string base_config;
    std::string fer_table;
    // scenario field -> values; the run covers the full cross product
    std::map<std::string, std::vector<double>> axes;
    double duration_s = 20.0;
    double warmup_s = 1.0;
    double span_m = 5000.0;
    double bin_m = 25.0;
    double max_d_m = 1000.0;
    int replications = 3;
    std::uint64_t seed = 1;
    Tolerances tol;
};

SweepSpec load_sweep_spec(const std::string& path);

struct SweepPoint {
    std::string tag;
    ScenarioConfig cfg;
    ComparisonReport report;
    double cbr_upper = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::array<double, 3> fitted_compression{0.0, 0.0, 0.0};  // {p1, p2, p3}
    bool fit_valid = false;
    bool all_pass = false;
};

// Runs analytic + simulation + comparison for every point and drops curve,
// simulation and report files into out_dir, together with the
// (cbr_upper, cbr_measured) table and a refitted compression polynomial.
SweepResult sweep_runner(const SweepSpec& spec, const std::string& out_dir);

ScenarioConfig apply_override(ScenarioConfig cfg, const std::string& key, double value);

}  // namespace v2x
