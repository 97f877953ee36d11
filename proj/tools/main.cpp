// Command line front end: analytic sweeps, event-driven simulation, curve
// comparison, channel-load estimation and batch sweeps.
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "v2x/channel_load.hpp"
#include "v2x/eval.hpp"
#include "v2x/fer_table.hpp"
#include "v2x/pdr.hpp"
#include "v2x/sim.hpp"

namespace {

int cmd_analytic(const std::string& config, const std::string& fer_path,
                 const std::string& out, double d_max, double d_step,
                 bool no_interference) {
    v2x::ScenarioConfig cfg = v2x::load_scenario(config);
    v2x::FerTable fer = v2x::load_fer_table(fer_path);
    v2x::Pathloss pl(cfg.pathloss);
    v2x::SweepOptions opt;
    opt.interference = !no_interference;
    v2x::LinkCurve curve =
        v2x::sweep(cfg, pl, fer, v2x::default_distance_grid(d_max, d_step), opt);
    v2x::write_curve_csv(curve, out);
    std::printf("scenario %s  cbr %.4f  points %zu  -> %s\n",
                curve.fingerprint.c_str(), curve.cbr, curve.distance_m.size(),
                out.c_str());
    return 0;
}

int cmd_simulate(const std::string& config, const std::string& fer_path,
                 const std::string& out, std::uint64_t seed, double duration_s,
                 double warmup_s, int replications, double bin_m, double span_m,
                 double max_d, bool single_transmitter) {
    v2x::ScenarioConfig cfg = v2x::load_scenario(config);
    v2x::FerTable fer = v2x::load_fer_table(fer_path);
    v2x::SimScenario sc = v2x::SimScenario::lattice(cfg, span_m);
    sc.warmup_s = warmup_s;
    sc.window_s = duration_s - warmup_s;
    sc.bin_m = bin_m;
    sc.max_bin_d_m = max_d;
    if (single_transmitter) sc.mute_all_but_center();
    sc.validate();
    v2x::SimReport rep = v2x::run_replications(sc, fer, seed, replications);
    v2x::write_sim_csv(rep, out);
    long attempts = 0, ok = 0;
    for (const auto& b : rep.bins) {
        attempts += b.attempts;
        ok += b.ok;
    }
    std::printf("scenario %s  replications %d  attempts %ld  delivered %ld  cbr %.4f  -> %s\n",
                rep.fingerprint.c_str(), replications, attempts, ok,
                rep.cbr_measured, out.c_str());
    return 0;
}

int cmd_compare(const std::string& curve_path, const std::string& sim_path,
                const std::string& tol_path, const std::string& out) {
    v2x::LinkCurve curve = v2x::read_curve_csv(curve_path);
    v2x::SimReport sim = v2x::read_sim_csv(sim_path);
    v2x::Tolerances tol;
    if (!tol_path.empty()) tol = v2x::load_tolerances(tol_path);
    v2x::ComparisonReport rep = v2x::compare(curve, sim, tol);
    std::printf("MAD%%  pdr %.3f  sen %.3f  rxb %.3f  pro %.3f  col %.3f\n",
                rep.mad_pdr_pct, rep.mad_dsen_pct, rep.mad_drxb_pct,
                rep.mad_dpro_pct, rep.mad_dcol_pct);
    std::printf("cbr   analytic %.4f  measured %.4f  |diff| %.4f\n",
                rep.cbr_analytic, rep.cbr_measured,
                std::fabs(rep.cbr_analytic - rep.cbr_measured));
    std::printf("bins  used %ld  excluded %zu\n", rep.bins_used,
                rep.excluded_bins_m.size());
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
    if (!out.empty()) v2x::write_report_json(rep, out);
    return rep.pass ? 0 : 2;
}

int cmd_cbr(const std::string& config, const std::string& fit_csv) {
    v2x::ScenarioConfig cfg = v2x::load_scenario(config);
    v2x::Pathloss pl(cfg.pathloss);
    v2x::CbrEstimate est = v2x::estimate_cbr(cfg, pl);
    std::printf("cbr_upper %.6f  cbr %.6f\n", est.upper, est.compressed);
    if (!fit_csv.empty()) {
        std::ifstream in(fit_csv);
        if (!in) throw std::runtime_error("cannot read " + fit_csv);
        std::vector<double> us, ms;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            double u, m;
            if (std::sscanf(line.c_str(), "%lf,%lf", &u, &m) == 2) {
                us.push_back(u);
                ms.push_back(m);
            }
        }
        auto p = v2x::fit_compression(us, ms);
        std::printf("fitted p1 %.6f  p2 %.6f  p3 %.6f  (%zu points)\n", p[0], p[1],
                    p[2], us.size());
    }
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
    v2x::SweepSpec spec = v2x::load_sweep_spec(spec_path);
    v2x::SweepResult res = v2x::sweep_runner(spec, out_dir);
    for (const auto& pt : res.points)
        std::printf("%-40s %s  mad_pdr %.3f%%  cbr %0.4f/%0.4f\n", pt.tag.c_str(),
                    pt.report.pass ? "PASS" : "FAIL", pt.report.mad_pdr_pct,
                    pt.report.cbr_analytic, pt.report.cbr_measured);
    if (res.fit_valid)
        std::printf("fitted compression: p1 %.6f  p2 %.6f  p3 %.6f\n",
                    res.fitted_compression[0], res.fitted_compression[1],
                    res.fitted_compression[2]);
    std::printf("%s\n", res.all_pass ? "ALL PASS" : "SOME FAIL");
    return res.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Broadcast V2V link performance: analytic model and reference simulation"};
    app.require_subcommand(1);

    std::string config, fer_path, out, curve_path, sim_path, tol_path, fit_csv,
        spec_path, out_dir;
    double d_max = 1000.0, d_step = 10.0, duration_s = 20.0, warmup_s = 1.0,
           bin_m = 25.0, span_m = 5000.0, max_d = 1000.0;
    std::uint64_t seed = 1;
    int replications = 3;
    bool no_interference = false, single_transmitter = false;

    auto* a = app.add_subcommand("analytic", "Evaluate the analytic curve on a distance grid");
    a->add_option("--config", config, "scenario file")->required();
    a->add_option("--fer-table", fer_path, "frame error rate table CSV")->required();
    a->add_option("--out", out, "output curve CSV")->required();
    a->add_option("--d-max", d_max, "largest distance [m]");
    a->add_option("--d-step", d_step, "grid step [m]");
    a->add_flag("--no-interference", no_interference,
                "skip the busy/collision terms (propagation only)");

    auto* s = app.add_subcommand("simulate", "Run the event-driven reference simulation");
    s->add_option("--config", config, "scenario file")->required();
    s->add_option("--fer-table", fer_path, "frame error rate table CSV")->required();
    s->add_option("--out", out, "output per-bin CSV")->required();
    s->add_option("--seed", seed, "base RNG seed");
    s->add_option("--duration-s", duration_s, "simulated time per replication [s]");
    s->add_option("--warmup-s", warmup_s, "discarded start-up time [s]");
    s->add_option("--replications", replications, "independent replications");
    s->add_option("--bin-m", bin_m, "distance bin width [m]");
    s->add_option("--span-m", span_m, "road length [m]");
    s->add_option("--max-d", max_d, "largest recorded distance [m]");
    s->add_flag("--single-transmitter", single_transmitter,
                "only the central vehicle transmits");

    auto* c = app.add_subcommand("compare", "Compare an analytic curve against simulation output");
    c->add_option("--curve", curve_path, "analytic curve CSV")->required();
    c->add_option("--sim", sim_path, "simulation CSV")->required();
    c->add_option("--tolerances", tol_path, "tolerance file (defaults apply when omitted)");
    c->add_option("--out", out, "report JSON path");

    auto* b = app.add_subcommand("cbr", "Estimate the channel busy ratio");
    b->add_option("--config", config, "scenario file")->required();
    b->add_option("--fit", fit_csv, "refit the compression polynomial from a cbr_upper,cbr_measured CSV");

    auto* w = app.add_subcommand("sweep", "Run analytic + simulation + comparison over a parameter grid");
    w->add_option("--spec", spec_path, "sweep description file")->required();
    w->add_option("--out-dir", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (a->parsed())
            return cmd_analytic(config, fer_path, out, d_max, d_step, no_interference);
        if (s->parsed())
            return cmd_simulate(config, fer_path, out, seed, duration_s, warmup_s,
                                replications, bin_m, span_m, max_d, single_transmitter);
        if (c->parsed()) return cmd_compare(curve_path, sim_path, tol_path, out);
        if (b->parsed()) return cmd_cbr(config, fit_csv);
        if (w->parsed()) return cmd_sweep(spec_path, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
