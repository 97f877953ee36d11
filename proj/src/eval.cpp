#include "v2x/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "v2x/channel_load.hpp"
#include "v2x/kv.hpp"

namespace v2x {

double mad_pct(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("mad_pct: curves have different lengths");
    if (a.empty()) throw std::invalid_argument("mad_pct: empty curves");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return 100.0 * acc / static_cast<double>(a.size());
}

Tolerances load_tolerances(const std::string& path) {
    KvFile kv = KvFile::load(path);
    kv.reject_unknown({"mad_pdr_max_pct", "mad_dsen_max_pct", "mad_drxb_max_pct",
                       "mad_dpro_max_pct", "mad_dcol_max_pct", "cbr_abs_max",
                       "min_attempts"});
    Tolerances t;
    t.mad_pdr_max_pct = kv.get_double("mad_pdr_max_pct", t.mad_pdr_max_pct);
    t.mad_dsen_max_pct = kv.get_double("mad_dsen_max_pct", t.mad_dsen_max_pct);
    t.mad_drxb_max_pct = kv.get_double("mad_drxb_max_pct", t.mad_drxb_max_pct);
    t.mad_dpro_max_pct = kv.get_double("mad_dpro_max_pct", t.mad_dpro_max_pct);
    t.mad_dcol_max_pct = kv.get_double("mad_dcol_max_pct", t.mad_dcol_max_pct);
    t.cbr_abs_max = kv.get_double("cbr_abs_max", t.cbr_abs_max);
    t.min_attempts = kv.get_int("min_attempts", static_cast<int>(t.min_attempts));
    if (t.min_attempts < 1)
        throw ConfigError(path + ": min_attempts must be >= 1");
    return t;
}

namespace {

// Linear interpolation on a strictly increasing grid; x must be inside.
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    if (hi == 0) return ys.front();
    if (*it == x) return ys[hi];
    std::size_t lo = hi - 1;
    double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace

ComparisonReport compare(const LinkCurve& curve, const SimReport& sim,
                         const Tolerances& tol) {
    if (curve.fingerprint != sim.fingerprint)
        throw ConfigError("compare: scenario fingerprints differ (" +
                          curve.fingerprint + " vs " + sim.fingerprint + ")");
    if (curve.distance_m.empty())
        throw std::invalid_argument("compare: empty analytic curve");

    const std::size_t n = curve.distance_m.size();
    std::vector<double> ana_pdr(n), ana_sen(n), ana_rxb(n), ana_pro(n), ana_col(n);
    for (std::size_t i = 0; i < n; ++i) {
        ana_pdr[i] = curve.points[i].pdr;
        ana_sen[i] = curve.points[i].hatted.sen;
        ana_rxb[i] = curve.points[i].hatted.rxb;
        ana_pro[i] = curve.points[i].hatted.pro;
        ana_col[i] = curve.points[i].hatted.col;
    }

    ComparisonReport rep;
    rep.scenario = curve.fingerprint;
    std::vector<double> s_pdr, s_sen, s_rxb, s_pro, s_col;
    std::vector<double> a_pdr, a_sen, a_rxb, a_pro, a_col;
    for (std::size_t k = 0; k < sim.bins.size(); ++k) {
        const SimBin& b = sim.bins[k];
        double center = (static_cast<double>(k) + 0.5) * sim.bin_m;
        bool in_range = center >= curve.distance_m.front() - 1e-9 &&
                        center <= curve.distance_m.back() + 1e-9;
        if (b.attempts < tol.min_attempts || !in_range) {
            rep.excluded_bins_m.push_back(center);
            continue;
        }
        double att = static_cast<double>(b.attempts);
        s_pdr.push_back(b.ok / att);
        s_sen.push_back(b.sen / att);
        s_rxb.push_back(b.rxb / att);
        s_pro.push_back(b.pro / att);
        s_col.push_back(b.col / att);
        a_pdr.push_back(interp(curve.distance_m, ana_pdr, center));
        a_sen.push_back(interp(curve.distance_m, ana_sen, center));
        a_rxb.push_back(interp(curve.distance_m, ana_rxb, center));
        a_pro.push_back(interp(curve.distance_m, ana_pro, center));
        a_col.push_back(interp(curve.distance_m, ana_col, center));
    }
    if (s_pdr.empty())
        throw std::invalid_argument("compare: no bins with enough attempts");

    rep.bins_used = static_cast<long>(s_pdr.size());
    rep.mad_pdr_pct = mad_pct(s_pdr, a_pdr);
    rep.mad_dsen_pct = mad_pct(s_sen, a_sen);
    rep.mad_drxb_pct = mad_pct(s_rxb, a_rxb);
    rep.mad_dpro_pct = mad_pct(s_pro, a_pro);
    rep.mad_dcol_pct = mad_pct(s_col, a_col);
    rep.cbr_analytic = curve.cbr;
    rep.cbr_measured = sim.cbr_measured;
    rep.pass = rep.mad_pdr_pct <= tol.mad_pdr_max_pct &&
               rep.mad_dsen_pct <= tol.mad_dsen_max_pct &&
               rep.mad_drxb_pct <= tol.mad_drxb_max_pct &&
               rep.mad_dpro_pct <= tol.mad_dpro_max_pct &&
               rep.mad_dcol_pct <= tol.mad_dcol_max_pct &&
               std::fabs(rep.cbr_analytic - rep.cbr_measured) <= tol.cbr_abs_max;
    return rep;
}

void write_report_json(const ComparisonReport& rep, const std::string& path) {
    nlohmann::json j;
    j["scenario"] = rep.scenario;
    j["mad_pdr_pct"] = rep.mad_pdr_pct;
    j["mad_dsen_pct"] = rep.mad_dsen_pct;
    j["mad_drxb_pct"] = rep.mad_drxb_pct;
    j["mad_dpro_pct"] = rep.mad_dpro_pct;
    j["mad_dcol_pct"] = rep.mad_dcol_pct;
    j["cbr_analytic"] = rep.cbr_analytic;
    j["cbr_measured"] = rep.cbr_measured;
    j["pass"] = rep.pass;
    j["bins_used"] = rep.bins_used;
    j["excluded_bins_m"] = rep.excluded_bins_m;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

ScenarioConfig apply_override(ScenarioConfig cfg, const std::string& key, double value) {
    if (key == "beta") cfg.beta = value;
    else if (key == "lambda") cfg.lambda = value;
    else if (key == "p_t") cfg.p_t = value;
    else if (key == "payload_b") cfg.payload_b = static_cast<int>(std::lround(value));
    else if (key == "data_rate") cfg.data_rate = value;
    else if (key == "sigma_sh") cfg.sigma_sh = value;
    else if (key == "p_sen") cfg.p_sen = value;
    else if (key == "n0") cfg.n0 = value;
    else if (key == "cw") cfg.cw = static_cast<int>(std::lround(value));
    else throw ConfigError("sweep axis '" + key + "' is not a sweepable field");
    return cfg;
}

namespace {

std::string resolve_rel(const std::string& spec_path, const std::string& value) {
    namespace fs = std::filesystem;
    fs::path p(value);
    if (p.is_absolute()) return value;
    return (fs::path(spec_path).parent_path() / p).string();
}

std::string format_tag_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

SweepSpec load_sweep_spec(const std::string& path) {
    KvFile kv = KvFile::load(path);
    static const std::vector<std::string> kScalar = {
        "base_config", "fer_table", "duration_s", "warmup_s", "span_m",
        "bin_m", "max_d_m", "replications", "seed", "tolerances"};
    for (const auto& [key, value] : kv.values()) {
        (void)value;
        if (key.rfind("sweep.", 0) == 0) continue;
        if (std::find(kScalar.begin(), kScalar.end(), key) == kScalar.end())
            throw ConfigError(path + ": unknown key '" + key + "'");
    }

    SweepSpec spec;
    if (!kv.has("base_config") || !kv.has("fer_table"))
        throw ConfigError(path + ": base_config and fer_table are required");
    spec.base_config = resolve_rel(path, kv.get_string("base_config", ""));
    spec.fer_table = resolve_rel(path, kv.get_string("fer_table", ""));
    spec.duration_s = kv.get_double("duration_s", spec.duration_s);
    spec.warmup_s = kv.get_double("warmup_s", spec.warmup_s);
    spec.span_m = kv.get_double("span_m", spec.span_m);
    spec.bin_m = kv.get_double("bin_m", spec.bin_m);
    spec.max_d_m = kv.get_double("max_d_m", spec.max_d_m);
    spec.replications = kv.get_int("replications", spec.replications);
    spec.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<int>(spec.seed)));
    if (kv.has("tolerances"))
        spec.tol = load_tolerances(resolve_rel(path, kv.get_string("tolerances", "")));
    for (const auto& [key, value] : kv.values()) {
        (void)value;
        if (key.rfind("sweep.", 0) != 0) continue;
        std::string field = key.substr(6);
        std::vector<double> vals = kv.get_double_list(key, {});
        if (vals.empty()) throw ConfigError(path + ": empty axis '" + key + "'");
        spec.axes[field] = vals;
    }
    if (spec.axes.empty()) throw ConfigError(path + ": no sweep axes given");
    return spec;
}

SweepResult sweep_runner(const SweepSpec& spec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const ScenarioConfig base = load_scenario(spec.base_config);
    const FerTable fer = load_fer_table(spec.fer_table);

    // Expand the cross product in deterministic (map) key order; no axes
    // means an empty run, not a single unmodified point.
    std::vector<std::pair<std::string, std::vector<double>>> axes(spec.axes.begin(),
                                                                  spec.axes.end());
    std::vector<std::vector<double>> combos{{}};
    if (axes.empty()) combos.clear();
    for (const auto& [name, vals] : axes) {
        (void)name;
        std::vector<std::vector<double>> next;
        for (const auto& combo : combos)
            for (double v : vals) {
                auto c = combo;
                c.push_back(v);
                next.push_back(std::move(c));
            }
        combos = std::move(next);
    }

    std::vector<double> grid;
    for (double d = 0.5 * spec.bin_m; d < spec.max_d_m; d += spec.bin_m)
        grid.push_back(d);

    SweepResult result;
    result.all_pass = true;
    std::vector<double> cbr_u_pts, cbr_m_pts;
    std::ofstream cbr_csv(out_dir + "/cbr_points.csv");
    cbr_csv << "cbr_upper,cbr_measured\n";

    for (const auto& combo : combos) {
        SweepPoint pt;
        pt.cfg = base;
        std::ostringstream tag;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            pt.cfg = apply_override(pt.cfg, axes[i].first, combo[i]);
            if (i) tag << "_";
            tag << axes[i].first << format_tag_value(combo[i]);
        }
        pt.tag = tag.str();
        pt.cfg.validate();

        Pathloss pl(pt.cfg.pathloss);
        LinkCurve curve = sweep(pt.cfg, pl, fer, grid);
        pt.cbr_upper = cbr_upper(pt.cfg, pl);
        write_curve_csv(curve, out_dir + "/" + pt.tag + ".curve.csv");

        SimScenario sc = SimScenario::lattice(pt.cfg, spec.span_m);
        sc.warmup_s = spec.warmup_s;
        sc.window_s = spec.duration_s - spec.warmup_s;
        sc.bin_m = spec.bin_m;
        sc.max_bin_d_m = spec.max_d_m;
        sc.validate();
        SimReport sim = run_replications(sc, fer, spec.seed, spec.replications);
        write_sim_csv(sim, out_dir + "/" + pt.tag + ".sim.csv");

        pt.report = compare(curve, sim, spec.tol);
        write_report_json(pt.report, out_dir + "/" + pt.tag + ".report.json");
        result.all_pass = result.all_pass && pt.report.pass;

        cbr_u_pts.push_back(pt.cbr_upper);
        cbr_m_pts.push_back(sim.cbr_measured);
        cbr_csv << pt.cbr_upper << "," << sim.cbr_measured << "\n";
        result.points.push_back(std::move(pt));
    }

    if (cbr_u_pts.size() >= 3) {
        result.fitted_compression = fit_compression(cbr_u_pts, cbr_m_pts);
        result.fit_valid = true;
    }

    nlohmann::json summary;
    summary["all_pass"] = result.all_pass;
    summary["points"] = nlohmann::json::array();
    for (const auto& pt : result.points) {
        nlohmann::json p;
        p["tag"] = pt.tag;
        p["pass"] = pt.report.pass;
        p["mad_pdr_pct"] = pt.report.mad_pdr_pct;
        p["cbr_upper"] = pt.cbr_upper;
        p["cbr_analytic"] = pt.report.cbr_analytic;
        p["cbr_measured"] = pt.report.cbr_measured;
        summary["points"].push_back(p);
    }
    if (result.fit_valid)
        summary["fitted_compression"] = {result.fitted_compression[0],
                                         result.fitted_compression[1],
                                         result.fitted_compression[2]};
    std::ofstream sum_out(out_dir + "/summary.json");
    sum_out << summary.dump(2) << "\n";
    return result;
}

}  // namespace v2x
