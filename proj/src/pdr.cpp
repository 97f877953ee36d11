#include "v2x/pdr.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "v2x/channel_load.hpp"

namespace v2x {

PdrPoint compose_pdr(const ErrorProbs& d) {
    for (double v : {d.sen, d.rxb, d.pro, d.col})
        if (!(v >= 0.0 && v <= 1.0))  // also rejects NaN
            throw std::domain_error("compose_pdr: probabilities must lie in [0,1]");
    PdrPoint p;
    p.raw = d;
    double survive = 1.0;
    p.hatted.sen = survive * d.sen;
    survive *= 1.0 - d.sen;
    p.hatted.rxb = survive * d.rxb;
    survive *= 1.0 - d.rxb;
    p.hatted.pro = survive * d.pro;
    survive *= 1.0 - d.pro;
    p.hatted.col = survive * d.col;
    survive *= 1.0 - d.col;
    p.pdr = survive;
    return p;
}

LinkCurve sweep(const ScenarioConfig& cfg, const Pathloss& pl, const FerTable& fer,
                const std::vector<double>& d_grid_m, const SweepOptions& opt) {
    if (d_grid_m.empty()) throw std::invalid_argument("sweep: empty distance grid");
    LinkCurve curve;
    curve.fingerprint = cfg.fingerprint();
    curve.distance_m = d_grid_m;
    curve.cbr = opt.interference ? estimate_cbr(cfg, pl).compressed : 0.0;

    const double radius = interference_radius(cfg, pl);
    curve.points.reserve(d_grid_m.size());
    for (double d : d_grid_m) {
        ErrorProbs e;
        e.sen = delta_sen(cfg, pl, d);
        e.pro = delta_pro(cfg, pl, fer, d);
        if (opt.interference) {
            const LinkGeometry geom = make_lattice_geometry(cfg, pl, d, radius);
            e.rxb = delta_rxb(cfg, pl, geom, curve.cbr);
            e.col = delta_col(cfg, pl, fer, geom, curve.cbr);
        }
        curve.points.push_back(compose_pdr(e));
    }
    return curve;
}

std::vector<double> default_distance_grid(double max_m, double step_m) {
    std::vector<double> g;
    for (double d = 0.0; d <= max_m + 1e-9; d += step_m) g.push_back(d);
    return g;
}

void write_curve_csv(const LinkCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    char meta[64];
    std::snprintf(meta, sizeof meta, " cbr=%.17g\n", curve.cbr);
    out << "# scenario=" << curve.fingerprint << meta;
    out << "distance_m,pdr,dsen,drxb,dpro,dcol,dsen_hat,drxb_hat,dpro_hat,dcol_hat\n";
    char buf[360];
    for (std::size_t i = 0; i < curve.distance_m.size(); ++i) {
        const auto& p = curve.points[i];
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      curve.distance_m[i], p.pdr, p.raw.sen, p.raw.rxb, p.raw.pro,
                      p.raw.col, p.hatted.sen, p.hatted.rxb, p.hatted.pro, p.hatted.col);
        out << buf;
    }
}

LinkCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    LinkCurve curve;
    std::string line;
    bool saw_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                if (tok.rfind("scenario=", 0) == 0) curve.fingerprint = tok.substr(9);
                if (tok.rfind("cbr=", 0) == 0) curve.cbr = std::stod(tok.substr(4));
            }
            continue;
        }
        if (!saw_header) {
            if (line.rfind("distance_m,", 0) != 0)
                throw ConfigError(path + ": missing header row");
            saw_header = true;
            continue;
        }
        double v[10];
        std::istringstream row(line);
        std::string tok;
        int n = 0;
        while (std::getline(row, tok, ',') && n < 10) v[n++] = std::stod(tok);
        if (n != 10)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 10 columns");
        curve.distance_m.push_back(v[0]);
        PdrPoint p;
        p.pdr = v[1];
        p.raw = {v[2], v[3], v[4], v[5]};
        p.hatted = {v[6], v[7], v[8], v[9]};
        curve.points.push_back(p);
    }
    if (!saw_header) throw ConfigError(path + ": missing header row");
    return curve;
}

}  // namespace v2x
