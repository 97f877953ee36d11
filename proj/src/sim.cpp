#include "v2x/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include "v2x/pathloss.hpp"
#include "v2x/propagation.hpp"

namespace v2x {

namespace {

// Deterministic draws layered on mt19937_64 (the raw engine output is pinned
// by the standard, distribution adapters are not).
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() {  // [0,1)
        return static_cast<double>(eng() >> 11) * 0x1.0p-53;
    }
    double normal() {  // Box-Muller, no state
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    long below(long n) { return static_cast<long>(eng() % static_cast<std::uint64_t>(n)); }
};

struct Event {
    double t;
    int rank;  // ties: packet ends, then transmit decisions, then sensing updates
    long seq;
    int kind;  // 0 end, 1 ready, 2 expire, 3 sense-on, 4 sense-off
    int veh;
    long gen;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.seq > b.seq;
    }
};

enum Outcome { kOk = 0, kSen, kRxb, kPro, kCol };

struct Veh {
    double x = 0.0;
    bool muted = false;
    bool central = false;
    double phase = 0.0;

    bool transmitting = false;
    double tx_start = 0.0;

    bool in_backoff = false;
    bool counting = false;
    long backoff_slots = 0;
    double resume_t = 0.0;
    long backoff_gen = 0;

    int sensed_busy = 0;   // audible transmissions as seen through the CCA latency
    int audible_now = 0;   // true-time audible transmissions (CBR bookkeeping)
    double busy_start = 0.0;
    double busy_accum = 0.0;

    double interf_mw = 0.0;  // total active transmit power received here (mW)

    bool locked = false;
    int lock_tx = -1;
    double lock_start = 0.0;
    double lock_p_mw = 0.0;
    double lock_p_dbm = 0.0;
    double lock_min_sinr_db = 0.0;
};

}  // namespace

SimScenario SimScenario::lattice(const ScenarioConfig& cfg, double span_m) {
    SimScenario sc;
    sc.cfg = cfg;
    sc.span_m = span_m;
    const auto n = static_cast<long>(std::floor(span_m * cfg.beta)) + 1;
    for (long i = 0; i < n; ++i)
        sc.positions_m.push_back(static_cast<double>(i) / cfg.beta);
    sc.muted.assign(sc.positions_m.size(), false);
    return sc;
}

void SimScenario::mute_all_but_center() {
    const double center = span_m / 2.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < positions_m.size(); ++i)
        if (std::abs(positions_m[i] - center) < std::abs(positions_m[best] - center))
            best = i;
    muted.assign(positions_m.size(), true);
    muted[best] = false;
}

void SimScenario::validate() const {
    cfg.validate();
    if (positions_m.size() < 2) throw ConfigError("sim: need at least two vehicles");
    if (muted.size() != positions_m.size()) throw ConfigError("sim: muted size mismatch");
    if (!forced_phase_s.empty() && forced_phase_s.size() != positions_m.size())
        throw ConfigError("sim: forced_phase size mismatch");
    if (!(span_m > 0.0)) throw ConfigError("sim: span must be > 0");
    if (!(central_frac > 0.0 && central_frac <= 1.0))
        throw ConfigError("sim: central_frac must be in (0,1]");
    if (!(bin_m > 0.0)) throw ConfigError("sim: bin_m must be > 0");
    if (!(warmup_s >= 0.0)) throw ConfigError("sim: warmup must be >= 0");
    if (window_s * cfg.lambda < 50.0)
        throw ConfigError("sim: window must cover at least 50 packet periods");
    if (positions_m.size() > 20000) throw ConfigError("sim: too many vehicles");
}

SimReport run_sim(const SimScenario& sc, const FerTable& fer, std::uint64_t seed) {
    const ScenarioConfig& cfg = sc.cfg;
    const Pathloss pl(cfg.pathloss);
    const auto n = static_cast<int>(sc.positions_m.size());
    const double T = packet_airtime(cfg);
    const double period = 1.0 / cfg.lambda;
    const double cca = sc.cca();
    const double slot = cfg.slot_time;
    const double t_end = sc.warmup_s + sc.window_s;  // tx eligibility cutoff
    const double n0_mw = std::pow(10.0, cfg.n0 / 10.0);
    const double sigma = shadowing_sigma(cfg);

    Rng rng(seed);

    // frozen per-ordered-pair received powers
    std::vector<double> p_dbm(static_cast<std::size_t>(n) * n, -400.0);
    std::vector<double> p_mw(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<char> audible(static_cast<std::size_t>(n) * n, 0);
    for (int t = 0; t < n; ++t) {
        for (int r = 0; r < n; ++r) {
            if (t == r) continue;
            const double d = std::abs(sc.positions_m[t] - sc.positions_m[r]);
            const double sh = sigma > 0.0 ? sigma * rng.normal() : 0.0;
            const double p = cfg.p_t - pl.at(d) - sh;
            const auto idx = static_cast<std::size_t>(t) * n + r;
            p_dbm[idx] = p;
            p_mw[idx] = std::pow(10.0, p / 10.0);
            audible[idx] = p >= cfg.p_sen ? 1 : 0;
        }
    }

    std::vector<Veh> veh(n);
    const double c_lo = sc.span_m * (1.0 - sc.central_frac) / 2.0;
    const double c_hi = sc.span_m - c_lo;
    for (int i = 0; i < n; ++i) {
        veh[i].x = sc.positions_m[i];
        veh[i].muted = sc.muted[i];
        veh[i].central = veh[i].x >= c_lo && veh[i].x <= c_hi;
        veh[i].phase = sc.forced_phase_s.empty() ? rng.uniform() * period
                                                 : sc.forced_phase_s[i];
    }

    const auto n_bins = static_cast<std::size_t>(std::ceil(sc.max_bin_d_m / sc.bin_m));
    SimReport rep;
    rep.fingerprint = cfg.fingerprint();
    rep.seeds = {seed};
    rep.replications = 1;
    rep.bin_m = sc.bin_m;
    rep.bins.assign(n_bins, SimBin{});
    for (int u = 0; u < n; ++u) {
        if (veh[u].muted || !veh[u].central) continue;
        for (int v = 0; v < n; ++v) {
            if (v == u || !veh[v].central) continue;
            const double d = std::abs(veh[u].x - veh[v].x);
            if (d >= sc.max_bin_d_m) continue;
            ++rep.bins[static_cast<std::size_t>(d / sc.bin_m)].pair_units;
        }
    }

    std::priority_queue<Event, std::vector<Event>, EventLater> queue;
    long seq = 0;
    auto push = [&](double t, int kind, int v, long gen) {
        const int rank = kind == 0 ? 0 : (kind <= 2 ? 1 : 2);
        queue.push(Event{t, rank, seq++, kind, v, gen});
    };

    for (int i = 0; i < n; ++i)
        if (!veh[i].muted) push(veh[i].phase, 1, i, 0);

    auto record = [&](int u, int v, double start, Outcome oc) {
        if (start < sc.warmup_s || start >= t_end) return;
        if (!veh[u].central || !veh[v].central) return;
        const double d = std::abs(veh[u].x - veh[v].x);
        if (d >= sc.max_bin_d_m) return;
        SimBin& b = rep.bins[static_cast<std::size_t>(d / sc.bin_m)];
        ++b.attempts;
        switch (oc) {
            case kOk: ++b.ok; break;
            case kSen: ++b.sen; break;
            case kRxb: ++b.rxb; break;
            case kPro: ++b.pro; break;
            case kCol: ++b.col; break;
        }
    };

    auto lock_sinr_db = [&](const Veh& v) {
        const double interf = std::max(v.interf_mw - v.lock_p_mw, 0.0);
        return 10.0 * std::log10(v.lock_p_mw / (n0_mw + interf));
    };

    auto finalize_lock = [&](Veh& v, Outcome forced, bool use_decode) {
        // forced is used when the radio was torn away (capture or own tx)
        Outcome oc = forced;
        if (use_decode) {
            const double u01 = rng.uniform();
            const double snr = v.lock_p_dbm - cfg.n0;
            const double f_noise = fer_at_snr(cfg, fer, snr);
            const double f_sinr = fer_at_snr(cfg, fer, v.lock_min_sinr_db);
            oc = u01 < f_noise ? kPro : (u01 < std::max(f_sinr, f_noise) ? kCol : kOk);
        }
        record(v.lock_tx, static_cast<int>(&v - veh.data()), v.lock_start, oc);
        v.locked = false;
        v.lock_tx = -1;
    };

    auto start_tx = [&](int u, double now) {
        Veh& tx = veh[u];
        if (tx.locked) finalize_lock(tx, kRxb, false);  // radio switches to transmit
        tx.transmitting = true;
        tx.tx_start = now;
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            Veh& rx = veh[v];
            const auto idx = static_cast<std::size_t>(u) * n + v;
            rx.interf_mw += p_mw[idx];
            const bool heard = audible[idx] != 0;
            if (heard && rx.audible_now++ == 0) rx.busy_start = now;

            if (!heard) {
                record(u, v, now, kSen);
                if (rx.locked)
                    rx.lock_min_sinr_db = std::min(rx.lock_min_sinr_db, lock_sinr_db(rx));
                continue;
            }
            if (rx.transmitting) {
                record(u, v, now, kRxb);
                continue;
            }
            if (rx.locked) {
                if (now - rx.lock_start < slot && p_mw[idx] > rx.lock_p_mw) {
                    // same-slot arrival: the stronger packet captures the radio
                    finalize_lock(rx, kRxb, false);
                    rx.locked = true;
                    rx.lock_tx = u;
                    rx.lock_start = now;
                    rx.lock_p_mw = p_mw[idx];
                    rx.lock_p_dbm = p_dbm[idx];
                    rx.lock_min_sinr_db = lock_sinr_db(rx);
                } else {
                    record(u, v, now, kRxb);
                    rx.lock_min_sinr_db = std::min(rx.lock_min_sinr_db, lock_sinr_db(rx));
                }
                continue;
            }
            rx.locked = true;
            rx.lock_tx = u;
            rx.lock_start = now;
            rx.lock_p_mw = p_mw[idx];
            rx.lock_p_dbm = p_dbm[idx];
            rx.lock_min_sinr_db = lock_sinr_db(rx);
        }
        push(now + T, 0, u, 0);
        push(now + cca, 3, u, 0);
    };

    auto freeze_backoff = [&](Veh& v, double now) {
        if (!v.in_backoff || !v.counting) return;
        const auto done = static_cast<long>(std::floor((now - v.resume_t) / slot + 1e-9));
        v.backoff_slots = std::max(v.backoff_slots - done, 0L);
        v.counting = false;
        ++v.backoff_gen;
    };

    const double window_lo = sc.warmup_s, window_hi = t_end;
    auto close_busy = [&](Veh& v, double now) {
        const double a = std::max(v.busy_start, window_lo);
        const double b = std::min(now, window_hi);
        if (b > a) v.busy_accum += b - a;
    };

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        const double now = ev.t;
        Veh& self = veh[ev.veh];

        switch (ev.kind) {
            case 0: {  // transmission ends
                self.transmitting = false;
                for (int v = 0; v < n; ++v) {
                    if (v == ev.veh) continue;
                    Veh& rx = veh[v];
                    const auto idx = static_cast<std::size_t>(ev.veh) * n + v;
                    if (rx.locked && rx.lock_tx == ev.veh) finalize_lock(rx, kOk, true);
                    rx.interf_mw = std::max(rx.interf_mw - p_mw[idx], 0.0);
                    if (audible[idx] != 0 && --rx.audible_now == 0) close_busy(rx, now);
                }
                push(now + cca, 4, ev.veh, 0);
                break;
            }
            case 1: {  // periodic packet becomes ready
                if (now < t_end) push(now + period, 1, ev.veh, 0);
                if (self.transmitting) break;       // still on air: drop
                if (self.in_backoff) break;         // replace the deferred packet
                if (self.sensed_busy == 0) {
                    start_tx(ev.veh, now);
                } else {
                    self.in_backoff = true;
                    self.counting = false;
                    self.backoff_slots = rng.below(cfg.cw);
                }
                break;
            }
            case 2: {  // backoff counter reaches zero
                if (!self.in_backoff || !self.counting || ev.gen != self.backoff_gen) break;
                self.in_backoff = false;
                self.counting = false;
                ++self.backoff_gen;
                start_tx(ev.veh, now);
                break;
            }
            case 3: {  // transmission becomes sensed
                for (int v = 0; v < n; ++v) {
                    if (v == ev.veh) continue;
                    const auto idx = static_cast<std::size_t>(ev.veh) * n + v;
                    if (audible[idx] == 0) continue;
                    if (veh[v].sensed_busy++ == 0) freeze_backoff(veh[v], now);
                }
                break;
            }
            case 4: {  // end of transmission becomes sensed
                for (int v = 0; v < n; ++v) {
                    if (v == ev.veh) continue;
                    const auto idx = static_cast<std::size_t>(ev.veh) * n + v;
                    if (audible[idx] == 0) continue;
                    Veh& rx = veh[v];
                    if (--rx.sensed_busy == 0 && rx.in_backoff) {
                        rx.counting = true;
                        rx.resume_t = now;
                        push(now + static_cast<double>(rx.backoff_slots) * slot, 2, v,
                             rx.backoff_gen);
                    }
                }
                break;
            }
        }
    }

    int n_central = 0;
    double cbr_sum = 0.0;
    for (const Veh& v : veh) {
        if (!v.central) continue;
        ++n_central;
        cbr_sum += v.busy_accum / sc.window_s;
    }
    rep.cbr_measured = n_central > 0 ? cbr_sum / n_central : 0.0;
    return rep;
}

SimReport run_replications(const SimScenario& sc, const FerTable& fer,
                           std::uint64_t base_seed, int replications) {
    if (replications < 1) throw ConfigError("sim: replications must be >= 1");
    std::vector<SimReport> parts;
    parts.reserve(static_cast<std::size_t>(replications));
    for (int r = 0; r < replications; ++r)
        parts.push_back(run_sim(sc, fer, base_seed + static_cast<std::uint64_t>(r)));
    return merge_reports(parts);
}

SimReport merge_reports(const std::vector<SimReport>& parts) {
    if (parts.empty()) throw ConfigError("merge_reports: nothing to merge");
    SimReport out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const SimReport& p = parts[i];
        if (p.fingerprint != out.fingerprint || p.bins.size() != out.bins.size() ||
            p.bin_m != out.bin_m)
            throw ConfigError("merge_reports: incompatible reports");
        for (std::size_t b = 0; b < out.bins.size(); ++b) {
            out.bins[b].attempts += p.bins[b].attempts;
            out.bins[b].ok += p.bins[b].ok;
            out.bins[b].sen += p.bins[b].sen;
            out.bins[b].rxb += p.bins[b].rxb;
            out.bins[b].pro += p.bins[b].pro;
            out.bins[b].col += p.bins[b].col;
            out.bins[b].pair_units += p.bins[b].pair_units;
        }
        out.cbr_measured += p.cbr_measured;
        out.seeds.insert(out.seeds.end(), p.seeds.begin(), p.seeds.end());
        out.replications += p.replications;
    }
    out.cbr_measured /= static_cast<double>(parts.size());
    return out;
}

double measure_cbr(const SimReport& report) { return report.cbr_measured; }

void write_sim_csv(const SimReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# scenario=" << report.fingerprint << " replications=" << report.replications;
    out << " seeds=";
    for (std::size_t i = 0; i < report.seeds.size(); ++i)
        out << (i ? ";" : "") << report.seeds[i];
    out << "\n";
    out << "distance_bin_m,attempts,ok,sen,rxb,pro,col,pair_units\n";
    for (std::size_t b = 0; b < report.bins.size(); ++b) {
        const SimBin& x = report.bins[b];
        char buf[220];
        std::snprintf(buf, sizeof buf, "%.10g,%ld,%ld,%ld,%ld,%ld,%ld,%ld\n",
                      static_cast<double>(b) * report.bin_m, x.attempts, x.ok, x.sen,
                      x.rxb, x.pro, x.col, x.pair_units);
        out << buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "cbr,%.10g\n", report.cbr_measured);
    out << buf;
}

SimReport read_sim_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    SimReport rep;
    std::string line;
    bool saw_header = false;
    std::vector<double> edges;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                if (tok.rfind("scenario=", 0) == 0) rep.fingerprint = tok.substr(9);
                if (tok.rfind("replications=", 0) == 0)
                    rep.replications = std::stoi(tok.substr(13));
                if (tok.rfind("seeds=", 0) == 0) {
                    std::istringstream ss(tok.substr(6));
                    std::string s;
                    while (std::getline(ss, s, ';'))
                        if (!s.empty()) rep.seeds.push_back(std::stoull(s));
                }
            }
            continue;
        }
        if (!saw_header) {
            if (line.rfind("distance_bin_m,", 0) != 0)
                throw ConfigError(path + ": missing header row");
            saw_header = true;
            continue;
        }
        if (line.rfind("cbr,", 0) == 0) {
            rep.cbr_measured = std::stod(line.substr(4));
            continue;
        }
        std::istringstream row(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(row, tok, ',')) cols.push_back(tok);
        if (cols.size() != 8) throw ConfigError(path + ": expected 8 columns");
        edges.push_back(std::stod(cols[0]));
        SimBin b;
        b.attempts = std::stol(cols[1]);
        b.ok = std::stol(cols[2]);
        b.sen = std::stol(cols[3]);
        b.rxb = std::stol(cols[4]);
        b.pro = std::stol(cols[5]);
        b.col = std::stol(cols[6]);
        b.pair_units = std::stol(cols[7]);
        rep.bins.push_back(b);
    }
    if (!saw_header) throw ConfigError(path + ": missing header row");
    if (edges.size() >= 2) rep.bin_m = edges[1] - edges[0];
    return rep;
}

}  // namespace v2x
