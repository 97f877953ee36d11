#include "v2x/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "v2x/kv.hpp"

namespace v2x {

namespace {

// IEEE 802.11p data rates on a 10 MHz channel (bit/s).
constexpr double kDataRates[] = {3e6, 4.5e6, 6e6, 9e6, 12e6, 18e6, 24e6, 27e6};

bool valid_data_rate(double r) {
    return std::any_of(std::begin(kDataRates), std::end(kDataRates),
                       [r](double v) { return std::abs(v - r) < 0.5; });
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// KvFile

KvFile KvFile::parse(const std::string& text, const std::string& origin) {
    KvFile f;
    f.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        f.values_[key] = val;
    }
    return f;
}

KvFile KvFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

double KvFile::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "': not a number: '" + it->second + "'");
    }
}

int KvFile::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const double v = get_double(key, 0.0);
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
        throw ConfigError(origin_ + ": key '" + key + "': expected an integer");
    return i;
}

bool KvFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError(origin_ + ": key '" + key + "': expected true/false");
}

std::string KvFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::vector<double> KvFile::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key '" + key + "': bad list element '" + tok + "'");
        }
    }
    if (out.empty())
        throw ConfigError(origin_ + ": key '" + key + "': empty list");
    return out;
}

void KvFile::reject_unknown(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
        (void)v;
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError(origin_ + ": unknown key '" + k + "'");
    }
}

// ---------------------------------------------------------------------------
// ScenarioConfig

void ScenarioConfig::validate() const {
    if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (payload_b < 0) throw ConfigError("payload_b must be >= 0");
    if (mac_overhead_bytes < 0) throw ConfigError("mac_overhead_bytes must be >= 0");
    if (!valid_data_rate(data_rate))
        throw ConfigError("data_rate must be one of 3, 4.5, 6, 9, 12, 18, 24, 27 Mbit/s");
    if (!(sigma_sh >= 0.0)) throw ConfigError("sigma_sh must be >= 0");
    if (!(slot_time > 0.0)) throw ConfigError("slot_time must be > 0");
    if (!(phy_preamble_s >= 0.0)) throw ConfigError("phy_preamble_s must be >= 0");
    if (!(symbol_s > 0.0)) throw ConfigError("symbol_s must be > 0");
    if (!(p_sen < p_t)) throw ConfigError("p_sen must be below p_t");
    if (!(n0 < p_t)) throw ConfigError("n0 must be below p_t");
    if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be > 0");
    if (!(grid_step_db > 0.0)) throw ConfigError("grid_step_db must be > 0");
    if (cw < 1) throw ConfigError("cw must be >= 1");
    if (col_weight_first < 0.0 || col_weight_second < 0.0)
        throw ConfigError("collision arrival-order weights must be >= 0");
    if (!(pathloss.d_min_m > 0.0)) throw ConfigError("pl_d_min must be > 0");
    if (pathloss.kind == PathlossKind::LogDistance) {
        if (!(pathloss.ref_m > 0.0)) throw ConfigError("pl_ref_m must be > 0");
        if (pathloss.exponent < 0.0) throw ConfigError("pl_exponent must be >= 0");
    } else {
        if (!(pathloss.wb1_breakpoint_m > 0.0))
            throw ConfigError("wb1_breakpoint_m must be > 0");
        if (pathloss.wb1_a1 < 0.0 || pathloss.wb1_a2 < 0.0)
            throw ConfigError("dual-slope exponents must be >= 0");
    }
}

double packet_airtime(const ScenarioConfig& cfg) {
    const double n_dbps = cfg.data_rate * cfg.symbol_s;  // data bits per symbol
    const double bits = 16.0 + 6.0 + 8.0 * (cfg.payload_b + cfg.mac_overhead_bytes);
    return cfg.phy_preamble_s + std::ceil(bits / n_dbps) * cfg.symbol_s;
}

namespace {

const std::vector<std::string> kScenarioKeys = {
    "beta", "lambda", "p_t", "payload_b", "data_rate", "sigma_sh", "p_sen", "n0",
    "slot_time", "mac_overhead_bytes", "phy_preamble_s", "symbol_s",
    "shadowing_enabled", "fading_lut_enabled", "snr_threshold_db", "bandwidth_hz",
    "grid_step_db", "cw", "cbr_p1", "cbr_p2", "cbr_p3",
    "col_weight_first", "col_weight_second",
    "pathloss_model", "pl_d_min", "pl0_db", "pl_exponent", "pl_ref_m",
    "wb1_a1", "wb1_b1", "wb1_a2", "wb1_b2", "wb1_breakpoint_m",
};

ScenarioConfig from_kv(const KvFile& kv) {
    kv.reject_unknown(kScenarioKeys);
    ScenarioConfig c;
    c.beta = kv.get_double("beta", c.beta);
    c.lambda = kv.get_double("lambda", c.lambda);
    c.p_t = kv.get_double("p_t", c.p_t);
    c.payload_b = kv.get_int("payload_b", c.payload_b);
    c.data_rate = kv.get_double("data_rate", c.data_rate);
    c.sigma_sh = kv.get_double("sigma_sh", c.sigma_sh);
    c.p_sen = kv.get_double("p_sen", c.p_sen);
    c.n0 = kv.get_double("n0", c.n0);
    c.slot_time = kv.get_double("slot_time", c.slot_time);
    c.mac_overhead_bytes = kv.get_int("mac_overhead_bytes", c.mac_overhead_bytes);
    c.phy_preamble_s = kv.get_double("phy_preamble_s", c.phy_preamble_s);
    c.symbol_s = kv.get_double("symbol_s", c.symbol_s);
    c.shadowing_enabled = kv.get_bool("shadowing_enabled", c.shadowing_enabled);
    c.fading_lut_enabled = kv.get_bool("fading_lut_enabled", c.fading_lut_enabled);
    c.snr_threshold_db = kv.get_double("snr_threshold_db", c.snr_threshold_db);
    c.bandwidth_hz = kv.get_double("bandwidth_hz", c.bandwidth_hz);
    c.grid_step_db = kv.get_double("grid_step_db", c.grid_step_db);
    c.cw = kv.get_int("cw", c.cw);
    c.cbr_p1 = kv.get_double("cbr_p1", c.cbr_p1);
    c.cbr_p2 = kv.get_double("cbr_p2", c.cbr_p2);
    c.cbr_p3 = kv.get_double("cbr_p3", c.cbr_p3);
    c.col_weight_first = kv.get_double("col_weight_first", c.col_weight_first);
    c.col_weight_second = kv.get_double("col_weight_second", c.col_weight_second);

    const std::string pl = kv.get_string("pathloss_model", "winner_b1");
    if (pl == "log_distance") {
        c.pathloss.kind = PathlossKind::LogDistance;
    } else if (pl == "winner_b1") {
        c.pathloss.kind = PathlossKind::WinnerB1;
    } else {
        throw ConfigError(kv.origin() + ": pathloss_model must be log_distance or winner_b1");
    }
    c.pathloss.d_min_m = kv.get_double("pl_d_min", c.pathloss.d_min_m);
    c.pathloss.pl0_db = kv.get_double("pl0_db", c.pathloss.pl0_db);
    c.pathloss.exponent = kv.get_double("pl_exponent", c.pathloss.exponent);
    c.pathloss.ref_m = kv.get_double("pl_ref_m", c.pathloss.ref_m);
    c.pathloss.wb1_a1 = kv.get_double("wb1_a1", c.pathloss.wb1_a1);
    c.pathloss.wb1_b1 = kv.get_double("wb1_b1", c.pathloss.wb1_b1);
    c.pathloss.wb1_a2 = kv.get_double("wb1_a2", c.pathloss.wb1_a2);
    c.pathloss.wb1_b2 = kv.get_double("wb1_b2", c.pathloss.wb1_b2);
    c.pathloss.wb1_breakpoint_m = kv.get_double("wb1_breakpoint_m", c.pathloss.wb1_breakpoint_m);

    c.validate();
    return c;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
    return from_kv(KvFile::parse(text, origin));
}

ScenarioConfig load_scenario(const std::string& path) {
    return from_kv(KvFile::load(path));
}

std::string ScenarioConfig::fingerprint() const {
    std::ostringstream ss;
    ss.precision(17);
    ss << beta << '|' << lambda << '|' << p_t << '|' << payload_b << '|' << data_rate
       << '|' << sigma_sh << '|' << p_sen << '|' << n0 << '|' << slot_time << '|'
       << mac_overhead_bytes << '|' << phy_preamble_s << '|' << symbol_s << '|'
       << shadowing_enabled << '|' << fading_lut_enabled << '|' << snr_threshold_db
       << '|' << bandwidth_hz << '|' << grid_step_db << '|' << cw << '|' << cbr_p1
       << '|' << cbr_p2 << '|' << cbr_p3 << '|' << col_weight_first << '|'
       << col_weight_second << '|' << static_cast<int>(pathloss.kind) << '|'
       << pathloss.d_min_m << '|' << pathloss.pl0_db << '|' << pathloss.exponent
       << '|' << pathloss.ref_m << '|' << pathloss.wb1_a1 << '|' << pathloss.wb1_b1
       << '|' << pathloss.wb1_a2 << '|' << pathloss.wb1_b2 << '|'
       << pathloss.wb1_breakpoint_m;
    const std::string s = ss.str();
    // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace v2x
