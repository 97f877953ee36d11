#include "v2x/fer_table.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "v2x/scenario.hpp"

namespace v2x {

FerTable::FerTable(std::vector<double> ebn0_db, std::vector<double> fer)
    : ebn0_(std::move(ebn0_db)), fer_(std::move(fer)) {
    if (ebn0_.size() != fer_.size())
        throw ConfigError("FER table: column length mismatch");
    if (ebn0_.size() < 2)
        throw ConfigError("FER table: need at least two rows");
    for (std::size_t i = 0; i < ebn0_.size(); ++i) {
        if (i > 0 && !(ebn0_[i] > ebn0_[i - 1]))
            throw ConfigError("FER table: ebn0_db not strictly increasing at row " +
                              std::to_string(i + 1));
        if (fer_[i] < 0.0 || fer_[i] > 1.0)
            throw ConfigError("FER table: fer outside [0,1] at row " + std::to_string(i + 1));
    }
}

double FerTable::lookup(double ebn0_db) const {
    if (ebn0_db <= ebn0_.front()) return fer_.front();
    if (ebn0_db >= ebn0_.back()) return fer_.back();
    const auto it = std::upper_bound(ebn0_.begin(), ebn0_.end(), ebn0_db);
    const auto i = static_cast<std::size_t>(it - ebn0_.begin());
    const double t = (ebn0_db - ebn0_[i - 1]) / (ebn0_[i] - ebn0_[i - 1]);
    return fer_[i - 1] + t * (fer_[i] - fer_[i - 1]);
}

FerTable parse_fer_table(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> ebn0, fer;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r\n");
        line = line.substr(b, e - b + 1);

        std::istringstream row(line);
        std::string c1, c2, extra;
        if (!std::getline(row, c1, ',') || !std::getline(row, c2, ','))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected two comma-separated columns");
        if (std::getline(row, extra, ','))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": too many columns");
        try {
            std::size_t p1 = 0, p2 = 0;
            const double x = std::stod(c1, &p1);
            const double y = std::stod(c2, &p2);
            ebn0.push_back(x);
            fer.push_back(y);
        } catch (const std::exception&) {
            if (ebn0.empty() && lineno <= 2) continue;  // header row
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": non-numeric row '" + line + "'");
        }
    }
    try {
        return FerTable(std::move(ebn0), std::move(fer));
    } catch (const ConfigError& err) {
        throw ConfigError(origin + ": " + err.what());
    }
}

FerTable load_fer_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_fer_table(ss.str(), path);
}

}  // namespace v2x
