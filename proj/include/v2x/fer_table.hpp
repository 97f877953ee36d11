#pragma once

#include <string>
#include <vector>

namespace v2x {

/**
 * Frame error rate lookup table over Eb/N0 in dB.
 *
 * Lookups interpolate linearly in the dB domain and clamp to the first/last
 * row outside the tabulated range.  Rows must have strictly increasing Eb/N0
 * and FER within [0,1]; at least two rows are required.
 */
class FerTable {
  public:
    FerTable(std::vector<double> ebn0_db, std::vector<double> fer);

    double lookup(double ebn0_db) const;

    double min_ebn0() const { return ebn0_.front(); }
    double max_ebn0() const { return ebn0_.back(); }
    std::size_t rows() const { return ebn0_.size(); }

  private:
    std::vector<double> ebn0_;
    std::vector<double> fer_;
};

// Two-column CSV "ebn0_db,fer"; '#' comment lines and an optional header row
// are allowed.  Malformed rows raise ConfigError naming the offending line.
FerTable load_fer_table(const std::string& path);
FerTable parse_fer_table(const std::string& text, const std::string& origin = "<string>");

}  // namespace v2x
