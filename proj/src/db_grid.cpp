#include "v2x/db_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace v2x {

void DbGrid::validate() const {
    if (!(lo_db < hi_db)) throw std::invalid_argument("DbGrid: lo_db must be < hi_db");
    if (!(step_db > 0.0)) throw std::invalid_argument("DbGrid: step_db must be > 0");
}

DiscretePdf::DiscretePdf(double origin_db, double step_db, std::vector<double> dens)
    : origin_(origin_db), step_(step_db), dens_(std::move(dens)) {
    if (!(step_ > 0.0)) throw std::invalid_argument("DiscretePdf: step must be > 0");
}

DiscretePdf DiscretePdf::gaussian(double mean_db, double sigma_db, double step_db,
                                  double n_sigma) {
    if (sigma_db < 0.0) throw std::invalid_argument("DiscretePdf: sigma must be >= 0");
    if (sigma_db == 0.0) return point_mass(mean_db, step_db);

    const double lo = mean_db - n_sigma * sigma_db;
    const auto n = static_cast<std::size_t>(std::floor(2.0 * n_sigma * sigma_db / step_db)) + 1;
    std::vector<double> dens(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (lo + static_cast<double>(i) * step_db - mean_db) / sigma_db;
        dens[i] = std::exp(-0.5 * z * z);
        total += dens[i];
    }
    const double norm = 1.0 / (total * step_db);
    for (auto& d : dens) d *= norm;
    return DiscretePdf(lo, step_db, std::move(dens));
}

DiscretePdf DiscretePdf::point_mass(double x_db, double step_db) {
    return DiscretePdf(x_db, step_db, {1.0 / step_db});
}

double DiscretePdf::mass() const {
    double m = 0.0;
    for (double d : dens_) m += d;
    return m * step_;
}

double DiscretePdf::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dens_.size(); ++i) m += x_at(i) * dens_[i];
    return m * step_ / mass();
}

double DiscretePdf::variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < dens_.size(); ++i) {
        const double d = x_at(i) - mu;
        v += d * d * dens_[i];
    }
    return v * step_ / mass();
}

double DiscretePdf::mass_below(double threshold_db) const {
    double m = 0.0;
    for (std::size_t i = 0; i < dens_.size() && x_at(i) < threshold_db; ++i) m += dens_[i];
    return m * step_;
}

double DiscretePdf::truncate_below(double threshold_db) {
    double kept = 0.0;
    std::size_t first = dens_.size();
    for (std::size_t i = 0; i < dens_.size(); ++i) {
        if (x_at(i) < threshold_db) {
            dens_[i] = 0.0;
        } else {
            if (first == dens_.size()) first = i;
            kept += dens_[i];
        }
    }
    kept *= step_;
    if (kept <= 0.0) {
        dens_.clear();
        return 0.0;
    }
    // drop the zeroed prefix, renormalize the survivor mass to 1
    dens_.erase(dens_.begin(), dens_.begin() + static_cast<std::ptrdiff_t>(first));
    origin_ += static_cast<double>(first) * step_;
    for (auto& d : dens_) d /= kept;
    return kept;
}

double DiscretePdf::expect(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < dens_.size(); ++i) acc += f(x_at(i)) * dens_[i];
    return acc * step_;
}

DiscretePdf DiscretePdf::difference(const DiscretePdf& other) const {
    if (std::abs(step_ - other.step_) > 1e-12)
        throw std::invalid_argument("DiscretePdf: difference requires equal steps");
    if (empty() || other.empty()) return DiscretePdf();

    // Z = X - Y on the lattice z_k = (origin_x - origin_y) + (i - j)*step.
    const std::size_t nx = dens_.size(), ny = other.dens_.size();
    std::vector<double> out(nx + ny - 1, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        if (dens_[i] == 0.0) continue;
        for (std::size_t j = 0; j < ny; ++j)
            out[i + (ny - 1 - j)] += dens_[i] * other.dens_[j];
    }
    for (auto& d : out) d *= step_;
    const double z0 = origin_ - (other.origin_ + static_cast<double>(ny - 1) * other.step_);
    return DiscretePdf(z0, step_, std::move(out));
}

DiscretePdf DiscretePdf::add_power_floor(double floor_db) const {
    if (empty()) return DiscretePdf();
    const double floor_lin = std::pow(10.0, floor_db / 10.0);
    // highest mapped value comes from the last bin
    const double top = 10.0 * std::log10(std::pow(10.0, x_at(size() - 1) / 10.0) + floor_lin);
    const auto n = static_cast<std::size_t>(std::llround(std::ceil((top - floor_db) / step_))) + 1;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < dens_.size(); ++i) {
        if (dens_[i] == 0.0) continue;
        const double y = 10.0 * std::log10(std::pow(10.0, x_at(i) / 10.0) + floor_lin);
        auto j = static_cast<std::size_t>(std::llround((y - floor_db) / step_));
        if (j >= n) j = n - 1;
        out[j] += dens_[i];
    }
    return DiscretePdf(floor_db, step_, std::move(out));
}

}  // namespace v2x
