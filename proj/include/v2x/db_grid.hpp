#pragma once

#include <functional>
#include <vector>

namespace v2x {

// Uniform grid in the dB domain used to discretize power/SNR densities.
struct DbGrid {
    double lo_db = -250.0;
    double hi_db = 150.0;
    double step_db = 0.1;

    void validate() const;  // throws std::invalid_argument on bad bounds
    bool covers(double lo, double hi) const { return lo >= lo_db && hi <= hi_db; }
};

/**
 * Probability density sampled at bin centers x_i = origin_db + i*step_db.
 *
 * Densities are per-dB, so mass(i) = dens[i]*step_db.  A zero-sigma
 * distribution degenerates to a single bin carrying all mass (point mass).
 */
class DiscretePdf {
  public:
    DiscretePdf() = default;
    DiscretePdf(double origin_db, double step_db, std::vector<double> dens);

    // Gaussian in dB, grid spans mean +/- n_sigma*sigma, renormalized so the
    // discrete mass is exactly 1.  sigma == 0 yields a point mass at mean.
    static DiscretePdf gaussian(double mean_db, double sigma_db, double step_db,
                                double n_sigma = 6.0);
    static DiscretePdf point_mass(double x_db, double step_db);

    double origin() const { return origin_; }
    double step() const { return step_; }
    std::size_t size() const { return dens_.size(); }
    double x_at(std::size_t i) const { return origin_ + static_cast<double>(i) * step_; }
    double density(std::size_t i) const { return dens_[i]; }
    const std::vector<double>& densities() const { return dens_; }

    double mass() const;
    double mean() const;
    double variance() const;

    // Mass strictly below threshold (bin centers x_i < threshold_db).
    double mass_below(double threshold_db) const;

    // Zeroes bins with x_i < threshold_db and renormalizes the remainder.
    // Returns the kept-mass fraction before renormalization; a result of 0
    // means nothing survived and the pdf is left empty.
    double truncate_below(double threshold_db);

    // Expectation of f over the pdf: sum f(x_i)*dens[i]*step.
    double expect(const std::function<double(double)>& f) const;

    // Distribution of X - Y for independent X (this) and Y.  Both pdfs must
    // share the same step; the result lives on a uniform grid with that step.
    DiscretePdf difference(const DiscretePdf& other) const;

    // Distribution of 10*log10(10^(X/10) + 10^(floor_db/10)): total power of
    // the signal plus a deterministic noise floor.  The result grid is
    // anchored exactly at floor_db so a vanishing signal collapses into the
    // first bin.
    DiscretePdf add_power_floor(double floor_db) const;

    bool empty() const { return dens_.empty(); }

  private:
    double origin_ = 0.0;
    double step_ = 0.1;
    std::vector<double> dens_;
};

}  // namespace v2x
