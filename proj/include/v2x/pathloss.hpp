#pragma once

#include "v2x/scenario.hpp"

namespace v2x {

// Deterministic mean pathloss in dB as a function of distance.  Distances
// below the configured minimum are clamped, so degenerate geometry (receiver
// on top of an interferer) stays finite.
class Pathloss {
  public:
    explicit Pathloss(const PathlossSpec& spec) : spec_(spec) {}

    double at(double d_m) const;

    // Smallest distance (within [d_min, limit]) where at(d) >= pl_db, found by
    // bisection; returns limit when the loss is never reached.
    double distance_for_loss(double pl_db, double limit_m = 1e7) const;

    const PathlossSpec& spec() const { return spec_; }

  private:
    PathlossSpec spec_;
};

}  // namespace v2x
