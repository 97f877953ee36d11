#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "v2x/db_grid.hpp"

using v2x::DbGrid;
using v2x::DiscretePdf;

TEST_CASE("grid bounds validate") {
    DbGrid g;
    CHECK_NOTHROW(g.validate());
    CHECK(g.covers(-100.0, 100.0));
    CHECK_FALSE(g.covers(-300.0, 0.0));
    g.step_db = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = DbGrid{10.0, -10.0, 0.1};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("gaussian pdf has exact mass and matching moments") {
    const DiscretePdf p = DiscretePdf::gaussian(-70.0, 3.0, 0.1);
    CHECK(p.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.mean() == doctest::Approx(-70.0).epsilon(1e-9));
    CHECK(p.variance() == doctest::Approx(9.0).epsilon(1e-4));
    // support spans mean +/- 6 sigma
    CHECK(p.x_at(0) >= -70.0 - 18.0 - 0.1);
    CHECK(p.x_at(p.size() - 1) <= -70.0 + 18.0 + 0.1);
}

TEST_CASE("zero sigma degenerates to a point mass") {
    const DiscretePdf p = DiscretePdf::gaussian(-82.35, 0.0, 0.1);
    REQUIRE(p.size() == 1);
    CHECK(p.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.mean() == doctest::Approx(-82.35).epsilon(1e-9));
    CHECK(p.variance() == doctest::Approx(0.0));
}

TEST_CASE("truncation removes all mass below the threshold") {
    DiscretePdf p = DiscretePdf::gaussian(-85.0, 3.0, 0.1);
    const double kept = p.truncate_below(-85.0);
    CHECK(kept == doctest::Approx(0.5).epsilon(0.02));
    CHECK(p.mass_below(-85.0) == 0.0);  // exactly zero, not approximately
    CHECK(p.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.x_at(0) >= -85.0);

    SUBCASE("threshold above the whole support empties the pdf") {
        DiscretePdf q = DiscretePdf::gaussian(-120.0, 2.0, 0.1);
        CHECK(q.truncate_below(-60.0) == 0.0);
        CHECK(q.empty());
    }
    SUBCASE("threshold below the whole support is a no-op on the mass") {
        DiscretePdf q = DiscretePdf::gaussian(-70.0, 2.0, 0.1);
        CHECK(q.truncate_below(-200.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(q.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("difference of independent gaussians keeps mean and adds variances") {
    const DiscretePdf x = DiscretePdf::gaussian(10.0, 3.0, 0.1);
    const DiscretePdf y = DiscretePdf::gaussian(4.0, 4.0, 0.1);
    const DiscretePdf z = x.difference(y);
    CHECK(z.mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(z.mean() == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(z.variance() == doctest::Approx(25.0).epsilon(1e-3));
}

TEST_CASE("difference of point masses is the point difference") {
    const DiscretePdf x = DiscretePdf::point_mass(-71.2, 0.1);
    const DiscretePdf y = DiscretePdf::point_mass(-94.8, 0.1);
    const DiscretePdf z = x.difference(y);
    REQUIRE(z.size() == 1);
    CHECK(z.x_at(0) == doctest::Approx(23.6).epsilon(1e-9));
    CHECK(z.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power floor mapping") {
    const double n0 = -95.0;

    SUBCASE("signal far below the floor collapses into the floor bin") {
        const DiscretePdf p = DiscretePdf::gaussian(n0 - 60.0, 1.0, 0.1);
        const DiscretePdf m = p.add_power_floor(n0);
        double off_floor = 0.0;
        for (std::size_t i = 1; i < m.size(); ++i) off_floor += m.density(i);
        CHECK(off_floor == 0.0);
        CHECK(m.x_at(0) == doctest::Approx(n0).epsilon(1e-12));
        CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("signal far above the floor is unchanged") {
        const DiscretePdf p = DiscretePdf::gaussian(n0 + 60.0, 2.0, 0.1);
        const DiscretePdf m = p.add_power_floor(n0);
        CHECK(m.mean() == doctest::Approx(p.mean()).epsilon(1e-6));
        CHECK(m.variance() == doctest::Approx(p.variance()).epsilon(1e-3));
    }
    SUBCASE("mapped mean matches direct integration of the mapping") {
        const DiscretePdf p = DiscretePdf::gaussian(n0 + 2.0, 3.0, 0.1);
        const DiscretePdf m = p.add_power_floor(n0);
        const double direct = p.expect([&](double x) {
            return 10.0 * std::log10(std::pow(10.0, x / 10.0) + std::pow(10.0, n0 / 10.0));
        });
        CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.mean() == doctest::Approx(direct).epsilon(1e-3));
        CHECK(m.x_at(0) == doctest::Approx(n0).epsilon(1e-12));
    }
}

TEST_CASE("expectation of the identity is the mean") {
    const DiscretePdf p = DiscretePdf::gaussian(-80.0, 2.5, 0.1);
    CHECK(p.expect([](double x) { return x; }) == doctest::Approx(p.mean()).epsilon(1e-12));
    CHECK(p.expect([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
}
