#include <doctest.h>

#include <cmath>

#include "vperc/geometry.hpp"

using namespace vperc;

TEST_CASE("region spec invariants") {
    CHECK_THROWS_AS(RegionSpec::rectangle({0, 0}, 0, 1), ParameterError);
    CHECK_THROWS_AS(RegionSpec::annulus({0, 0}, 3, 2), ParameterError);
    CHECK_THROWS_AS(RegionSpec::annulus({0, 0}, -1, 2), ParameterError);
    CHECK_NOTHROW(RegionSpec::annulus({0, 0}, 2, 2));  // degenerate but legal
}

TEST_CASE("padding margin and safe zone") {
    CHECK(padding_margin(1.0) == 10.0);
    CHECK(padding_margin(0.01) == 10.0);  // log clamped at zero
    CHECK(padding_margin(1e6) > 10.0);
    const RegionSpec rg = RegionSpec::rectangle({0, 0}, 4, 4);
    const Window w = window_for_region(rg);
    CHECK(region_in_safe_zone(rg, w));
    CHECK(!region_in_safe_zone(rg, Window{-5, -5, 5, 5}));
}

TEST_CASE("halfplane clipping keeps provenance labels") {
    ConvexPoly p = ConvexPoly::from_box({0, 0, 4, 4});
    CHECK(p.area() == doctest::Approx(16));
    clip_halfplane(p, {1, 0}, 2.0, 7);  // keep x <= 2
    CHECK(p.area() == doctest::Approx(8));
    bool has7 = false;
    for (int i = 0; i < p.n; ++i) has7 |= p.label[i] == 7;
    CHECK(has7);
    clip_halfplane(p, {1, 0}, -1.0, 8);  // keep x <= -1: empty
    CHECK(p.n == 0);
}

TEST_CASE("region overlap areas per kind") {
    ConvexPoly cell = ConvexPoly::from_box({-1, -1, 1, 1});  // area 4 around origin

    CHECK(region_overlap_area(cell, RegionSpec::rectangle({0, 0}, 1, 1)) ==
          doctest::Approx(4));
    CHECK(region_overlap_area(cell, RegionSpec::rectangle({5, 5}, 1, 1)) == 0);

    // annulus with hole swallowing the cell
    CHECK(region_overlap_area(cell, RegionSpec::annulus({0, 0}, 2, 5)) == doctest::Approx(0));
    // annulus catching it fully
    CHECK(region_overlap_area(cell, RegionSpec::annulus({0, 0}, 0, 5)) == doctest::Approx(4));
    // half the cell for a half-plane annulus facing +y
    CHECK(region_overlap_area(cell, RegionSpec::annulus({0, 0}, 0, 5,
                                                        RegionKind::HalfAnnulus, 0)) ==
          doctest::Approx(2));
    // one quadrant
    CHECK(region_overlap_area(cell, RegionSpec::annulus({0, 0}, 0, 5,
                                                        RegionKind::QuarterAnnulus, 0)) ==
          doctest::Approx(1));
    // complement of it
    CHECK(region_overlap_area(cell,
                              RegionSpec::annulus({0, 0}, 0, 5,
                                                  RegionKind::QuarterComplementAnnulus, 0)) ==
          doctest::Approx(3));
    // degenerate r == R has zero measure
    CHECK(region_overlap_area(cell, RegionSpec::annulus({0, 0}, 5, 5)) == doctest::Approx(0));
}

TEST_CASE("segment vs region interior") {
    const RegionSpec ann = RegionSpec::annulus({0, 0}, 2, 6);
    CHECK(segment_meets_region_interior({3, 0}, {5, 0}, ann));
    CHECK(!segment_meets_region_interior({-1, 0}, {1, 0}, ann));   // inside the hole
    CHECK(!segment_meets_region_interior({7, 0}, {9, 0}, ann));    // outside
    CHECK(segment_meets_region_interior({-1, 0}, {9, 0}, ann));    // crosses the ring
    CHECK(segment_meets_region_interior({0, -5}, {0, 5}, ann));    // crosses hole, hits both sides

    const RegionSpec half = RegionSpec::annulus({0, 0}, 1, 6, RegionKind::HalfAnnulus, 0);
    CHECK(segment_meets_region_interior({2, 1}, {4, 1}, half));
    CHECK(!segment_meets_region_interior({2, -1}, {4, -1}, half));  // wrong half plane

    const RegionSpec qc =
        RegionSpec::annulus({0, 0}, 1, 6, RegionKind::QuarterComplementAnnulus, 0);
    CHECK(!segment_meets_region_interior({2, 2}, {4, 4}, qc));  // inside removed quadrant
    CHECK(segment_meets_region_interior({-4, -4}, {-2, -2}, qc));
}

TEST_CASE("segment box interval") {
    double t0, t1;
    REQUIRE(segment_box_interval({-2, 0}, {2, 0}, {-1, -1, 1, 1}, t0, t1));
    CHECK(t0 == doctest::Approx(0.25));
    CHECK(t1 == doctest::Approx(0.75));
    CHECK(!segment_box_interval({-2, 5}, {2, 5}, {-1, -1, 1, 1}, t0, t1));
}
