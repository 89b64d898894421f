#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curveflow/compact_set.hpp"
#include "curveflow/fixtures.hpp"

using namespace curveflow;
constexpr double pi = std::numbers::pi;

TEST(Raster, CurveRasterIsConnected) {
    const auto k = fixtures::circle_raster(1.0 / 64.0);
    EXPECT_TRUE(raster_connected(k));
    EXPECT_GT(k.count(), 6u * 64u);
    for (const auto& p : k.occupied_points()) EXPECT_NEAR(norm(p), 1.0, 1.0 / 64.0);
}

TEST(Raster, JsonRoundTrip) {
    const auto k = fixtures::segment_raster(1.0 / 32.0);
    const auto back = raster_from_json(raster_to_json(k));
    EXPECT_EQ(back.rows(), k.rows());
    EXPECT_EQ(back.cols(), k.cols());
    EXPECT_EQ(back.data(), k.data());
    EXPECT_DOUBLE_EQ(back.spacing(), k.spacing());
}

TEST(Raster, ComplementLabels) {
    int n = 0;
    label_components(fixtures::circle_raster(1.0 / 64.0), false, &n);
    EXPECT_EQ(n, 2);
    label_components(fixtures::segment_raster(1.0 / 64.0), false, &n);
    EXPECT_EQ(n, 1);
}

TEST(GridExhaustion, UnitDiskAreaBounds) {
    const double h = 1.0 / 256.0;
    const auto k = fixtures::circle_raster(h);
    const auto ex = grid_exhaustion(k, {0.0, 0.0}, 4);
    ASSERT_TRUE(ex.boundary.has_value());
    EXPECT_FALSE(ex.unbounded);
    const double cell = 1.0 / 16.0;
    EXPECT_LE(ex.region.area(), pi);
    EXPECT_GE(ex.region.area(), pi - 4.0 * 2.0 * pi * cell);
    EXPECT_EQ(self_intersection_number(*ex.boundary), 0u);
    EXPECT_NEAR(std::abs(signed_area(*ex.boundary)), ex.region.area(), 0.2 * cell * length(*ex.boundary));
}

TEST(GridExhaustion, CellsAvoidK) {
    const double h = 1.0 / 128.0;
    const auto k = fixtures::circle_raster(h);
    const auto ex = grid_exhaustion(k, {0.0, 0.0}, 4);
    const double cell = ex.region.cell;
    for (const auto& c : ex.region.cells) {
        // Every cell lies strictly inside the unit disk (K's points are within h of the circle).
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Vec2 corner{ex.region.origin.x + (double(c.col) + j) * cell,
                                  ex.region.origin.y + (double(c.row) + i) * cell};
                EXPECT_LT(norm(corner), 1.0 + h);
            }
    }
}

TEST(GridExhaustion, NestedAcrossLevels) {
    const auto k = fixtures::circle_raster(1.0 / 256.0);
    std::vector<Exhaustion> ex;
    for (int n = 3; n <= 6; ++n) ex.push_back(grid_exhaustion(k, {0.003, 0.002}, n));
    for (std::size_t i = 1; i < ex.size(); ++i) {
        EXPECT_TRUE(regions_nested(ex[i - 1].region, ex[i].region)) << "level " << ex[i].region.level;
        EXPECT_GE(ex[i].region.area(), ex[i - 1].region.area());
    }
    EXPECT_THROW(regions_nested(ex[0].region, ex[2].region), InvalidInput);
}

TEST(GridExhaustion, AnnulusSeparatesCircles) {
    const double h = 1.0 / 128.0;
    const auto inner = fixtures::circle(1024, 0.5), outer = fixtures::circle(2048, 1.0);
    const auto k = raster_from_curves({inner, outer}, h);
    const auto ex = grid_exhaustion(k, {0.75, 0.0}, 5);
    ASSERT_TRUE(ex.boundary.has_value());
    EXPECT_FALSE(ex.unbounded);
    EXPECT_EQ(ex.loops.size(), 2u);
    EXPECT_EQ(self_intersection_number(*ex.boundary), 0u);
    for (std::size_t i = 0; i < inner.size(); i += 16) EXPECT_TRUE(point_in_polygon(*ex.boundary, inner[i]));
    for (std::size_t i = 0; i < outer.size(); i += 16) EXPECT_FALSE(point_in_polygon(*ex.boundary, outer[i]));
}

TEST(GridExhaustion, ExteriorRegionLoopsAroundK) {
    const auto k = fixtures::circle_raster(1.0 / 64.0);
    const auto ex = grid_exhaustion(k, k.point(0, 0), 3);
    EXPECT_TRUE(ex.unbounded);
    ASSERT_TRUE(ex.boundary.has_value());
    EXPECT_TRUE(point_in_polygon(*ex.boundary, {0.0, 0.0}));
    EXPECT_GT(std::abs(signed_area(*ex.boundary)), pi);
}

TEST(GridExhaustion, Errors) {
    const double h = 1.0 / 64.0;
    const auto k = fixtures::circle_raster(h);
    EXPECT_THROW(grid_exhaustion(k, {1.0, 0.0}, 4), InvalidInput);
    // 2^-7 is not a multiple >= 2 of 2^-6.
    EXPECT_THROW(grid_exhaustion(k, {0.0, 0.0}, 7), InvalidInput);
    EXPECT_THROW(grid_exhaustion(k, {50.0, 0.0}, 3), InvalidInput);
    // A seed whose cell touches K yields an empty region.
    const auto ex = grid_exhaustion(k, {0.98, 0.0}, 2);
    EXPECT_TRUE(ex.region.cells.empty());
    EXPECT_FALSE(ex.boundary.has_value());
}

TEST(SmoothBoundary, RoundsCornersWithoutMovingFar) {
    const auto k = fixtures::circle_raster(1.0 / 128.0);
    const auto ex = grid_exhaustion(k, {0.0, 0.0}, 5);
    const double cell = 1.0 / 32.0;
    const auto smooth = smooth_boundary(*ex.boundary, cell);
    EXPECT_EQ(self_intersection_number(smooth), 0u);
    EXPECT_LT(distances(*ex.boundary, smooth).hausdorff, 2.0 * cell);
    EXPECT_LT(length(smooth), length(*ex.boundary));
}

TEST(LocalConnectivity, CircleArcsMatchChords) {
    const double h = 1.0 / 64.0;
    const auto k = fixtures::circle_raster(h);
    const auto est = local_connectivity_estimate(k, {0.25, 0.5});
    ASSERT_EQ(est.size(), 2u);
    for (const auto& e : est) EXPECT_NEAR(e.f, e.s, 2.0 * h) << "s = " << e.s;
}

TEST(LocalConnectivity, SegmentIsExact) {
    const double h = 1.0 / 64.0;
    const auto est = local_connectivity_estimate(fixtures::segment_raster(h), {0.25, 0.5});
    for (const auto& e : est) EXPECT_NEAR(e.f, e.s, 2.0 * h);
}

TEST(LocalConnectivity, SpiralIsConnected) {
    const auto k = raster_from_curves({fixtures::spiral(0.2, 2.0)}, 1.0 / 64.0);
    const auto est = local_connectivity_estimate(k, {0.1, 0.3});
    for (const auto& e : est) {
        EXPECT_GE(e.f, e.s - 2.0 / 64.0);
        EXPECT_TRUE(std::isfinite(e.f));
    }
}

TEST(LocalConnectivity, RejectsDisconnected) {
    const auto k = raster_from_curves({fixtures::circle(256, 0.3), fixtures::circle(256, 0.3, {2.0, 0.0})}, 1.0 / 32.0);
    EXPECT_THROW(local_connectivity_estimate(k, {0.1}), InvalidInput);
}

TEST(BoundCheck, CircleWithinBound) {
    const double h = 1.0 / 64.0;
    const auto k = fixtures::circle_raster(h);
    const auto ex = grid_exhaustion(k, {0.0, 0.0}, 4);
    const auto conn = local_connectivity_estimate(k, default_scales(k));
    const auto b = multiplicity_bound_check(k, *ex.boundary, 1.0, conn);
    EXPECT_FALSE(b.inconclusive);
    EXPECT_EQ(b.measured, 2u);
    EXPECT_TRUE(b.ok);
    EXPECT_NEAR(b.diam_k, 2.0, 2.0 * h);
}

TEST(BoundCheck, HugeRadiusMeasuresZero) {
    const double h = 1.0 / 64.0;
    const auto k = fixtures::circle_raster(h);
    const auto ex = grid_exhaustion(k, {0.0, 0.0}, 4);
    const auto conn = local_connectivity_estimate(k, default_scales(k));
    const auto b = multiplicity_bound_check(k, *ex.boundary, 5.0, conn);
    EXPECT_EQ(b.measured, 0u);
    EXPECT_TRUE(b.ok);
}

TEST(BoundCheck, InconclusiveWithoutSmallScales) {
    const auto k = fixtures::circle_raster(1.0 / 64.0);
    const auto ex = grid_exhaustion(k, {0.0, 0.0}, 4);
    const std::vector<ConnectivitySample> conn{{1.0, 1.0}};
    EXPECT_TRUE(multiplicity_bound_check(k, *ex.boundary, 0.5, conn).inconclusive);
}
