#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curveflow/fixtures.hpp"
#include "curveflow/multiplicity.hpp"

using namespace curveflow;
constexpr double pi = std::numbers::pi;

TEST(Fixtures, CircleLength) {
    EXPECT_NEAR(length(fixtures::circle(512)), 2.0 * pi, 1e-4);
    EXPECT_EQ(fixtures::circle(512).size(), 512u);
    EXPECT_EQ(fixtures::circle(64).orientation(), 1);
}

TEST(Fixtures, KochLengthIdentity) {
    for (int n = 0; n <= 5; ++n) {
        const auto c = fixtures::koch_prefix(n, 2.0);
        EXPECT_NEAR(length(c), 3.0 * std::pow(4.0 / 3.0, n) * 2.0, 1e-9) << "n = " << n;
        EXPECT_EQ(c.size(), 3u * std::size_t(std::pow(4, n)));
        EXPECT_EQ(self_intersection_number(c), 0u);
    }
    // Bumps point outward: each iteration adds area.
    EXPECT_GT(signed_area(fixtures::koch_prefix(2)), signed_area(fixtures::koch_prefix(1)));
}

TEST(Fixtures, FigureEightDoublePoint) {
    EXPECT_EQ(self_intersection_number(fixtures::figure_eight(512)), 2u);
}

TEST(Fixtures, CombCrossings) {
    const auto c = fixtures::comb(5, 0.25);
    EXPECT_EQ(curve_line_intersections(c, Line::horizontal(0.1)), 10u);
    EXPECT_EQ(curve_line_intersections(c, Line::horizontal(-0.1)), 10u);
    EXPECT_EQ(self_intersection_number(c), 0u);
}

TEST(Fixtures, SawtoothStaysInBox) {
    const auto s = fixtures::sawtooth(8, 0.2, 4.0);
    EXPECT_FALSE(s.closed());
    EXPECT_DOUBLE_EQ(s.vertices().front().x, 0.0);
    EXPECT_DOUBLE_EQ(s.vertices().back().x, 4.0);
    for (const auto& p : s.vertices()) EXPECT_LE(std::abs(p.y), 0.2 + 1e-12);
}

TEST(Fixtures, WedgePetalsMeetAtOrigin) {
    for (int k : {2, 3}) {
        const auto c = fixtures::wedge_circles(k, 256);
        std::size_t at_origin = 0;
        for (const auto& p : c.vertices())
            if (norm(p) < 1e-12) ++at_origin;
        EXPECT_EQ(at_origin, std::size_t(k)) << "k = " << k;
    }
}

TEST(Fixtures, TwoTangentCircles) {
    // k = 2 petals are unit circles centred at (+-1, 0).
    const auto c = fixtures::wedge_circles(2, 512);
    for (const auto& p : c.vertices()) {
        const double d = std::min(distance(p, {1.0, 0.0}), distance(p, {-1.0, 0.0}));
        EXPECT_NEAR(d, 1.0, 1e-9);
    }
}

TEST(Fixtures, AnnulusRasterIsThick) {
    const double h = 1.0 / 64.0;
    const auto k = fixtures::annulus_raster(h);
    for (const auto& p : k.occupied_points()) EXPECT_NEAR(norm(p), 1.0, 0.05 + 2.0 * h);
    EXPECT_GT(interior_count(k), 0u);
}

TEST(Fixtures, JitterIsDeterministic) {
    const auto a = fixtures::jitter(fixtures::circle(64), 0.01, 42);
    const auto b = fixtures::jitter(fixtures::circle(64), 0.01, 42);
    const auto c = fixtures::jitter(fixtures::circle(64), 0.01, 43);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].y, b[i].y);
        differs = differs || a[i].x != c[i].x;
    }
    EXPECT_TRUE(differs);
}

TEST(Fixtures, CounterRngIsStateless) {
    CounterRng rng(9);
    const double u = rng.uniform(5);
    EXPECT_EQ(u, rng.uniform(5));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_NE(rng.bits(1), rng.bits(2));
}

TEST(Registry, BuildsEveryKind) {
    for (const auto& kind : fixture_kinds()) {
        const auto f = make_fixture(kind, nlohmann::json::object());
        if (kind == "annulus") EXPECT_TRUE(std::holds_alternative<RasterSet>(f));
        else EXPECT_TRUE(std::holds_alternative<PolyCurve>(f)) << kind;
    }
    EXPECT_THROW(make_fixture("hexagon", nlohmann::json::object()), InvalidInput);
    EXPECT_THROW(make_fixture("circle", {{"n", 10.5}}), InvalidInput);
}

TEST(Registry, ParametersAndRasterization) {
    const auto c = std::get<PolyCurve>(make_fixture("circle", {{"n", 128}, {"radius", 2.0}}));
    EXPECT_EQ(c.size(), 128u);
    EXPECT_NEAR(diameter(c), 4.0, 1e-12);
    const auto k = std::get<RasterSet>(make_fixture("koch_prefix", {{"iter", 2}, {"raster_spacing", 1.0 / 64}}));
    EXPECT_DOUBLE_EQ(k.spacing(), 1.0 / 64);
    EXPECT_TRUE(raster_connected(k));
}
