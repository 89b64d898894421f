#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curveflow/curve_io.hpp"
#include "curveflow/fixtures.hpp"
#include "curveflow/geometry.hpp"

using namespace curveflow;
constexpr double pi = std::numbers::pi;

namespace {

PolyCurve unit_square() { return PolyCurve({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Proper crossings of non-adjacent edges, by sign tests only.
std::size_t brute_force_crossings(const PolyCurve& c) {
    auto side = [](Vec2 a, Vec2 b, Vec2 p) {
        const double v = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        return (v > 0) - (v < 0);
    };
    const std::size_t n = c.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Vec2 a = c[i], b = c[(i + 1) % n], p = c[j], q = c[(j + 1) % n];
            if (side(a, b, p) * side(a, b, q) < 0 && side(p, q, a) * side(p, q, b) < 0) ++count;
        }
    return count;
}

}  // namespace

TEST(Metrics, UnitSquare) {
    const auto m = metrics(unit_square());
    EXPECT_DOUBLE_EQ(m.length, 4.0);
    EXPECT_DOUBLE_EQ(m.signed_area, 1.0);
    EXPECT_NEAR(m.diameter, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.isoperimetric_ratio, 4.0 / pi, 1e-15);
    EXPECT_DOUBLE_EQ(metrics(unit_square().reversed()).signed_area, -1.0);
}

TEST(Metrics, RegularPolygonClosedForms) {
    const std::size_t n = 512;
    const auto c = fixtures::circle(n);
    EXPECT_NEAR(length(c), 2.0 * n * std::sin(pi / n), 1e-12);
    EXPECT_NEAR(signed_area(c), 0.5 * n * std::sin(2.0 * pi / n), 1e-12);
    EXPECT_NEAR(diameter(c), 2.0, 1e-12);
    EXPECT_EQ(c.orientation(), 1);
    EXPECT_EQ(c.reversed().orientation(), -1);
}

TEST(Metrics, BowTieHasZeroArea) {
    const auto m = metrics(PolyCurve({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
    EXPECT_NEAR(m.signed_area, 0.0, 1e-15);
    EXPECT_TRUE(std::isnan(m.isoperimetric_ratio));
}

TEST(PolyCurve, RejectsBadInput) {
    EXPECT_THROW(PolyCurve({{0, 0}, {1, 0}}), InvalidInput);
    EXPECT_THROW(PolyCurve({{0, 0}}, false), InvalidInput);
    EXPECT_THROW(PolyCurve({{0, 0}, {0, 0}, {1, 1}}), InvalidInput);
    EXPECT_THROW(PolyCurve({{0, 0}, {NAN, 0}, {1, 1}}), InvalidInput);
    EXPECT_EQ(PolyCurve::cleaned({{0, 0}, {0, 0}, {1, 0}, {1, 1}, {0, 0}}).size(), 3u);
}

TEST(SelfIntersection, FigureEightCountsBothPreimages) {
    // One transverse double point at the origin, two parameter points.
    EXPECT_EQ(self_intersection_number(fixtures::figure_eight(512)), 2u);
}

TEST(SelfIntersection, EmbeddedFixturesHaveNone) {
    EXPECT_EQ(self_intersection_number(fixtures::circle(256)), 0u);
    EXPECT_EQ(self_intersection_number(fixtures::star(32)), 0u);
    EXPECT_EQ(self_intersection_number(fixtures::koch_prefix(3)), 0u);
    EXPECT_EQ(self_intersection_number(fixtures::comb(4, 0.25)), 0u);
    // Collinear consecutive vertices are not crossings.
    EXPECT_EQ(self_intersection_number(PolyCurve({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}})), 0u);
}

TEST(SelfIntersection, RandomPolygonsMatchBruteForce) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> v(12);
        for (auto& p : v) p = {u(rng), u(rng)};
        const PolyCurve c(v);
        EXPECT_EQ(self_intersection_number(c), 2 * brute_force_crossings(c)) << "trial " << trial;
    }
}

TEST(SelfIntersection, PentagramHasFiveDoublePoints) {
    std::vector<Vec2> v;
    for (int k = 0; k < 5; ++k) v.push_back({std::cos(4.0 * pi * k / 5.0), std::sin(4.0 * pi * k / 5.0)});
    EXPECT_EQ(self_intersection_number(PolyCurve(v)), 10u);
}

TEST(LineIntersections, CircleAndLines) {
    const auto c = fixtures::circle(256);
    EXPECT_EQ(curve_line_intersections(c, Line::horizontal(0.0)), 2u);
    EXPECT_EQ(curve_line_intersections(c, Line::horizontal(0.5)), 2u);
    EXPECT_EQ(curve_line_intersections(c, Line::horizontal(2.0)), 0u);
}

TEST(LineIntersections, SineGraph) {
    std::vector<Vec2> v;
    const int n = 600;
    for (int i = 0; i <= n; ++i) {
        const double x = 6.0 * pi * i / n + 0.3;
        v.push_back({x, std::sin(x)});
    }
    // sin vanishes at pi, 2pi, ..., 6pi in (0.3, 6pi + 0.3].
    EXPECT_EQ(curve_line_intersections(PolyCurve(v, false), Line::horizontal(0.0)), 6u);
}

TEST(LineIntersections, CrossingCountBetweenCurves) {
    const auto a = fixtures::circle(256);
    const auto b = fixtures::circle(256, 1.0, {1.0, 0.0});
    EXPECT_EQ(crossing_count(a, b), 2u);
    EXPECT_FALSE(curves_intersect(a, fixtures::circle(256, 0.5)));
}

TEST(Lipschitz, GraphCases) {
    const PolyCurve flat({{0, 0}, {1, 0}, {2, 0}}, false);
    EXPECT_TRUE(lipschitz_graph_check(flat, Line::horizontal(0.0), 0.1).is_graph);
    const PolyCurve steep({{0, 0}, {1, 2}, {2, 0}}, false);
    const auto g = lipschitz_graph_check(steep, Line::horizontal(0.0), 1.0);
    EXPECT_FALSE(g.is_graph);
    EXPECT_DOUBLE_EQ(g.max_slope, 2.0);
    EXPECT_TRUE(lipschitz_graph_check(steep, Line::horizontal(0.0), 2.0).is_graph);
    const PolyCurve back({{0, 0}, {1, 0}, {0.5, 0.1}}, false);
    EXPECT_FALSE(lipschitz_graph_check(back, Line::horizontal(0.0), 10.0).is_graph);
    EXPECT_FALSE(lipschitz_graph_check(fixtures::circle(64), Line::horizontal(0.0), 100.0).is_graph);
    EXPECT_THROW(lipschitz_graph_check(flat, Line::horizontal(0.0), 0.0), InvalidInput);
}

TEST(Resample, SquareAtQuarterSpacing) {
    const auto r = resample(unit_square(), 0.25);
    EXPECT_EQ(r.size(), 16u);
    for (std::size_t i = 0; i < r.edge_count(); ++i) EXPECT_NEAR(r.edge_length(i), 0.25, 1e-12);
    EXPECT_DOUBLE_EQ(signed_area(r), 1.0);
}

TEST(Resample, Errors) {
    EXPECT_THROW(resample(unit_square(), 0.0), InvalidInput);
    EXPECT_THROW(resample(unit_square(), 2.0), InvalidInput);
}

TEST(Resample, OpenCurveKeepsEndpoints) {
    const auto r = resample(fixtures::segment(1.0, 1), 0.1);
    EXPECT_EQ(r.size(), 11u);
    EXPECT_DOUBLE_EQ(r.vertices().front().x, fixtures::segment(1.0, 1)[0].x);
    EXPECT_DOUBLE_EQ(r.vertices().back().x, fixtures::segment(1.0, 1)[1].x);
}

TEST(Distances, SelfConcentricAndShifted) {
    const auto c = fixtures::circle(256);
    const auto d0 = distances(c, c);
    EXPECT_NEAR(d0.hausdorff, 0.0, 1e-12);
    EXPECT_NEAR(d0.matched_sup, 0.0, 1e-12);

    const auto d1 = distances(c, fixtures::circle(256, 1.1));
    EXPECT_NEAR(d1.hausdorff, 0.1, 1e-3);
    EXPECT_NEAR(d1.matched_sup, 0.1, 1e-3);

    // Same image, different starting vertex.
    std::vector<Vec2> v(c.vertices().begin() + 37, c.vertices().end());
    v.insert(v.end(), c.vertices().begin(), c.vertices().begin() + 37);
    EXPECT_NEAR(distances(c, PolyCurve(v)).matched_sup, 0.0, 1e-9);
    EXPECT_NEAR(distances(c, c.reversed()).matched_sup, 0.0, 1e-9);
}

TEST(Distances, TranslatedCircle) {
    const auto c = fixtures::circle(256);
    const auto d = distances(c, fixtures::circle(256, 1.0, {0.2, 0.0}));
    EXPECT_NEAR(d.hausdorff, 0.2, 2e-3);
    EXPECT_NEAR(d.matched_sup, 0.2, 2e-3);
}

TEST(Invariance, RigidMotions) {
    const auto c = fixtures::star(16);
    const auto moved = c.transformed([](Vec2 p) { return rotate(p, 0.7) + Vec2{3.0, -2.0}; });
    const auto a = metrics(c), b = metrics(moved);
    EXPECT_NEAR(a.length, b.length, 1e-12);
    EXPECT_NEAR(a.signed_area, b.signed_area, 1e-12);
    EXPECT_NEAR(a.diameter, b.diameter, 1e-12);
    EXPECT_EQ(self_intersection_number(fixtures::figure_eight(128).transformed([](Vec2 p) { return rotate(p, 1.1); })),
              2u);
}

TEST(PointQueries, InsideAndDistance) {
    const auto c = fixtures::circle(512);
    EXPECT_TRUE(point_in_polygon(c, {0.1, 0.2}));
    EXPECT_FALSE(point_in_polygon(c, {1.1, 0.0}));
    EXPECT_NEAR(point_curve_distance({0.0, 0.0}, c), 1.0, 1e-4);
    EXPECT_DOUBLE_EQ(point_segment_distance({0.5, 1.0}, {0, 0}, {1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(point_segment_distance({2.0, 0.0}, {0, 0}, {1, 0}), 1.0);
}

TEST(CurveIo, JsonRoundTrip) {
    const auto c = fixtures::koch_prefix(2);
    const auto back = curve_from_json(curve_to_json(c));
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back[i].x, c[i].x);
        EXPECT_EQ(back[i].y, c[i].y);
    }
    const auto open = curve_from_json(curve_to_json(fixtures::segment(1.0, 3)));
    EXPECT_FALSE(open.closed());
    EXPECT_THROW(curve_from_json(nlohmann::json::object()), InvalidInput);
    EXPECT_THROW(curve_from_json({{"vertices", {{0, 0}, {1}}}}), InvalidInput);
}
