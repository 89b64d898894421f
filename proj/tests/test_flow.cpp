#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curveflow/fixtures.hpp"
#include "curveflow/flow.hpp"

using namespace curveflow;
constexpr double pi = std::numbers::pi;

TEST(Curvature, RegularPolygonPointsInward) {
    const auto c = fixtures::circle(64);
    const auto k = curvature_vectors(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_NEAR(norm(k[i]), 1.0, 1e-2);
        EXPECT_LT(dot(k[i], c[i]), 0.0);
    }
}

TEST(Curvature, CollinearTripleIsZero) {
    const PolyCurve c({{0, 0}, {1, 0}, {2, 0}, {1, 1}});
    const auto k = curvature_vectors(c);
    EXPECT_EQ(k[1].x, 0.0);
    EXPECT_EQ(k[1].y, 0.0);
    EXPECT_GT(norm(k[3]), 0.0);
}

TEST(Curvature, ReflectionEquivariance) {
    const auto c = fixtures::star(8);
    const auto m = c.transformed([](Vec2 p) { return Vec2{p.x, -p.y}; });
    const auto a = curvature_vectors(c), b = curvature_vectors(m);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_NEAR(a[i].x, b[i].x, 1e-12);
        EXPECT_NEAR(a[i].y, -b[i].y, 1e-12);
    }
}

TEST(Curvature, OpenEndpointsAreZero) {
    const auto k = curvature_vectors(PolyCurve({{0, 0}, {1, 1}, {2, 0}}, false));
    EXPECT_EQ(norm(k[0]), 0.0);
    EXPECT_EQ(norm(k[2]), 0.0);
    EXPECT_NEAR(norm(k[1]), 1.0, 1e-12);
}

TEST(Evolve, ShrinkingCircle) {
    FlowConfig cfg;
    cfg.t_end = 0.25;
    const auto traj = evolve(fixtures::circle(512), cfg);
    EXPECT_EQ(traj.status, FlowStatus::running);
    EXPECT_DOUBLE_EQ(traj.final_time(), 0.25);
    const double R = std::sqrt(0.5);
    const auto& c = traj.final_curve();
    for (const auto& p : c.vertices()) EXPECT_NEAR(norm(p), R, 1e-3 * R);
    EXPECT_NEAR(length(c), 2.0 * pi * R, 1e-3 * 2.0 * pi * R);
}

TEST(Evolve, CircleExtinction) {
    FlowConfig cfg;
    cfg.t_end = 0.6;
    cfg.keep_curves = false;
    const auto traj = evolve(fixtures::circle(512), cfg);
    EXPECT_EQ(traj.status, FlowStatus::extinct);
    EXPECT_LT(traj.final_time(), 0.5 + 1e-3);
    EXPECT_GT(traj.final_time(), 0.49);
}

TEST(Evolve, SampleTimesAreHit) {
    FlowConfig cfg;
    cfg.t_end = 0.2;
    cfg.sample_times = {0.05, 0.1, 0.15};
    const auto traj = evolve(fixtures::circle(256), cfg);
    ASSERT_EQ(traj.samples.size(), 5u);
    const double expected[] = {0.0, 0.05, 0.1, 0.15, 0.2};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(traj.samples[i].t, expected[i]);
}

TEST(Evolve, EllipseBecomesRound) {
    // Area decreases at rate 2 pi; 90% of pi/2 is gone at t = 0.225.
    FlowConfig cfg;
    cfg.t_end = 0.225;
    cfg.sample_times = {0.05, 0.1, 0.15, 0.2};
    const auto traj = evolve(fixtures::ellipse(1.0, 0.5, 512), cfg);
    ASSERT_EQ(traj.status, FlowStatus::running);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        const double iso = s.metrics.length * s.metrics.length / (4.0 * pi * std::abs(s.metrics.area));
        EXPECT_LT(iso, prev + 1e-9);
        prev = iso;
    }
    EXPECT_LT(prev, 1.01);
    EXPECT_NEAR(traj.samples.back().metrics.area, 0.1 * pi / 2.0, 5e-3);
}

TEST(Evolve, ConfigErrors) {
    const auto c = fixtures::circle(64);
    FlowConfig cfg;
    cfg.cfl = 0.6;
    EXPECT_THROW(evolve(c, cfg), InvalidInput);
    cfg = {};
    cfg.extinction_length = 10.0;
    EXPECT_THROW(evolve(c, cfg), InvalidInput);
    cfg = {};
    EXPECT_THROW(evolve(fixtures::segment(1.0, 4), cfg), InvalidInput);
}

TEST(Evolve, LengthDissipationOnCircle) {
    FlowConfig cfg;
    cfg.t_end = 0.3;
    cfg.record_every = 32;
    const auto traj = evolve(fixtures::circle(512), cfg);
    EXPECT_LT(length_dissipation_check(traj).max_defect, 1e-3);
}

TEST(Evolve, AreaRateIsTwoPi) {
    FlowConfig cfg;
    cfg.t_end = 0.2;
    cfg.record_every = 32;
    const auto traj = evolve(fixtures::star(32), cfg);
    EXPECT_NEAR(area_rate(traj, 0.05, 0.2), -2.0 * pi, 0.05);
}

TEST(Evolve, NestedCurvesStayDisjoint) {
    FlowConfig cfg;
    cfg.t_end = 0.1;
    cfg.sample_times = {0.02, 0.04, 0.06, 0.08};
    const auto outer = evolve(fixtures::star(32, 1.0, 0.6), cfg);
    const auto inner = evolve(fixtures::circle(256, 0.45), cfg);
    ASSERT_EQ(outer.samples.size(), inner.samples.size());
    for (std::size_t i = 0; i < outer.samples.size(); ++i)
        EXPECT_FALSE(curves_intersect(*outer.samples[i].curve, *inner.samples[i].curve)) << "t = " << outer.samples[i].t;
}

TEST(Evolve, StaysInConvexHull) {
    const auto c = fixtures::star(32);
    const auto hull = convex_hull(c.vertices());
    FlowConfig cfg;
    cfg.t_end = 0.1;
    cfg.record_every = 64;
    for (const auto& s : evolve(c, cfg).samples)
        for (const auto& p : s.curve->vertices()) EXPECT_TRUE(point_in_convex(hull, p, 1e-9));
}

TEST(Evolve, RefinementConverges) {
    // Radius error against the exact shrinking circle decreases with the edge length.
    auto radius_error = [](std::size_t n) {
        FlowConfig cfg;
        cfg.t_end = 0.1;
        cfg.target_edge = 2.0 * pi / double(n);
        const auto traj = evolve(fixtures::circle(n), cfg);
        double worst = 0.0;
        for (const auto& p : traj.final_curve().vertices()) worst = std::max(worst, std::abs(norm(p) - std::sqrt(0.8)));
        return worst;
    };
    const double e1 = radius_error(64), e2 = radius_error(128), e3 = radius_error(256);
    EXPECT_LT(e2, e1);
    EXPECT_LT(e3, e2);
    EXPECT_LT(e3, 1e-3);
}

TEST(Evolve, StarFollowsAreaLaw) {
    FlowConfig cfg;
    cfg.t_end = 0.05;
    cfg.target_edge = 0.01;
    const double a = evolve(fixtures::star(32), cfg).samples.back().metrics.area;
    EXPECT_NEAR(a, signed_area(fixtures::star(32)) - 2.0 * pi * 0.05, 5e-3);
}

TEST(Evolve, FigureEightKeepsItsCrossing) {
    FlowConfig cfg;
    cfg.t_end = 0.01;
    cfg.record_every = 16;
    const auto traj = evolve(fixtures::figure_eight(512), cfg);
    EXPECT_EQ(traj.status, FlowStatus::running);
    EXPECT_EQ(self_intersection_number(traj.final_curve()), 2u);
}

TEST(GraphFlow, StraightLinesAreStationary) {
    const auto zero = graph_evolve(GraphState::sampled(0.0, 1.0, 50, [](double) { return 0.0; }), 0.1, 0.4);
    EXPECT_EQ(zero.sup_norm(), 0.0);
    const auto line = graph_evolve(GraphState::sampled(0.0, 1.0, 50, [](double x) { return 0.3 * x; }), 0.1, 0.4);
    for (std::size_t i = 0; i < line.heights.size(); ++i) EXPECT_NEAR(line.heights[i], 0.3 * line.x(i), 1e-12);
}

TEST(GraphFlow, RejectsUnstableCfl) {
    const auto g = GraphState::sampled(0.0, 1.0, 10, [](double x) { return x; });
    EXPECT_THROW(graph_evolve(g, 0.1, 0.6), InvalidInput);
    EXPECT_THROW(GraphState(0.0, 0.1, {1.0, 2.0}), InvalidInput);
}

TEST(GraphFlow, SineSelfConvergence) {
    auto run = [](std::size_t intervals) {
        return graph_evolve(GraphState::sampled(0.0, 2.0 * pi, intervals, [](double x) { return std::sin(x); }), 0.5,
                            0.4);
    };
    const auto coarse = run(128), fine = run(512);
    EXPECT_NEAR(coarse.sup_norm(), fine.sup_norm(), 1e-3);
    // The flow decays the bump.
    EXPECT_LT(fine.sup_norm(), 1.0);
    EXPECT_NEAR(fine.at(pi / 2.0), coarse.at(pi / 2.0), 1e-3);
}
