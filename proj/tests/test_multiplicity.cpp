#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curveflow/fixtures.hpp"
#include "curveflow/multiplicity.hpp"

using namespace curveflow;
constexpr double pi = std::numbers::pi;

namespace {

// Zigzag whose preimage of |y| < 2 has nine components, five of which reach |y| <= 1.
PolyCurve nine_component_zigzag() {
    const double ys[] = {3, 1.5, 3, 0.5, 3, -3, -1.5, -3, -0.9, -3, 3, 0.0, 3, 1.2, 3, 1.9, 3};
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < std::size(ys); ++i) v.push_back({double(i), ys[i]});
    return PolyCurve(v, false);
}

}  // namespace

TEST(StripMultiplicity, CircleThroughCenter) {
    const auto c = fixtures::circle(1024);
    EXPECT_EQ(strip_multiplicity(c, Line::horizontal(0.0), 1.0), 2u);
    EXPECT_EQ(strip_multiplicity(c, Line::horizontal(0.0), 3.0), 0u);
    EXPECT_EQ(strip_multiplicity(c, Line::horizontal(5.0), 0.5), 0u);
}

TEST(StripMultiplicity, RejectsNonPositiveRadius) {
    const auto c = fixtures::circle(64);
    EXPECT_THROW(strip_multiplicity(c, Line::horizontal(0.0), 0.0), InvalidInput);
    EXPECT_THROW(tilde_strip_multiplicity(c, Line::horizontal(0.0), -1.0), InvalidInput);
}

TEST(TildeMultiplicity, NineComponentZigzag) {
    EXPECT_EQ(tilde_strip_multiplicity(nine_component_zigzag(), Line::horizontal(0.0), 1.0), 5u);
}

TEST(TildeMultiplicity, CircleCases) {
    const auto c = fixtures::circle(1024);
    EXPECT_EQ(tilde_strip_multiplicity(c, Line::horizontal(0.0), 0.25), 2u);
    // Whole circle inside the 2r-strip: one component.
    EXPECT_EQ(tilde_strip_multiplicity(c, Line::horizontal(0.0), 1.0), 1u);
    EXPECT_EQ(tilde_strip_multiplicity(c, Line::horizontal(10.0), 1.0), 0u);
}

TEST(RMultiplicity, UnitCircle) {
    const auto cert = r_multiplicity(fixtures::circle(512), 1.0, 64);
    EXPECT_EQ(cert.value, 2u);
    EXPECT_EQ(cert.directions_used, 64u);
    EXPECT_EQ(cert.witness_lines.size(), 64u);
}

TEST(RMultiplicity, ThinEllipse) {
    EXPECT_EQ(r_multiplicity(fixtures::ellipse(1.0, 0.01, 1024), 0.5, 64).value, 2u);
}

TEST(RMultiplicity, CombTeeth) {
    for (int k : {2, 4, 6}) {
        const auto c = fixtures::comb(k, 0.25);
        EXPECT_EQ(strip_multiplicity(c, Line::horizontal(0.0), 0.25), std::size_t(2 * k)) << "k = " << k;
        EXPECT_GE(r_multiplicity(c, 0.25, 64).value, std::size_t(2 * k)) << "k = " << k;
    }
}

TEST(RMultiplicity, WitnessReproducesValue) {
    const auto c = fixtures::star(32);
    const auto cert = r_multiplicity(c, 0.3, 32);
    std::size_t best = 0;
    for (const auto& w : cert.witness_lines) {
        EXPECT_EQ(strip_multiplicity(c, w.line, 0.3), w.count);
        best = std::max(best, w.count);
    }
    EXPECT_EQ(best, cert.value);
}

TEST(RMultiplicity, NonIncreasingInRadius) {
    const auto c = fixtures::koch_prefix(3);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double r : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        // Larger strips are harder to cross, so M_r cannot grow with r on a fixed line set.
        const auto m = r_multiplicity(c, r, 32).value;
        EXPECT_LE(m, prev) << "r = " << r;
        prev = m;
    }
}

TEST(RMultiplicity, CertificateJson) {
    const auto j = certificate_to_json(r_multiplicity(fixtures::circle(256), 1.0, 8));
    EXPECT_EQ(j.at("value").get<int>(), 2);
    EXPECT_EQ(j.at("witness_lines").size(), 8u);
    EXPECT_EQ(j.at("mode").get<std::string>(), "exact_per_direction");
}

TEST(Comparability, CircleCenterLine) {
    const auto rep = comparability_report(fixtures::circle(512), 1.0, {Line::horizontal(0.0)});
    ASSERT_EQ(rep.size(), 1u);
    EXPECT_EQ(rep[0].m, 2u);
    EXPECT_TRUE(rep[0].m_tilde == 1u || rep[0].m_tilde == 2u);
    EXPECT_TRUE(rep[0].ok);
}

TEST(Comparability, DisjointLine) {
    const auto rep = comparability_report(fixtures::circle(128), 0.1, {Line::horizontal(4.0)});
    EXPECT_EQ(rep[0].m, 0u);
    EXPECT_EQ(rep[0].m_tilde, 0u);
    EXPECT_TRUE(rep[0].ok);
}

TEST(Comparability, GlobalOnFixtures) {
    for (const auto& c : {fixtures::circle(256), fixtures::ellipse(1.5, 0.75, 256), fixtures::star(16),
                          fixtures::koch_prefix(2), fixtures::comb(3, 0.25)}) {
        for (double r : {0.1, 0.3}) EXPECT_TRUE(comparability_global(c, r, 64).ok);
    }
}

TEST(Reparametrize, ScaleListValidation) {
    EXPECT_THROW(ScaleList({}), InvalidInput);
    EXPECT_THROW(ScaleList({1.0, 1.0}), InvalidInput);
    EXPECT_THROW(ScaleList({1.0, -0.5}), InvalidInput);
    EXPECT_NO_THROW(ScaleList({1.0, 0.5, 0.25}));
}

TEST(Reparametrize, CircleFirstLevelMatchesGreedyOracle) {
    const auto c = fixtures::circle(2048);
    const auto rep = canonical_reparametrize(c, ScaleList({1.0}));
    // Independent greedy walk with chord steps of 1/8.
    std::size_t count = 1;
    Vec2 last = c[0];
    for (std::size_t i = 1; i < c.size(); ++i)
        if (distance(c[i], last) >= 0.125) {
            ++count;
            last = c[i];
        }
    if (distance(last, c[0]) < 0.125) --count;
    EXPECT_EQ(rep.modulus[0].max_count, count);
    EXPECT_NEAR(double(count), 2.0 * pi / (2.0 * std::asin(1.0 / 16.0)), 2.0);
    EXPECT_TRUE(rep.modulus[0].verified);
}

TEST(Reparametrize, ScaleTooLarge) {
    const PolyCurve square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    EXPECT_THROW(canonical_reparametrize(square, ScaleList({8.0 * std::sqrt(2.0)})), InvalidInput);
}

TEST(Reparametrize, ModulusHoldsOnAllVertexPairs) {
    for (const auto& c : {fixtures::circle(512), fixtures::star(32), fixtures::koch_prefix(3)}) {
        const auto rep = canonical_reparametrize(c, ScaleList({1.0, 0.25}));
        ASSERT_EQ(rep.modulus.size(), 2u);
        ASSERT_EQ(rep.vertex_angles.size(), c.size());
        for (const auto& mod : rep.modulus) {
            bool ok = true;
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = 0; j < c.size(); ++j) {
                    double gap = std::abs(rep.vertex_angles[i] - rep.vertex_angles[j]);
                    gap = std::min(gap, 2.0 * pi - gap);
                    if (gap < mod.delta && distance(c[i], c[j]) >= mod.radius) ok = false;
                }
            EXPECT_EQ(ok, mod.verified);
            EXPECT_TRUE(ok) << "radius " << mod.radius;
        }
    }
}

TEST(Reparametrize, AnglesAreMonotone) {
    const auto c = fixtures::star(32);
    const auto rep = canonical_reparametrize(c, ScaleList({1.0, 0.5}));
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(rep.vertex_angles[i], rep.vertex_angles[i - 1]);
    EXPECT_LT(rep.vertex_angles.back(), 2.0 * pi);
}

TEST(ModulusOfContinuity, CircleChord) {
    const auto c = fixtures::circle(720);
    // Chord >= 1 iff angular gap >= 2 asin(1/2) = pi/3.
    EXPECT_NEAR(modulus_of_continuity(c, 1.0), pi / 3.0, 2.0 * pi / 720.0);
}
