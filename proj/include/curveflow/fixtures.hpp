#pragma once

// Deterministic fixture curves and rasters.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "curveflow/error.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/raster.hpp"

namespace curveflow {

/// Counter-based generator: value i of stream `seed` is a pure function of
/// (seed, i), so parallel consumers never share state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t bits(std::uint64_t counter) const { return mix(seed_ ^ mix(counter)); }
    // Uniform in [0, 1).
    double uniform(std::uint64_t counter) const { return double(bits(counter) >> 11) * 0x1.0p-53; }

private:
    std::uint64_t seed_;
};

namespace fixtures {

inline PolyCurve circle(std::size_t n = 512, double radius = 1.0, Vec2 center = {}) {
    if (n < 3) throw InvalidInput("circle needs n >= 3");
    std::vector<Vec2> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * double(i) / double(n);
        v[i] = center + radius * Vec2{std::cos(th), std::sin(th)};
    }
    return PolyCurve(std::move(v));
}

inline PolyCurve ellipse(double a, double b, std::size_t n = 512) {
    if (!(a > 0 && b > 0) || n < 3) throw InvalidInput("ellipse needs a, b > 0 and n >= 3");
    std::vector<Vec2> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * double(i) / double(n);
        v[i] = {a * std::cos(th), b * std::sin(th)};
    }
    return PolyCurve(std::move(v));
}

/// Five-pointed star polygon with outer radius 1 and inner radius 0.5,
/// each side subdivided into `per_side` pieces.
inline PolyCurve star(std::size_t per_side = 32, double outer = 1.0, double inner = 0.5) {
    std::vector<Vec2> corners;
    for (int i = 0; i < 10; ++i) {
        const double th = std::numbers::pi / 2 + std::numbers::pi * i / 5.0;
        corners.push_back((i % 2 ? inner : outer) * Vec2{std::cos(th), std::sin(th)});
    }
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        const Vec2 a = corners[i], b = corners[(i + 1) % corners.size()];
        for (std::size_t k = 0; k < per_side; ++k) v.push_back(a + (double(k) / double(per_side)) * (b - a));
    }
    return PolyCurve(std::move(v));
}

/// Open sawtooth polyline over [0, l] with `teeth` teeth of peak height
/// `amp`, starting and ending at height 0.
inline PolyCurve sawtooth(int teeth = 8, double amp = 0.2, double l = 4.0) {
    if (teeth < 1 || !(l > 0)) throw InvalidInput("sawtooth needs teeth >= 1 and l > 0");
    std::vector<Vec2> v;
    const double w = l / teeth;
    for (int i = 0; i < teeth; ++i) {
        v.push_back({i * w, 0.0});
        v.push_back({(i + 0.5) * w, amp});
    }
    v.push_back({l, 0.0});
    return PolyCurve(std::move(v), false);
}

/// Koch snowflake after `iter` refinements of a unit-side triangle
/// (counterclockwise, bumps pointing outward).
inline PolyCurve koch_prefix(int iter, double side = 1.0) {
    if (iter < 0 || iter > 8) throw InvalidInput("koch_prefix iterations must be in [0, 8]");
    const double h = side * std::sqrt(3.0) / 2.0;
    std::vector<Vec2> v{{-side / 2, -h / 3}, {side / 2, -h / 3}, {0.0, 2 * h / 3}};
    for (int it = 0; it < iter; ++it) {
        std::vector<Vec2> next;
        next.reserve(v.size() * 4);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i], b = v[(i + 1) % v.size()];
            const Vec2 d = (b - a) / 3.0;
            const Vec2 p = a + d, q = a + 2.0 * d;
            // Outward for a counterclockwise polygon is to the right of the edge.
            const Vec2 tip = p + rotate(d, -std::numbers::pi / 3);
            next.insert(next.end(), {a, p, tip, q});
        }
        v = std::move(next);
    }
    return PolyCurve(std::move(v));
}

/// Comb with k teeth whose tops sit at y = r and gaps at y = -r, on a base
/// at y = -2r. Every horizontal line with |y| < r crosses it 2k times.
inline PolyCurve comb(int k, double r, double tooth_width = 0.0) {
    if (k < 1 || !(r > 0)) throw InvalidInput("comb needs k >= 1 and r > 0");
    const double w = tooth_width > 0 ? tooth_width : r;
    std::vector<Vec2> v;
    const double pitch = 2.0 * w;
    v.push_back({0.0, -2.0 * r});
    v.push_back({pitch * k, -2.0 * r});
    for (int i = k - 1; i >= 0; --i) {
        const double x0 = pitch * i;
        v.push_back({x0 + pitch, r});
        v.push_back({x0 + w, r});
        if (i > 0) {
            v.push_back({x0 + w, -r});
            v.push_back({x0, -r});
        }
    }
    v.push_back({0.0, r});
    return PolyCurve(std::move(v));
}

/// k petals meeting at the origin. Petal i is r = R cos(pi (theta - theta_i) / (2 w))
/// for |theta - theta_i| <= w. For k = 2, w = pi / 2 and R = 2 give two unit
/// circles tangent at the origin; for k >= 3, w = 0.8 pi / k so adjacent
/// petals leave the origin at an angle.
inline PolyCurve wedge_circles(int k, std::size_t samples_per_petal = 256, double R = 2.0) {
    if (k < 2) throw InvalidInput("wedge_circles needs k >= 2");
    const double w = k == 2 ? std::numbers::pi / 2 : 0.8 * std::numbers::pi / k;
    std::vector<Vec2> v;
    for (int i = 0; i < k; ++i) {
        const double ci = 2.0 * std::numbers::pi * i / k;
        for (std::size_t s = 0; s < samples_per_petal; ++s) {
            const double th = ci - w + 2.0 * w * double(s) / double(samples_per_petal);
            const double rho = s == 0 ? 0.0 : R * std::cos(std::numbers::pi * (th - ci) / (2.0 * w));
            v.push_back(rho * Vec2{std::cos(th), std::sin(th)});
        }
    }
    return PolyCurve::cleaned(std::move(v), true);
}

inline PolyCurve segment(double len = 1.0, std::size_t pieces = 1) {
    std::vector<Vec2> v;
    for (std::size_t i = 0; i <= pieces; ++i) v.push_back({len * (double(i) / double(pieces) - 0.5), 0.0});
    return PolyCurve(std::move(v), false);
}

/// Lemniscate-like figure eight (x, y) = (sin 2s, sin s) with one double point.
inline PolyCurve figure_eight(std::size_t n = 512) {
    std::vector<Vec2> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = 2.0 * std::numbers::pi * (double(i) + 0.5) / double(n);
        v[i] = {std::sin(2 * s), std::sin(s)};
    }
    return PolyCurve(std::move(v));
}

/// Open Archimedean spiral whose consecutive arms are `gap` apart.
inline PolyCurve spiral(double gap = 0.1, double turns = 2.0, std::size_t n = 400) {
    std::vector<Vec2> outer;
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = turns * 2.0 * std::numbers::pi * double(i) / double(n);
        const double rad = 0.5 + gap * s / (2.0 * std::numbers::pi);
        outer.push_back(rad * Vec2{std::cos(s), std::sin(s)});
    }
    return PolyCurve(std::move(outer), false);
}

/// Applies deterministic radial jitter of relative size `amount`.
inline PolyCurve jitter(const PolyCurve& c, double amount, std::uint64_t seed) {
    if (amount == 0.0) return c;
    const CounterRng rng(seed);
    std::vector<Vec2> v = c.vertices();
    const double scale = amount * std::sqrt(std::max(std::abs(signed_area(c)), 1e-12));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = 2.0 * std::numbers::pi * rng.uniform(2 * i);
        const double m = scale * rng.uniform(2 * i + 1);
        v[i] = v[i] + m * Vec2{std::cos(a), std::sin(a)};
    }
    return PolyCurve(std::move(v), c.closed());
}

// ---- rasters ---------------------------------------------------------------

inline RasterSet circle_raster(double h, double radius = 1.0) { return raster_from_curves({circle(4096, radius)}, h); }

inline RasterSet koch_raster(int iter, double h) { return raster_from_curves({koch_prefix(iter)}, h); }

inline RasterSet segment_raster(double h, double len = 1.0) { return raster_from_curves({segment(len)}, h); }

inline RasterSet wedge_raster(int k, double h) { return raster_from_curves({wedge_circles(k, 2048)}, h); }

/// Closed annulus of radii [radius - width/2, radius + width/2].
inline RasterSet annulus_raster(double h, double radius = 1.0, double width = 0.1) {
    RasterSet k = raster_from_curves({circle(4096, radius)}, h);
    return thicken(k, width / 2.0);
}

inline RasterSet star_raster(double h) { return raster_from_curves({star(64)}, h); }

}  // namespace fixtures
// ---- registry -------------------------------------------------------------

using Fixture = std::variant<PolyCurve, RasterSet>;

inline const std::vector<std::string>& fixture_kinds() {
    static const std::vector<std::string> kinds{"circle", "ellipse", "star", "sawtooth", "koch_prefix", "comb",
                                                "wedge_circles", "segment", "figure_eight", "spiral", "annulus"};
    return kinds;
}

/// Builds a named fixture. Curve kinds are rasterized when `raster_spacing`
/// is given; "annulus" is always a raster. `jitter` perturbs curve vertices
/// deterministically from `seed`.
inline Fixture make_fixture(const std::string& kind, const nlohmann::json& p, std::uint64_t seed = 0) {
    auto num = [&](const char* key, double def) { return p.contains(key) ? p[key].get<double>() : def; };
    auto integer = [&](const char* key, long def) {
        if (!p.contains(key)) return def;
        const double v = p[key].get<double>();
        if (v != std::floor(v)) throw InvalidInput(std::string(key) + " must be an integer");
        return long(v);
    };
    const double spacing = num("raster_spacing", 0.0);
    if (kind == "annulus") {
        const double h = spacing > 0 ? spacing : 1.0 / 256;
        return fixtures::annulus_raster(h, num("radius", 1.0), num("width", 0.1));
    }
    PolyCurve c = [&]() -> PolyCurve {
        if (kind == "circle") return fixtures::circle(std::size_t(integer("n", 512)), num("radius", 1.0));
        if (kind == "ellipse") return fixtures::ellipse(num("a", 1.5), num("b", 0.75), std::size_t(integer("n", 512)));
        if (kind == "star") return fixtures::star(std::size_t(integer("per_side", 32)));
        if (kind == "sawtooth") return fixtures::sawtooth(int(integer("teeth", 8)), num("amp", 0.2), num("l", 4.0));
        if (kind == "koch_prefix") return fixtures::koch_prefix(int(integer("iter", 3)), num("side", 1.0));
        if (kind == "comb") return fixtures::comb(int(integer("k", 4)), num("r", 0.25));
        if (kind == "wedge_circles") return fixtures::wedge_circles(int(integer("k", 2)), std::size_t(integer("n", 256)));
        if (kind == "segment") return fixtures::segment(num("len", 1.0), std::size_t(integer("pieces", 1)));
        if (kind == "figure_eight") return fixtures::figure_eight(std::size_t(integer("n", 512)));
        if (kind == "spiral") return fixtures::spiral(num("gap", 0.1), num("turns", 2.0));
        throw InvalidInput("unknown fixture kind: " + kind);
    }();
    c = fixtures::jitter(c, num("jitter", 0.0), seed);
    if (spacing > 0) return raster_from_curves({c}, spacing);
    return c;
}

}  // namespace curveflow
