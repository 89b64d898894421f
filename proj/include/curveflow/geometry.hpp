#pragma once

// Polygonal curves in the plane and the predicates the rest of the library
// is built on: metrics, crossing counts, graph tests, resampling and
// curve-to-curve distances.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/error.hpp"

namespace curveflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 rotate(Vec2 p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Closed (or open) oriented polygonal curve.
///
/// The vertex list is the discrete parametrization: vertex i is joined to
/// vertex i+1, and for closed curves the last vertex is joined to the first.
class PolyCurve {
public:
    PolyCurve() = default;

    PolyCurve(std::vector<Vec2> vertices, bool closed = true)
        : vertices_(std::move(vertices)), closed_(closed) {
        validate();
    }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool closed() const { return closed_; }
    const Vec2& operator[](std::size_t i) const { return vertices_[i]; }

    std::size_t edge_count() const {
        return closed_ ? vertices_.size() : vertices_.size() - 1;
    }
    std::pair<Vec2, Vec2> edge(std::size_t i) const {
        return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
    }
    double edge_length(std::size_t i) const {
        auto [a, b] = edge(i);
        return distance(a, b);
    }

    /// Tolerance used by every predicate on this curve: 1e-12 times the
    /// bounding-box diagonal.
    double eps() const {
        Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
        Vec2 hi = -lo;
        for (const auto& p : vertices_) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
        return 1e-12 * std::max(norm(hi - lo), 1e-300);
    }

    /// Sign of the shoelace area: +1 counter-clockwise, -1 clockwise, 0 open.
    int orientation() const;

    PolyCurve reversed() const {
        std::vector<Vec2> v(vertices_.rbegin(), vertices_.rend());
        return PolyCurve(std::move(v), closed_);
    }

    template <class F>
    PolyCurve transformed(F&& f) const {
        std::vector<Vec2> v;
        v.reserve(vertices_.size());
        for (const auto& p : vertices_) v.push_back(f(p));
        return PolyCurve(std::move(v), closed_);
    }

    /// Drops consecutive duplicates (within eps) instead of rejecting them.
    static PolyCurve cleaned(std::vector<Vec2> vertices, bool closed = true) {
        std::vector<Vec2> out;
        out.reserve(vertices.size());
        double scale = 0.0;
        for (const auto& p : vertices) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
        const double tol = 1e-12 * std::max(scale, 1e-300);
        for (const auto& p : vertices)
            if (out.empty() || distance(out.back(), p) > tol) out.push_back(p);
        if (closed)
            while (out.size() > 1 && distance(out.front(), out.back()) <= tol) out.pop_back();
        return PolyCurve(std::move(out), closed);
    }

private:
    void validate() const {
        if (closed_ && vertices_.size() < 3)
            throw InvalidInput("closed curve needs at least 3 vertices");
        if (!closed_ && vertices_.size() < 2)
            throw InvalidInput("open curve needs at least 2 vertices");
        for (const auto& p : vertices_)
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw InvalidInput("non-finite vertex");
        const double tol = eps();
        for (std::size_t i = 0; i < edge_count(); ++i)
            if (edge_length(i) <= tol)
                throw InvalidInput("zero-length edge at vertex " + std::to_string(i));
    }

    std::vector<Vec2> vertices_;
    bool closed_ = true;
};

/// Oriented line: unit direction and signed offset along the left normal.
/// Points p on the line satisfy dot(normal(), p) == offset.
struct Line {
    Vec2 direction{1.0, 0.0};
    double offset = 0.0;

    Line() = default;
    Line(Vec2 dir, double off) : direction(dir), offset(off) {
        const double n = norm(dir);
        if (!(n > 0.0)) throw InvalidInput("line direction must be nonzero");
        direction = dir / n;
    }
    static Line through(Vec2 point, Vec2 dir) {
        Line l(dir, 0.0);
        l.offset = dot(l.normal(), point);
        return l;
    }
    static Line at_angle(double angle, double off) {
        return Line({std::cos(angle), std::sin(angle)}, off);
    }
    static Line horizontal(double y) { return Line({1.0, 0.0}, y); }

    Vec2 normal() const { return perp(direction); }
    double signed_distance(Vec2 p) const { return dot(normal(), p) - offset; }
    double coordinate(Vec2 p) const { return dot(direction, p); }
};

struct Strip {
    Line line;
    double radius = 1.0;

    Strip(Line l, double r) : line(l), radius(r) {
        if (!(r > 0.0)) throw InvalidInput("strip radius must be positive");
    }
    bool contains(Vec2 p) const { return std::abs(line.signed_distance(p)) < radius; }
};

// ---------------------------------------------------------------------------
// Metrics

inline double length(const PolyCurve& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.edge_count(); ++i) s += c.edge_length(i);
    return s;
}

inline double signed_area(const PolyCurve& c) {
    if (!c.closed()) return 0.0;
    const auto& v = c.vertices();
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
    return 0.5 * s;
}

inline int PolyCurve::orientation() const {
    const double a = signed_area(*this);
    return a > 0.0 ? 1 : (a < 0.0 ? -1 : 0);
}

/// Convex hull, counter-clockwise, without collinear points.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(),
              [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Max pairwise distance of a point set (rotating calipers on the hull).
inline double diameter(std::span<const Vec2> pts) {
    auto hull = convex_hull(std::vector<Vec2>(pts.begin(), pts.end()));
    const std::size_t h = hull.size();
    if (h == 1) return 0.0;
    if (h == 2) return distance(hull[0], hull[1]);
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < h; ++i) {
        const Vec2 e = hull[(i + 1) % h] - hull[i];
        while (cross(e, hull[(j + 1) % h] - hull[i]) > cross(e, hull[j] - hull[i])) j = (j + 1) % h;
        best = std::max({best, distance(hull[i], hull[j]), distance(hull[(i + 1) % h], hull[j])});
    }
    return best;
}

inline double diameter(const PolyCurve& c) { return diameter(std::span<const Vec2>(c.vertices())); }

struct CurveMetrics {
    double length = 0.0;
    double signed_area = 0.0;
    double diameter = 0.0;
    // L^2 / (4 pi |A|); NaN when the area vanishes.
    double isoperimetric_ratio = std::numeric_limits<double>::quiet_NaN();
};

inline CurveMetrics metrics(const PolyCurve& c) {
    if (c.closed() && c.size() < 3) throw InvalidInput("degenerate curve");
    CurveMetrics m;
    m.length = length(c);
    m.signed_area = signed_area(c);
    m.diameter = diameter(c);
    if (m.signed_area != 0.0)
        m.isoperimetric_ratio = m.length * m.length / (4.0 * std::numbers::pi * std::abs(m.signed_area));
    return m;
}

// ---------------------------------------------------------------------------
// Segment predicates

namespace detail {

inline int orient(Vec2 a, Vec2 b, Vec2 c, double tol) {
    const double v = cross(b - a, c - a);
    const double scale = norm(b - a) * norm(c - a);
    if (std::abs(v) <= tol * std::max(scale, 1e-300)) return 0;
    return v > 0.0 ? 1 : -1;
}

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

enum class SegmentRelation { disjoint, cross, overlap };

// Relation of closed segments [a0,a1] and [b0,b1]. Collinear segments that
// share more than a point are reported as overlap.
inline SegmentRelation segment_relation(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double tol = 1e-12) {
    const int o1 = orient(a0, a1, b0, tol), o2 = orient(a0, a1, b1, tol);
    const int o3 = orient(b0, b1, a0, tol), o4 = orient(b0, b1, a1, tol);
    if (o1 == 0 && o2 == 0) {
        // Collinear: compare projections on the longer direction.
        const Vec2 d = a1 - a0;
        const double t0 = dot(b0 - a0, d), t1 = dot(b1 - a0, d), len = dot(d, d);
        const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(len, std::max(t0, t1));
        if (hi - lo > tol * len) return SegmentRelation::overlap;
        if (hi - lo >= -tol * len) return SegmentRelation::cross;
        return SegmentRelation::disjoint;
    }
    if (o1 != o2 && o3 != o4) return SegmentRelation::cross;
    if (o1 == 0 && on_segment(a0, a1, b0)) return SegmentRelation::cross;
    if (o2 == 0 && on_segment(a0, a1, b1)) return SegmentRelation::cross;
    if (o3 == 0 && on_segment(b0, b1, a0)) return SegmentRelation::cross;
    if (o4 == 0 && on_segment(b0, b1, a1)) return SegmentRelation::cross;
    return SegmentRelation::disjoint;
}

// Intersection point of two segments known to cross (non-parallel).
inline Vec2 crossing_point(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    const Vec2 r = a1 - a0, s = b1 - b0;
    const double den = cross(r, s);
    if (den == 0.0) {
        // Collinear segments touching at a single point: that point is an endpoint.
        for (Vec2 p : {b0, b1})
            if (on_segment(a0, a1, p)) return p;
        return a0;
    }
    const double t = cross(b0 - a0, s) / den;
    return a0 + t * r;
}

struct Box {
    double x0, y0, x1, y1;
    bool overlaps(const Box& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
};

inline Box edge_box(Vec2 a, Vec2 b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

// Calls f(i, j) for every pair of edges (edge i of a, edge j of b) whose
// bounding boxes overlap. Sweep over x to skip far-apart pairs.
template <class F>
void for_each_box_pair(const PolyCurve& a, const PolyCurve& b, F&& f) {
    struct Item { Box box; std::size_t index; bool first; };
    std::vector<Item> items;
    items.reserve(a.edge_count() + b.edge_count());
    for (std::size_t i = 0; i < a.edge_count(); ++i) {
        auto [p, q] = a.edge(i);
        items.push_back({edge_box(p, q), i, true});
    }
    for (std::size_t j = 0; j < b.edge_count(); ++j) {
        auto [p, q] = b.edge(j);
        items.push_back({edge_box(p, q), j, false});
    }
    std::sort(items.begin(), items.end(), [](const Item& u, const Item& v) {
        return u.box.x0 < v.box.x0 || (u.box.x0 == v.box.x0 && u.index < v.index);
    });
    std::vector<const Item*> active;
    for (const auto& it : items) {
        std::erase_if(active, [&](const Item* o) { return o->box.x1 < it.box.x0; });
        for (const Item* o : active) {
            if (o->first == it.first || !o->box.overlaps(it.box)) continue;
            if (it.first) f(it.index, o->index);
            else f(o->index, it.index);
        }
        active.push_back(&it);
    }
}

// Same, for pairs of distinct edges within one curve (i < j).
template <class F>
void for_each_box_pair_self(const PolyCurve& c, F&& f) {
    struct Item { Box box; std::size_t index; };
    std::vector<Item> items;
    items.reserve(c.edge_count());
    for (std::size_t i = 0; i < c.edge_count(); ++i) {
        auto [p, q] = c.edge(i);
        items.push_back({edge_box(p, q), i});
    }
    std::sort(items.begin(), items.end(), [](const Item& u, const Item& v) {
        return u.box.x0 < v.box.x0 || (u.box.x0 == v.box.x0 && u.index < v.index);
    });
    std::vector<const Item*> active;
    for (const auto& it : items) {
        std::erase_if(active, [&](const Item* o) { return o->box.x1 < it.box.x0; });
        for (const Item* o : active)
            if (o->box.overlaps(it.box)) f(std::min(o->index, it.index), std::max(o->index, it.index));
        active.push_back(&it);
    }
}

}  // namespace detail

/// Number of parameter points whose image is shared with another parameter
/// point. Each transverse double point contributes 2.
///
/// Edges are treated as half-open [start, end) so a crossing through a
/// vertex is counted once. Collinear overlapping edges are rejected.
inline std::size_t self_intersection_number(const PolyCurve& c) {
    const std::size_t m = c.edge_count();
    const double tol = 1e-12;
    std::size_t doubles = 0;
    detail::for_each_box_pair_self(c, [&](std::size_t i, std::size_t j) {
        auto [a0, a1] = c.edge(i);
        auto [b0, b1] = c.edge(j);
        const bool adjacent_fwd = (j == i + 1);
        const bool adjacent_wrap = c.closed() && i == 0 && j == m - 1;
        const auto rel = detail::segment_relation(a0, a1, b0, b1, tol);
        if (rel == detail::SegmentRelation::overlap)
            throw DegenerateConfiguration("collinear overlapping edges " + std::to_string(i) + ", " +
                                          std::to_string(j));
        if (rel != detail::SegmentRelation::cross) return;
        // Adjacent edges that are not overlapping meet only at their shared vertex.
        if (adjacent_fwd || adjacent_wrap) return;
        const Vec2 x = detail::crossing_point(a0, a1, b0, b1);
        // Half-open convention: drop hits at an edge's end vertex.
        const double ta = dot(x - a0, a1 - a0) / norm2(a1 - a0);
        const double tb = dot(x - b0, b1 - b0) / norm2(b1 - b0);
        const double etol = 1e-12;
        if (ta >= 1.0 - etol && (c.closed() || i + 1 < m)) return;
        if (tb >= 1.0 - etol && (c.closed() || j + 1 < m)) return;
        ++doubles;
    });
    return 2 * doubles;
}

/// Number of crossings between two distinct curves (half-open edges).
inline std::size_t crossing_count(const PolyCurve& a, const PolyCurve& b) {
    std::size_t count = 0;
    detail::for_each_box_pair(a, b, [&](std::size_t i, std::size_t j) {
        auto [a0, a1] = a.edge(i);
        auto [b0, b1] = b.edge(j);
        const auto rel = detail::segment_relation(a0, a1, b0, b1);
        if (rel == detail::SegmentRelation::disjoint) return;
        if (rel == detail::SegmentRelation::overlap) { ++count; return; }
        const Vec2 x = detail::crossing_point(a0, a1, b0, b1);
        const double ta = dot(x - a0, a1 - a0) / norm2(a1 - a0);
        const double tb = dot(x - b0, b1 - b0) / norm2(b1 - b0);
        if (ta >= 1.0 - 1e-12 && (a.closed() || i + 1 < a.edge_count())) return;
        if (tb >= 1.0 - 1e-12 && (b.closed() || j + 1 < b.edge_count())) return;
        ++count;
    });
    return count;
}

inline bool curves_intersect(const PolyCurve& a, const PolyCurve& b) { return crossing_count(a, b) > 0; }

/// Number of transverse crossings of `line` by the curve.
///
/// A vertex lying on the line (within the curve tolerance) triggers a
/// deterministic offset perturbation by +eps; after `max_perturbations`
/// attempts the configuration is declared degenerate.
inline std::size_t curve_line_intersections(const PolyCurve& c, Line line, int max_perturbations = 8) {
    const double eps = c.eps();
    for (int attempt = 0; attempt <= max_perturbations; ++attempt) {
        bool degenerate = false;
        std::vector<double> d(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            d[i] = line.signed_distance(c[i]);
            if (std::abs(d[i]) <= eps) degenerate = true;
        }
        if (degenerate) {
            line.offset += eps * double(1 << attempt);
            continue;
        }
        std::size_t count = 0;
        for (std::size_t i = 0; i < c.edge_count(); ++i)
            if ((d[i] < 0.0) != (d[(i + 1) % c.size()] < 0.0)) ++count;
        return count;
    }
    throw DegenerateConfiguration("vertex on line after perturbation budget");
}

/// Crossing-number point-in-polygon test for closed curves.
inline bool point_in_polygon(const PolyCurve& c, Vec2 p) {
    bool inside = false;
    const auto& v = c.vertices();
    for (std::size_t i = 0, n = v.size(), j = n - 1; i < n; j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

/// Point inside (or on) a counter-clockwise convex polygon, with slack.
inline bool point_in_convex(std::span<const Vec2> hull, Vec2 p, double slack = 0.0) {
    const std::size_t h = hull.size();
    for (std::size_t i = 0; i < h; ++i) {
        const Vec2 e = hull[(i + 1) % h] - hull[i];
        if (cross(e, p - hull[i]) < -slack * norm(e)) return false;
    }
    return true;
}

struct GraphCheck {
    bool is_graph = false;
    double max_slope = 0.0;
};

/// Whether the curve is an alpha-Lipschitz graph over `line`: projection onto
/// the line strictly monotone and every edge slope at most alpha.
inline GraphCheck lipschitz_graph_check(const PolyCurve& c, const Line& line, double alpha) {
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
    GraphCheck g;
    int direction = 0;
    bool monotone = true;
    for (std::size_t i = 0; i < c.edge_count(); ++i) {
        auto [a, b] = c.edge(i);
        const double du = line.coordinate(b) - line.coordinate(a);
        const double dv = line.signed_distance(b) - line.signed_distance(a);
        const int sgn = du > 0.0 ? 1 : (du < 0.0 ? -1 : 0);
        if (sgn == 0 || (direction != 0 && sgn != direction)) monotone = false;
        if (direction == 0) direction = sgn;
        const double slope = du == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(dv / du);
        g.max_slope = std::max(g.max_slope, slope);
    }
    g.is_graph = monotone && !c.closed() && g.max_slope <= alpha;
    return g;
}

// ---------------------------------------------------------------------------
// Arclength parametrization

/// Cumulative arclength table for evaluating a curve at a normalized
/// parameter in [0, 1).
class ArclengthTable {
public:
    explicit ArclengthTable(const PolyCurve& c) : curve_(&c) {
        cumulative_.resize(c.edge_count() + 1, 0.0);
        for (std::size_t i = 0; i < c.edge_count(); ++i)
            cumulative_[i + 1] = cumulative_[i] + c.edge_length(i);
    }
    double total() const { return cumulative_.back(); }
    // Normalized parameter of vertex i.
    double vertex_parameter(std::size_t i) const { return cumulative_[i] / total(); }

    Vec2 at(double sigma) const {
        if (curve_->closed()) sigma -= std::floor(sigma);
        else sigma = std::clamp(sigma, 0.0, 1.0);
        const double s = sigma * total();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
        std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0),
                                              curve_->edge_count() - 1);
        auto [a, b] = curve_->edge(i);
        const double len = cumulative_[i + 1] - cumulative_[i];
        const double t = len > 0.0 ? std::clamp((s - cumulative_[i]) / len, 0.0, 1.0) : 0.0;
        return a + t * (b - a);
    }

private:
    const PolyCurve* curve_;
    std::vector<double> cumulative_;
};

/// Uniform-arclength resampling to edges of about `target_edge`. Output
/// vertices lie on the input polygon and start at its vertex 0.
inline PolyCurve resample(const PolyCurve& c, double target_edge) {
    if (!(target_edge > 0.0)) throw InvalidInput("target_edge must be positive");
    const double L = length(c);
    if (target_edge > L / 3.0) throw InvalidInput("target_edge larger than length/3");
    const auto edges = std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(L / target_edge)));
    ArclengthTable table(c);
    std::vector<Vec2> out;
    const std::size_t count = c.closed() ? edges : edges + 1;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(table.at(double(k) / double(edges)));
    if (!c.closed()) out.back() = c.vertices().back();
    return PolyCurve::cleaned(std::move(out), c.closed());
}

// ---------------------------------------------------------------------------
// Distances

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double l2 = norm2(d);
    const double t = l2 > 0.0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
    return distance(p, a + t * d);
}

inline double point_curve_distance(Vec2 p, const PolyCurve& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.edge_count(); ++i) {
        auto [a, b] = c.edge(i);
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return best;
}

struct CurveDistances {
    double hausdorff = 0.0;
    double matched_sup = 0.0;
};

struct DistanceOptions {
    // Discretized start offsets of the cyclic alignment search.
    std::size_t alignment_offsets = 256;
    // Uniform arclength samples added to the vertex samples of each curve.
    std::size_t uniform_samples = 512;
};

namespace detail {

inline std::vector<double> sample_parameters(const PolyCurve& c, const ArclengthTable& t, std::size_t uniform) {
    std::vector<double> s;
    s.reserve(c.size() + uniform);
    for (std::size_t i = 0; i < c.size(); ++i) s.push_back(t.vertex_parameter(i));
    for (std::size_t k = 0; k < uniform; ++k) s.push_back(double(k) / double(uniform));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace detail

/// Symmetric Hausdorff distance and the sup distance after the best cyclic
/// arclength-proportional alignment (both orientations).
///
/// Both quantities use the same sample sets, so matched_sup >= hausdorff
/// holds exactly.
inline CurveDistances distances(const PolyCurve& a, const PolyCurve& b, DistanceOptions opt = {}) {
    if (!a.closed() || !b.closed()) throw InvalidInput("distances requires closed curves");
    const ArclengthTable ta(a), tb(b);
    const auto sa = detail::sample_parameters(a, ta, opt.uniform_samples);
    const auto sb = detail::sample_parameters(b, tb, opt.uniform_samples);
    std::vector<Vec2> pa, pb;
    pa.reserve(sa.size());
    pb.reserve(sb.size());
    for (double s : sa) pa.push_back(ta.at(s));
    for (double s : sb) pb.push_back(tb.at(s));

    CurveDistances out;
    for (const auto& p : pa) out.hausdorff = std::max(out.hausdorff, point_curve_distance(p, b));
    for (const auto& p : pb) out.hausdorff = std::max(out.hausdorff, point_curve_distance(p, a));

    // Alignment sigma_b = offset + orient * sigma_a.
    auto sup_at = [&](double offset, int orient) {
        double worst = 0.0;
        for (std::size_t i = 0; i < sa.size(); ++i)
            worst = std::max(worst, distance(pa[i], tb.at(offset + orient * sa[i])));
        for (std::size_t j = 0; j < sb.size(); ++j)
            worst = std::max(worst, distance(ta.at(orient * (sb[j] - offset)), pb[j]));
        return worst;
    };

    const std::size_t n = std::max<std::size_t>(1, opt.alignment_offsets);
    double best = std::numeric_limits<double>::infinity();
    for (int orient : {1, -1}) {
        std::vector<double> coarse(n);
        for (std::size_t k = 0; k < n; ++k) coarse[k] = sup_at(double(k) / double(n), orient);
        // Refine around the best few coarse offsets by golden-section search.
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        const std::size_t keep = std::min<std::size_t>(3, n);
        std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                          [&](std::size_t x, std::size_t y) { return coarse[x] < coarse[y]; });
        for (std::size_t r = 0; r < keep; ++r) {
            const double center = double(order[r]) / double(n), half = 1.0 / double(n);
            double lo = center - half, hi = center + half;
            const double g = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = sup_at(x1, orient), f2 = sup_at(x2, orient);
            for (int it = 0; it < 30; ++it) {
                if (f1 < f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = sup_at(x1, orient); }
                else { lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = sup_at(x2, orient); }
            }
            best = std::min({best, coarse[order[r]], f1, f2});
        }
    }
    out.matched_sup = best;
    return out;
}

}  // namespace curveflow
