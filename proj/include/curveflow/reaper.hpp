#pragma once

// Grim reaper translating solutions
//   u(s, t) = (log(sec(c s)) / c + c t - a, s - b),  |c s| < pi / 2,
// the constants that make them barriers around a box, and the straightening
// experiment for graphs that are flat outside a box.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "curveflow/error.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/geometry.hpp"

namespace curveflow {

enum class ReaperOrientation { positive_x, negative_x };
enum class ReaperReflection { none, x_axis };

struct ReaperParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    ReaperOrientation orientation = ReaperOrientation::positive_x;
    ReaperReflection reflection = ReaperReflection::none;

    ReaperParams() = default;
    ReaperParams(double a_, double b_, double c_,
                 ReaperOrientation o = ReaperOrientation::positive_x,
                 ReaperReflection f = ReaperReflection::none)
        : a(a_), b(b_), c(c_), orientation(o), reflection(f) {
        if (!(c > 0.0)) throw InvalidInput("reaper speed c must be positive");
    }

    // Half-width of the parameter domain, pi / (2c).
    double half_domain() const { return std::numbers::pi / (2.0 * c); }

    // Applies orientation and reflection to a vector in the canonical frame.
    Vec2 place(Vec2 v) const {
        if (orientation == ReaperOrientation::negative_x) v.x = -v.x;
        if (reflection == ReaperReflection::x_axis) v.y = -v.y;
        return v;
    }
};

/// Point of the grim reaper at parameter s and time t.
inline Vec2 reaper_eval(const ReaperParams& p, double s, double t) {
    if (!(std::abs(p.c * s) < std::numbers::pi / 2.0)) throw DomainError("|c s| >= pi/2");
    const double x = std::log(1.0 / std::cos(p.c * s)) / p.c + p.c * t - p.a;
    return p.place({x, s - p.b});
}

/// Constants (a, b, c) for box radius r and slope bound alpha:
///   c = (pi/2 - atan(1/alpha)) / (3 r),  b = pi/(2c) - 2r,
///   a = r + log(sec(c (b + r))) / c.
inline ReaperParams reaper_constants(double r, double alpha) {
    if (!(r > 0.0) || !(alpha > 0.0)) throw InvalidInput("r and alpha must be positive");
    const double c = (std::numbers::pi / 2.0 - std::atan(1.0 / alpha)) / (3.0 * r);
    const double b = std::numbers::pi / (2.0 * c) - 2.0 * r;
    const double a = r + std::log(1.0 / std::cos(c * (b + r))) / c;
    return ReaperParams(a, b, c);
}

/// Time for the reaper built from (r, alpha) to sweep past [0, l] x [-r, r].
inline double straightening_time(double r, double l, double alpha) {
    if (!(l > 0.0)) throw InvalidInput("l must be positive");
    const auto p = reaper_constants(r, alpha);
    return (l + p.a) / p.c;
}

struct ReaperGuarantees {
    double point_error = 0.0;    // distance of (-r, r) from u(., 0)
    bool box_in_hull = false;    // closed box [-r, r]^2 inside the convex side of u(., 0)
    double max_slope = 0.0;      // max tangent slope where s - b >= -r
    double hull_margin = 0.0;    // min over box corners of x - x_reaper(y)
};

/// Numerical check of the three constructive properties of reaper_constants.
inline ReaperGuarantees check_reaper_guarantees(const ReaperParams& p, double r, double alpha,
                                                std::size_t slope_samples = 4096) {
    (void)alpha;
    ReaperGuarantees g;
    // y = s - b, so the point with y = r has s = b + r.
    const Vec2 q = reaper_eval(p, p.b + r, 0.0);
    g.point_error = distance(q, Vec2{-r, r});

    // The convex side is {x >= x_reaper(y)} for y in the open asymptote band.
    const double y_lo = -p.half_domain() - p.b, y_hi = p.half_domain() - p.b;
    g.hull_margin = std::numeric_limits<double>::infinity();
    g.box_in_hull = true;
    for (double x : {-r, r})
        for (double y : {-r, r}) {
            if (!(y > y_lo && y < y_hi)) { g.box_in_hull = false; continue; }
            const double xr = reaper_eval(p, y + p.b, 0.0).x;
            g.hull_margin = std::min(g.hull_margin, x - xr);
        }
    if (g.hull_margin < -1e-8) g.box_in_hull = false;

    // Slope of the tangent at parameter s is 1 / tan(c s).
    const double s0 = p.b - r, s1 = p.half_domain();
    for (std::size_t k = 0; k < slope_samples; ++k) {
        const double s = s0 + (s1 - s0) * double(k) / double(slope_samples);
        if (!(p.c * s > 0.0)) { g.max_slope = std::numeric_limits<double>::infinity(); break; }
        g.max_slope = std::max(g.max_slope, 1.0 / std::tan(p.c * s));
    }
    return g;
}

/// Max over samples of |normal part of the velocity - curvature vector|,
/// both from the closed form.
inline double translating_residual(const ReaperParams& p, std::size_t n_samples) {
    if (n_samples < 8) throw InvalidInput("need at least 8 samples");
    double worst = 0.0;
    const double h = p.half_domain();
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double s = -h + 2.0 * h * (double(k) + 0.5) / double(n_samples);
        const double cs = p.c * s;
        // Canonical-frame derivatives in s.
        const Vec2 d1 = p.place({std::tan(cs), 1.0});
        const Vec2 d2 = p.place({p.c / (std::cos(cs) * std::cos(cs)), 0.0});
        const Vec2 velocity = p.place({p.c, 0.0});
        const double speed2 = norm2(d1);
        const Vec2 tangent = d1 / std::sqrt(speed2);
        const Vec2 kappa = (d2 - dot(d2, tangent) * tangent) / speed2;
        const Vec2 normal_velocity = velocity - dot(velocity, tangent) * tangent;
        worst = std::max(worst, norm(normal_velocity - kappa));
    }
    return worst;
}

/// Polyline sampling of u(., t) at uniform parameters covering the fraction
/// `extent` of the parameter domain.
inline PolyCurve reaper_polyline(const ReaperParams& p, double t, std::size_t samples, double extent = 0.9) {
    if (samples < 3) throw InvalidInput("need at least 3 samples");
    std::vector<Vec2> v(samples);
    const double h = extent * p.half_domain();
    for (std::size_t k = 0; k < samples; ++k) v[k] = reaper_eval(p, -h + 2.0 * h * double(k) / double(samples - 1), t);
    return PolyCurve(std::move(v), false);
}

/// Same residual computed from the discrete circumcircle curvature of a
/// polyline sampling; interior vertices only.
inline double discrete_translating_residual(const ReaperParams& p, std::size_t samples, double extent = 0.9) {
    const auto poly = reaper_polyline(p, 0.0, samples, extent);
    const auto k = curvature_vectors(poly);
    const Vec2 velocity = p.place({p.c, 0.0});
    double worst = 0.0;
    const auto& v = poly.vertices();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const Vec2 tangent = (v[i + 1] - v[i - 1]) / norm(v[i + 1] - v[i - 1]);
        const Vec2 normal_velocity = velocity - dot(velocity, tangent) * tangent;
        worst = std::max(worst, norm(normal_velocity - k[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------

struct StraighteningOptions {
    std::size_t intervals_per_l = 400;  // grid resolution on [0, l]
    double cfl = 0.4;
    double slope_tolerance = 0.05;      // pass iff max slope <= alpha (1 + tol)
    double domain_factor = 1.0;         // truncated domain [-f l, 2 f l]
    std::size_t checkpoints = 400;      // slope samples used for first_pass_time
    // Translates u_lambda checked for single crossings at each checkpoint.
    std::vector<double> barrier_shifts{0.0};
};

struct StraighteningReport {
    double r = 0.0, l = 0.0, alpha = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;
    double T = 0.0;
    double max_slope_at_T = 0.0;
    double first_pass_time = -1.0;  // earliest checkpoint with slope <= alpha; -1 if none
    bool passed = false;
    // Barrier bookkeeping: checks performed and those not crossing exactly once.
    std::size_t barrier_checks = 0;
    std::size_t barrier_violations = 0;
    GraphState final_state;
};

/// Heights of an x-monotone open polyline at x (zero outside its range).
inline double polyline_height(const PolyCurve& c, double x) {
    const auto& v = c.vertices();
    if (x <= v.front().x || x >= v.back().x) return 0.0;
    auto it = std::upper_bound(v.begin(), v.end(), x, [](double xv, const Vec2& p) { return xv < p.x; });
    const Vec2 b = *it, a = *(it - 1);
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

/// Graph-flow realization of the straightening lemma: evolve a graph that is
/// flat outside [0, l] x [-r, r] on the truncated domain [-l, 2l] with pinned
/// ends, and measure the slope over [0, l] at T(r, l, alpha).
inline StraighteningReport straightening_experiment(double r, double l, double alpha, const PolyCurve& perturbation,
                                                    const StraighteningOptions& opt = {}) {
    if (!(r > 0.0 && l > 0.0 && alpha > 0.0)) throw InvalidInput("r, l, alpha must be positive");
    if (perturbation.closed()) throw InvalidInput("perturbation must be an open polyline");
    const double tol = 1e-12 * std::max(1.0, l);
    const auto& v = perturbation.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0 && !(v[i].x > v[i - 1].x)) throw InvalidInput("perturbation must be a graph over the x-axis");
        const bool flat = std::abs(v[i].y) <= tol;
        const bool in_box = v[i].x >= -tol && v[i].x <= l + tol && std::abs(v[i].y) <= r + tol;
        if (!flat && !in_box) throw InvalidInput("perturbation escapes the box [0, l] x [-r, r]");
    }

    StraighteningReport rep;
    rep.r = r; rep.l = l; rep.alpha = alpha;
    const auto params = reaper_constants(r, alpha);
    rep.a = params.a; rep.b = params.b; rep.c = params.c;
    rep.T = (l + params.a) / params.c;

    const double x0 = -opt.domain_factor * l, x1 = 2.0 * opt.domain_factor * l;
    const double dx = l / double(opt.intervals_per_l);
    const auto intervals = static_cast<std::size_t>(std::llround((x1 - x0) / dx));
    GraphState g = GraphState::sampled(x0, x1, intervals, [&](double x) { return polyline_height(perturbation, x); });

    const double dt = opt.cfl * g.dx * g.dx;
    std::vector<double> scratch;
    double t = 0.0;
    const double slope_bound = alpha;
    auto check_barriers = [&](double time) {
        const PolyCurve graph = g.to_polyline();
        for (double shift : opt.barrier_shifts) {
            // Only translates whose axis crossing lies inside the truncated domain.
            const double cross_x = std::log(1.0 / std::cos(params.c * params.b)) / params.c + params.c * time -
                                   params.a + shift;
            if (cross_x <= x0 + dx || cross_x >= x1 - dx) continue;
            ReaperParams moved = params;
            moved.a -= shift;
            std::vector<Vec2> pts;
            const double h = 0.999 * params.half_domain();
            for (std::size_t k = 0; k <= 4000; ++k) {
                const Vec2 p = reaper_eval(moved, -h + 2.0 * h * double(k) / 4000.0, time);
                if (p.x <= x1 + l) pts.push_back(p);
            }
            if (pts.size() < 2) continue;
            ++rep.barrier_checks;
            // The kept points form one arc around the vertex of the reaper.
            if (crossing_count(graph, PolyCurve::cleaned(std::move(pts), false)) != 1) ++rep.barrier_violations;
        }
    };

    check_barriers(0.0);
    if (g.max_slope(0.0, l) <= slope_bound) rep.first_pass_time = 0.0;
    for (std::size_t k = 1; k <= opt.checkpoints; ++k) {
        const double stop = rep.T * double(k) / double(opt.checkpoints);
        while (t < stop) {
            const double h = std::min(dt, stop - t);
            graph_step(g, h, scratch);
            t += h;
            if (stop - t < 1e-15 * std::max(1.0, stop)) t = stop;
        }
        check_barriers(t);
        if (rep.first_pass_time < 0.0 && g.max_slope(0.0, l) <= slope_bound) rep.first_pass_time = t;
    }
    rep.max_slope_at_T = g.max_slope(0.0, l);
    rep.passed = rep.max_slope_at_T <= alpha * (1.0 + opt.slope_tolerance);
    rep.final_state = std::move(g);
    return rep;
}

/// Max slope over [0, l] of the same flow stopped at an arbitrary time.
inline double straightening_slope_at(double l, const PolyCurve& perturbation, double time,
                                     const StraighteningOptions& opt = {}) {
    const double x0 = -opt.domain_factor * l, x1 = 2.0 * opt.domain_factor * l;
    const double dx = l / double(opt.intervals_per_l);
    const auto intervals = static_cast<std::size_t>(std::llround((x1 - x0) / dx));
    GraphState g = GraphState::sampled(x0, x1, intervals, [&](double x) { return polyline_height(perturbation, x); });
    g = graph_evolve(std::move(g), time, opt.cfl);
    return g.max_slope(0.0, l);
}

inline nlohmann::json report_to_json(const StraighteningReport& r) {
    return {{"r", r.r}, {"l", r.l}, {"alpha", r.alpha}, {"a", r.a}, {"b", r.b}, {"c", r.c}, {"T", r.T},
            {"max_slope_at_T", r.max_slope_at_T}, {"first_pass_time", r.first_pass_time}, {"passed", r.passed}};
}

}  // namespace curveflow
