#pragma once

// Explicit curve shortening flow for closed polygons and for graphs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/error.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/multiplicity.hpp"

namespace curveflow {

/// Curvature vector at every vertex from the circle through the vertex and
/// its two neighbours: magnitude 1/R, pointing at the center. Collinear
/// triples and the endpoints of open curves get the zero vector.
inline std::vector<Vec2> curvature_vectors(const PolyCurve& c) {
    const auto& v = c.vertices();
    const std::size_t n = v.size();
    std::vector<Vec2> k(n, Vec2{});
    const std::size_t first = c.closed() ? 0 : 1;
    const std::size_t last = c.closed() ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
        const Vec2 a = v[(i + n - 1) % n] - v[i];
        const Vec2 b = v[(i + 1) % n] - v[i];
        const double la = norm2(a), lb = norm2(b);
        if (la == 0.0 || lb == 0.0) throw InvalidInput("zero-length edge");
        const double d = 2.0 * cross(a, b);
        if (std::abs(d) <= 1e-14 * std::sqrt(la * lb)) continue;
        // Circumcenter relative to v[i].
        const Vec2 center{(b.y * la - a.y * lb) / d, (a.x * lb - b.x * la) / d};
        k[i] = center / norm2(center);
    }
    return k;
}

/// Dual (Voronoi) length of each vertex: half the adjacent edge lengths.
inline std::vector<double> dual_lengths(const PolyCurve& c) {
    const std::size_t n = c.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
        const double l = 0.5 * c.edge_length(e);
        w[e] += l;
        w[(e + 1) % n] += l;
    }
    return w;
}

/// Integral of |kappa|^2 ds with vertex curvatures and dual lengths.
inline double kappa_squared_integral(const PolyCurve& c) {
    const auto k = curvature_vectors(c);
    const auto w = dual_lengths(c);
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) s += norm2(k[i]) * w[i];
    return s;
}

struct StripProbe {
    Line line;
    double r = 1.0;
};

struct FlowConfig {
    double target_edge = 2.0 * 3.14159265358979323846 / 512.0;
    double cfl = 0.25;
    double t_end = 1.0;
    std::vector<Line> metric_lines;
    std::vector<StripProbe> strip_probes;
    double extinction_length = 1e-2;
    std::size_t max_steps = 50'000'000;
    // Record metrics every k accepted steps plus the final step.
    std::size_t record_every = 16;
    // When non-empty, record exactly at these times instead (steps are
    // clipped to land on them).
    std::vector<double> sample_times;
    // Keep a curve snapshot with each sample (the final curve is always kept).
    bool keep_curves = true;
    // Resampling never drops below this many edges.
    std::size_t min_edges = 32;

    void validate() const {
        if (!(cfl > 0.0 && cfl <= 0.5)) throw InvalidInput("cfl must be in (0, 0.5]");
        if (!(target_edge > 0.0)) throw InvalidInput("target_edge must be positive");
        if (!(t_end > 0.0)) throw InvalidInput("t_end must be positive");
        if (!(extinction_length > 0.0)) throw InvalidInput("extinction_length must be positive");
        if (max_steps == 0 || record_every == 0) throw InvalidInput("step counts must be positive");
        for (const auto& p : strip_probes)
            if (!(p.r > 0.0)) throw InvalidInput("strip probe radius must be positive");
    }
};

enum class FlowStatus { running, extinct, step_limit, singular };

inline const char* to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::running: return "running";
        case FlowStatus::extinct: return "extinct";
        case FlowStatus::step_limit: return "step_limit";
        case FlowStatus::singular: return "singular";
    }
    return "?";
}

struct SampleMetrics {
    double length = 0.0;
    double area = 0.0;
    double max_abs_curvature = 0.0;
    double kappa_sq_integral = 0.0;  // instantaneous integral of kappa^2 ds
    double kappa_sq_cum = 0.0;       // accumulated double integral up to this sample
    std::vector<std::size_t> line_counts;
    std::vector<std::size_t> strip_counts;
};

struct FlowSample {
    double t = 0.0;
    std::optional<PolyCurve> curve;
    SampleMetrics metrics;
};

struct FlowTrajectory {
    std::vector<FlowSample> samples;
    FlowStatus status = FlowStatus::running;
    std::size_t steps = 0;
    std::size_t resample_events = 0;

    const PolyCurve& final_curve() const { return *samples.back().curve; }
    double final_time() const { return samples.back().t; }
};

namespace detail {

inline SampleMetrics measure_sample(const PolyCurve& c, const FlowConfig& cfg, double kappa_cum) {
    SampleMetrics m;
    m.length = length(c);
    m.area = signed_area(c);
    const auto k = curvature_vectors(c);
    const auto w = dual_lengths(c);
    for (std::size_t i = 0; i < k.size(); ++i) {
        m.max_abs_curvature = std::max(m.max_abs_curvature, norm(k[i]));
        m.kappa_sq_integral += norm2(k[i]) * w[i];
    }
    m.kappa_sq_cum = kappa_cum;
    for (const auto& l : cfg.metric_lines) {
        std::size_t count = 0;
        try {
            count = curve_line_intersections(c, l);
        } catch (const DegenerateConfiguration&) {
            count = std::numeric_limits<std::size_t>::max();
        }
        m.line_counts.push_back(count);
    }
    for (const auto& p : cfg.strip_probes) m.strip_counts.push_back(strip_multiplicity(c, p.line, p.r));
    return m;
}

inline std::pair<double, double> edge_range(const std::vector<Vec2>& v, bool closed) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    const std::size_t n = v.size(), m = closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i) {
        const double l = distance(v[i], v[(i + 1) % n]);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    return {lo, hi};
}

}  // namespace detail

/// Forward-Euler curve shortening flow x <- x + dt * kappa * n with
/// dt = cfl * (min edge)^2 and uniform resampling whenever an edge leaves
/// [0.5, 1.5] * target.
inline FlowTrajectory evolve(const PolyCurve& initial, const FlowConfig& cfg) {
    cfg.validate();
    if (!initial.closed()) throw InvalidInput("evolve needs a closed curve");
    const double L0 = length(initial);
    if (cfg.extinction_length >= L0) throw InvalidInput("extinction_length >= initial length");

    FlowTrajectory traj;
    const bool immersed = self_intersection_number(initial) > 0;
    const std::size_t initial_crossings = immersed ? self_intersection_number(initial) : 0;

    auto target_for = [&](double L) {
        return std::min(cfg.target_edge, L / double(cfg.min_edges));
    };
    auto needs_resample = [&](const std::vector<Vec2>& v, double target) {
        auto [lo, hi] = detail::edge_range(v, true);
        return lo < 0.5 * target || hi > 1.5 * target;
    };

    PolyCurve curve = initial;
    if (needs_resample(curve.vertices(), target_for(L0))) {
        curve = resample(curve, target_for(L0));
        ++traj.resample_events;
    }

    std::vector<double> times = cfg.sample_times;
    std::sort(times.begin(), times.end());
    std::erase_if(times, [&](double s) { return s <= 0.0 || s > cfg.t_end; });
    std::size_t next_time = 0;

    double t = 0.0, kappa_cum = 0.0;
    auto record = [&](bool final) {
        FlowSample s;
        s.t = t;
        s.metrics = detail::measure_sample(curve, cfg, kappa_cum);
        if (cfg.keep_curves || final) s.curve = curve;
        traj.samples.push_back(std::move(s));
    };
    record(false);

    std::vector<Vec2> pos = curve.vertices();
    std::size_t since_record = 0;
    while (true) {
        if (traj.steps >= cfg.max_steps) { traj.status = FlowStatus::step_limit; break; }
        const auto k = curvature_vectors(curve);
        auto [min_edge, max_edge] = detail::edge_range(curve.vertices(), true);
        double dt = cfg.cfl * min_edge * min_edge;
        if (!(dt > 1e-300) || !std::isfinite(dt)) { traj.status = FlowStatus::singular; break; }
        bool hit_sample = false;
        double stop = cfg.t_end;
        if (next_time < times.size()) stop = std::min(stop, times[next_time]);
        if (t + dt >= stop) { dt = stop - t; hit_sample = true; }

        // Accumulate the double integral with the pre-step curvature.
        const auto w = dual_lengths(curve);
        double ksq = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) ksq += norm2(k[i]) * w[i];
        kappa_cum += ksq * dt;

        pos = curve.vertices();
        for (std::size_t i = 0; i < pos.size(); ++i) pos[i] += dt * k[i];
        t = hit_sample ? stop : t + dt;
        ++traj.steps;

        try {
            curve = PolyCurve::cleaned(pos, true);
            const double L = length(curve);
            if (L < cfg.extinction_length) {
                traj.status = FlowStatus::extinct;
                record(true);
                break;
            }
            const double target = target_for(L);
            if (needs_resample(curve.vertices(), target)) {
                curve = resample(curve, target);
                ++traj.resample_events;
            }
        } catch (const InvalidInput&) {
            traj.status = FlowStatus::singular;
            break;
        }

        ++since_record;
        const bool at_end = t >= cfg.t_end;
        const bool at_time = hit_sample && next_time < times.size() && t >= times[next_time];
        if (at_time) ++next_time;
        if (immersed && (at_time || since_record >= cfg.record_every)) {
            if (self_intersection_number(curve) != initial_crossings) {
                traj.status = FlowStatus::singular;
                record(true);
                break;
            }
        }
        if (at_end) {
            record(true);
            break;
        }
        if (times.empty() ? since_record >= cfg.record_every : at_time) {
            record(false);
            since_record = 0;
        }
    }
    if (!traj.samples.back().curve) traj.samples.back().curve = curve;
    return traj;
}

struct DissipationCheck {
    double max_defect = 0.0;
};

/// max over windows [0, k] of |dL + double integral of kappa^2| / L(0).
inline DissipationCheck length_dissipation_check(const FlowTrajectory& traj) {
    if (traj.samples.size() < 3) throw InvalidInput("need at least 3 samples");
    DissipationCheck out;
    const auto& first = traj.samples.front().metrics;
    for (const auto& s : traj.samples) {
        const double defect = (s.metrics.length - first.length) + (s.metrics.kappa_sq_cum - first.kappa_sq_cum);
        out.max_defect = std::max(out.max_defect, std::abs(defect) / first.length);
    }
    return out;
}

/// Least-squares slope of (t, area) over samples with t in [t0, t1].
inline double area_rate(const FlowTrajectory& traj, double t0, double t1) {
    double st = 0, sa = 0, stt = 0, sta = 0;
    std::size_t n = 0;
    for (const auto& s : traj.samples) {
        if (s.t < t0 || s.t > t1) continue;
        st += s.t; sa += s.metrics.area; stt += s.t * s.t; sta += s.t * s.metrics.area; ++n;
    }
    if (n < 2) throw InvalidInput("not enough samples in window");
    return (double(n) * sta - st * sa) / (double(n) * stt - st * st);
}

// ---------------------------------------------------------------------------
// Graph flow u_t = u_xx / (1 + u_x^2)

struct GraphState {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> heights;  // ends are pinned

    GraphState() = default;
    GraphState(double x_start, double spacing, std::vector<double> u)
        : x0(x_start), dx(spacing), heights(std::move(u)) {
        if (!(dx > 0.0)) throw InvalidInput("grid spacing must be positive");
        if (heights.size() < 3) throw InvalidInput("graph needs at least 3 samples");
    }
    double x(std::size_t i) const { return x0 + dx * double(i); }

    template <class F>
    static GraphState sampled(double a, double b, std::size_t intervals, F&& f) {
        std::vector<double> u(intervals + 1);
        const double dx = (b - a) / double(intervals);
        for (std::size_t i = 0; i <= intervals; ++i) u[i] = f(a + dx * double(i));
        return GraphState(a, dx, std::move(u));
    }

    PolyCurve to_polyline() const {
        std::vector<Vec2> v(heights.size());
        for (std::size_t i = 0; i < heights.size(); ++i) v[i] = {x(i), heights[i]};
        return PolyCurve(std::move(v), false);
    }

    double sup_norm() const {
        double s = 0.0;
        for (double h : heights) s = std::max(s, std::abs(h));
        return s;
    }

    // Height at x by linear interpolation.
    double at(double xq) const {
        const double f = (xq - x0) / dx;
        const auto i = static_cast<std::size_t>(std::clamp(std::floor(f), 0.0, double(heights.size() - 2)));
        const double s = std::clamp(f - double(i), 0.0, 1.0);
        return heights[i] * (1.0 - s) + heights[i + 1] * s;
    }

    // Max |slope| of the polyline over edges meeting [a, b].
    double max_slope(double a, double b) const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < heights.size(); ++i) {
            if (x(i + 1) < a || x(i) > b) continue;
            s = std::max(s, std::abs(heights[i + 1] - heights[i]) / dx);
        }
        return s;
    }
};

/// One explicit step of length dt (dt <= 0.5 dx^2 keeps the scheme monotone).
inline void graph_step(GraphState& g, double dt, std::vector<double>& scratch) {
    auto& u = g.heights;
    scratch = u;
    const double inv_dx2 = 1.0 / (g.dx * g.dx), inv_2dx = 0.5 / g.dx;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double ux = (scratch[i + 1] - scratch[i - 1]) * inv_2dx;
        const double uxx = (scratch[i + 1] - 2.0 * scratch[i] + scratch[i - 1]) * inv_dx2;
        u[i] = scratch[i] + dt * uxx / (1.0 + ux * ux);
    }
}

/// Integrates the graph flow to t_end with dt = cfl * dx^2 (last step clipped).
inline GraphState graph_evolve(GraphState g, double t_end, double cfl) {
    if (!(cfl > 0.0) || cfl > 0.5) throw InvalidInput("cfl must be in (0, 0.5]");
    if (t_end < 0.0) throw InvalidInput("t_end must be non-negative");
    const double dt = cfl * g.dx * g.dx;
    std::vector<double> scratch;
    double t = 0.0;
    while (t < t_end) {
        const double h = std::min(dt, t_end - t);
        graph_step(g, h, scratch);
        t += h;
        if (t_end - t < 1e-15 * std::max(1.0, t_end)) break;
    }
    return g;
}

}  // namespace curveflow
