#pragma once

// Level set flow of a rasterized compact connected set K: every complement
// component is exhausted by a dyadic cell region, its boundary is evolved by
// curve shortening flow, and K_t is reassembled as the complement of the
// evolved regions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "curveflow/compact_set.hpp"
#include "curveflow/error.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/parallel.hpp"
#include "curveflow/raster.hpp"

namespace curveflow {

struct ComplementComponent {
    int label = 0;
    bool unbounded = false;
    double measure = 0.0;  // raster estimate at t = 0; infinity when unbounded
    std::optional<Vec2> seed;
    std::optional<PolyCurve> initial_boundary;  // after corner smoothing
    FlowTrajectory evolution;                   // empty when the region is empty
};

struct LevelSetState {
    double t = 0.0;
    std::vector<PolyCurve> component_boundaries;
    std::vector<std::size_t> component_ids;  // index into LevelSetRun::components
    std::optional<RasterSet> K_t_mask;
    double measure = 0.0;         // m(K_t) from the evolved polygon areas
    double raster_measure = -1.0; // m(K_t) by counting mask points (when the mask is built)
    std::size_t N_t = 0;          // components with measure >= 2 pi t
    std::size_t M_t = 0;          // components with measure > 2 pi t
    bool threshold_inconclusive = false;
};

struct LevelSetOptions {
    // Resampling edge for the evolved boundaries, in cells of side 2^-n.
    double edge_in_cells = 1.0;
    double cfl = 0.25;
    bool smooth_corners = true;
    bool build_masks = false;
    double frame_margin = 2.0;
};

struct LevelSetRun {
    RasterSet K;  // padded copy actually used
    int level = 0;
    std::vector<ComplementComponent> components;
    std::vector<LevelSetState> states;
};

namespace detail {

// Fills the mask points strictly inside a closed polygon (scanline parity).
inline void fill_polygon(const PolyCurve& c, const RasterSet& grid, std::vector<std::uint8_t>& inside) {
    const auto& v = c.vertices();
    std::vector<double> xs;
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        const double y = grid.point(std::ptrdiff_t(r), 0).y;
        xs.clear();
        for (std::size_t i = 0, n = v.size(), j = n - 1; i < n; j = i++)
            if ((v[i].y > y) != (v[j].y > y)) xs.push_back(v[j].x + (y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y));
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const auto c0 = std::ptrdiff_t(std::ceil((xs[k] - grid.origin().x) / grid.spacing()));
            const auto c1 = std::ptrdiff_t(std::floor((xs[k + 1] - grid.origin().x) / grid.spacing()));
            for (auto c = std::max<std::ptrdiff_t>(c0, 0); c <= std::min<std::ptrdiff_t>(c1, std::ptrdiff_t(grid.cols()) - 1); ++c)
                inside[r * grid.cols() + std::size_t(c)] ^= 1;
        }
    }
}

inline RasterSet ensure_frame(const RasterSet& k, double margin) {
    std::ptrdiff_t rmin = std::ptrdiff_t(k.rows()), rmax = -1, cmin = std::ptrdiff_t(k.cols()), cmax = -1;
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(k.rows()); ++r)
        for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(k.cols()); ++c)
            if (k.at(r, c)) { rmin = std::min(rmin, r); rmax = std::max(rmax, r); cmin = std::min(cmin, c); cmax = std::max(cmax, c); }
    if (rmax < 0) throw InvalidInput("K is empty");
    const double h = k.spacing();
    const double have = h * double(std::min({rmin, cmin, std::ptrdiff_t(k.rows()) - 1 - rmax, std::ptrdiff_t(k.cols()) - 1 - cmax}));
    if (have >= margin) return k;
    return pad(k, std::ceil(margin - have));
}

}  // namespace detail

/// Evolves the level set flow of K and records states at `times`.
inline LevelSetRun level_set_evolve(const RasterSet& K_in, const std::vector<double>& times, int level,
                                    const LevelSetOptions& opt = {}) {
    if (!raster_connected(K_in)) throw InvalidInput("K must be raster-connected");
    LevelSetRun run;
    run.level = level;
    run.K = detail::ensure_frame(K_in, opt.frame_margin);
    const RasterSet& K = run.K;
    const double h = K.spacing();
    const double cell = std::ldexp(1.0, -level);
    const std::size_t m = detail::cells_per_side(K, level);
    const detail::OccupancySums sums(K);

    int ncomp = 0;
    const auto labels = label_components(K, false, &ncomp);
    run.components.resize(std::size_t(ncomp));
    std::vector<std::size_t> pixels(std::size_t(ncomp), 0);
    for (std::size_t r = 0; r < K.rows(); ++r)
        for (std::size_t c = 0; c < K.cols(); ++c) {
            const int l = labels[r * K.cols() + c];
            if (!l) continue;
            ++pixels[std::size_t(l - 1)];
            if (r == 0 || c == 0 || r + 1 == K.rows() || c + 1 == K.cols()) run.components[std::size_t(l - 1)].unbounded = true;
        }
    for (int i = 0; i < ncomp; ++i) {
        auto& comp = run.components[std::size_t(i)];
        comp.label = i + 1;
        comp.measure = comp.unbounded ? std::numeric_limits<double>::infinity() : double(pixels[std::size_t(i)]) * h * h;
    }

    // Seeds: centers of unblocked cells, one exhaustion per component, keeping
    // the largest region when a component has several cell clusters.
    const auto crow = std::ptrdiff_t((K.rows() - 1) / m), ccol = std::ptrdiff_t((K.cols() - 1) / m);
    std::vector<std::optional<Exhaustion>> best(static_cast<std::size_t>(ncomp));
    std::vector<std::vector<std::uint8_t>> claimed(std::size_t(crow), std::vector<std::uint8_t>(std::size_t(ccol), 0));
    for (std::ptrdiff_t r = 0; r < crow; ++r)
        for (std::ptrdiff_t c = 0; c < ccol; ++c) {
            if (claimed[std::size_t(r)][std::size_t(c)]) continue;
            if (sums.count(std::size_t(r) * m, std::size_t(c) * m, std::size_t(r + 1) * m, std::size_t(c + 1) * m) > 0) continue;
            const std::size_t pr = std::size_t(r) * m + m / 2, pc = std::size_t(c) * m + m / 2;
            const int l = labels[pr * K.cols() + pc];
            if (!l) continue;
            const Vec2 seed = K.point(std::ptrdiff_t(pr), std::ptrdiff_t(pc)) + Vec2{0.25 * h, 0.25 * h};
            auto ex = grid_exhaustion(K, seed, level, &sums);
            for (const auto& cl : ex.region.cells) claimed[std::size_t(cl.row)][std::size_t(cl.col)] = 1;
            auto& slot = best[std::size_t(l - 1)];
            if (!slot || ex.region.cells.size() > slot->region.cells.size()) slot = std::move(ex);
        }

    std::vector<double> sample_times = times;
    std::sort(sample_times.begin(), sample_times.end());
    const double t_end = sample_times.empty() ? 0.0 : sample_times.back();

    parallel_for(std::size_t(ncomp), [&](std::size_t i) {
        auto& comp = run.components[i];
        if (!best[i] || !best[i]->boundary) return;
        comp.seed = best[i]->region.seed;
        PolyCurve b = *best[i]->boundary;
        if (opt.smooth_corners) b = smooth_boundary(b, cell);
        comp.initial_boundary = b;
        if (t_end <= 0.0) return;
        FlowConfig cfg;
        cfg.target_edge = opt.edge_in_cells * cell;
        cfg.cfl = opt.cfl;
        cfg.t_end = t_end;
        cfg.sample_times = sample_times;
        cfg.extinction_length = std::min(4.0 * cell, 0.5 * length(b));
        cfg.min_edges = 16;
        comp.evolution = evolve(b, cfg);
    });

    // Reassemble the states.
    std::size_t bounded_with_region = 0;
    for (const auto& c : run.components) if (!c.unbounded && c.initial_boundary) ++bounded_with_region;
    (void)bounded_with_region;
    const double quantum_scale = h;
    for (double t : sample_times) {
        LevelSetState st;
        st.t = t;
        double area_outer = 0.0, area_inner = 0.0;
        bool outer_alive = false;
        for (std::size_t i = 0; i < run.components.size(); ++i) {
            const auto& comp = run.components[i];
            if (!comp.initial_boundary) continue;
            const FlowSample* hit = nullptr;
            for (const auto& s : comp.evolution.samples)
                if (std::abs(s.t - t) <= 1e-12 * std::max(1.0, t) && s.curve) hit = &s;
            if (!hit) continue;  // extinct before t
            if (comp.evolution.status == FlowStatus::extinct && hit == &comp.evolution.samples.back()) continue;
            st.component_boundaries.push_back(*hit->curve);
            st.component_ids.push_back(i);
            const double a = std::abs(signed_area(*hit->curve));
            if (comp.unbounded) { area_outer = a; outer_alive = true; }
            else area_inner += a;
        }
        st.measure = outer_alive ? std::max(0.0, area_outer - area_inner) : 0.0;
        const double threshold = 2.0 * std::numbers::pi * t;
        for (const auto& comp : run.components) {
            if (comp.measure >= threshold) ++st.N_t;
            if (comp.measure > threshold) ++st.M_t;
            if (!comp.unbounded) {
                const double perimeter = comp.initial_boundary ? length(*comp.initial_boundary) : 0.0;
                if (std::abs(comp.measure - threshold) <= perimeter * quantum_scale) st.threshold_inconclusive = true;
            }
        }
        if (opt.build_masks) {
            RasterSet mask(K.origin(), h, K.rows(), K.cols());
            std::vector<std::uint8_t> inside(K.rows() * K.cols(), 0);
            for (std::size_t q = 0; q < st.component_boundaries.size(); ++q) {
                std::vector<std::uint8_t> one(K.rows() * K.cols(), 0);
                detail::fill_polygon(st.component_boundaries[q], K, one);
                const bool unb = run.components[st.component_ids[q]].unbounded;
                for (std::size_t p = 0; p < one.size(); ++p) {
                    // Bounded: region is the inside. Unbounded: region is the outside.
                    const bool in_region = unb ? !one[p] : one[p];
                    if (in_region) inside[p] = 1;
                }
            }
            if (!outer_alive) std::fill(inside.begin(), inside.end(), 1);
            std::size_t kcount = 0;
            for (std::size_t p = 0; p < inside.size(); ++p) {
                mask.data()[p] = inside[p] ? 0 : 1;
                kcount += mask.data()[p];
            }
            st.raster_measure = double(kcount) * h * h;
            st.K_t_mask = std::move(mask);
        }
        run.states.push_back(std::move(st));
    }
    return run;
}

// ---------------------------------------------------------------------------

struct AreaDerivative {
    double left_slope = 0.0;
    double right_slope = 0.0;
    std::size_t N_T = 0;
    std::size_t M_T = 0;
    bool left_ok = false;
    bool right_ok = false;
    bool inconclusive = false;
};

/// One-sided least-squares slopes of m(K_t) at T compared with
/// 2 pi (N_T - 2) from the left and 2 pi (M_T - 2) from the right.
inline AreaDerivative area_derivative_check(const std::vector<LevelSetState>& states, double T,
                                            double rel_tol = 0.05) {
    auto slope = [&](bool left) {
        double st = 0, sm = 0, stt = 0, stm = 0;
        std::size_t n = 0;
        for (const auto& s : states) {
            if (left ? s.t > T + 1e-12 : s.t < T - 1e-12) continue;
            st += s.t; sm += s.measure; stt += s.t * s.t; stm += s.t * s.measure; ++n;
        }
        if (n < 8) throw InvalidInput("fewer than 8 states on one side of T");
        return (double(n) * stm - st * sm) / (double(n) * stt - st * st);
    };
    AreaDerivative out;
    out.left_slope = slope(true);
    out.right_slope = slope(false);
    const LevelSetState* at = &states.front();
    for (const auto& s : states)
        if (std::abs(s.t - T) < std::abs(at->t - T)) at = &s;
    out.N_T = at->N_t;
    out.M_T = at->M_t;
    out.inconclusive = at->threshold_inconclusive;
    const double two_pi = 2.0 * std::numbers::pi;
    const double left_expected = two_pi * (double(out.N_T) - 2.0);
    const double right_expected = two_pi * (double(out.M_T) - 2.0);
    out.left_ok = std::abs(out.left_slope - left_expected) <= rel_tol * std::max(std::abs(left_expected), two_pi);
    out.right_ok = std::abs(out.right_slope - right_expected) <= rel_tol * std::max(std::abs(right_expected), two_pi);
    return out;
}

// ---------------------------------------------------------------------------

enum class Fate { vanishes, smooth_curve, fattens };

inline const char* to_string(Fate f) {
    switch (f) {
        case Fate::vanishes: return "vanishes";
        case Fate::smooth_curve: return "smooth_curve";
        case Fate::fattens: return "fattens";
    }
    return "?";
}

struct FateReport {
    Fate fate = Fate::fattens;
    std::size_t complement_component_count = 0;
    double measure_estimate_of_K = 0.0;
    double measure_quantum = 0.0;
};

/// Predicts the fate from the complement component count and the measure of
/// K: measure ~ 0 with one component vanishes, measure ~ 0 with two
/// components becomes a smooth curve, everything else fattens.
inline FateReport classify_fate(const RasterSet& K_in) {
    if (!raster_connected(K_in)) throw InvalidInput("K must be raster-connected");
    const RasterSet K = detail::ensure_frame(K_in, 1.0);
    FateReport rep;
    int n = 0;
    label_components(K, false, &n);
    rep.complement_component_count = std::size_t(n);
    const double h = K.spacing();
    rep.measure_estimate_of_K = double(interior_count(K)) * h * h;
    // Quantum: twice the spacing times the boundary length, estimated by the
    // occupied points that have a free 4-neighbour.
    std::size_t edge_points = 0;
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(K.rows()); ++r)
        for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(K.cols()); ++c)
            if (K.at(r, c) && !(K.at(r + 1, c) && K.at(r - 1, c) && K.at(r, c + 1) && K.at(r, c - 1))) ++edge_points;
    rep.measure_quantum = 2.0 * h * (double(edge_points) * h);
    const bool null_set = rep.measure_estimate_of_K <= rep.measure_quantum;
    if (null_set && n == 1) rep.fate = Fate::vanishes;
    else if (null_set && n == 2) rep.fate = Fate::smooth_curve;
    else rep.fate = Fate::fattens;
    return rep;
}

struct ObservedFate {
    Fate fate = Fate::fattens;
    std::size_t boundary_count = 0;
    double measure = 0.0;
    double measure_slope = 0.0;  // least squares over the states up to t
    double separation = 0.0;     // Hausdorff distance of the two boundaries when there are two
};

/// Fate read off a level set run at time t: no surviving boundary means the
/// flow vanished; growing measure, several boundaries or two boundaries that
/// stay apart mean fattening; two coinciding boundaries mean a smooth curve.
inline ObservedFate observe_fate(const LevelSetRun& run, double t) {
    ObservedFate obs;
    const LevelSetState* at = nullptr;
    for (const auto& s : run.states)
        if (!at || std::abs(s.t - t) < std::abs(at->t - t)) at = &s;
    if (!at) throw InvalidInput("run has no states");
    obs.boundary_count = at->component_boundaries.size();
    obs.measure = at->measure;
    double st = 0, sm = 0, stt = 0, stm = 0;
    std::size_t n = 0;
    for (const auto& s : run.states) {
        if (s.t > at->t + 1e-12) continue;
        st += s.t; sm += s.measure; stt += s.t * s.t; stm += s.t * s.measure; ++n;
    }
    if (n >= 2) obs.measure_slope = (double(n) * stm - st * sm) / (double(n) * stt - st * st);
    const double cell = std::ldexp(1.0, -run.level);
    const double gap = 2.0 * (std::sqrt(2.0) * cell + run.K.spacing());
    if (obs.boundary_count == 0) {
        obs.fate = Fate::vanishes;
    } else if (obs.boundary_count == 2) {
        const auto d = distances(at->component_boundaries[0], at->component_boundaries[1], {16, 64});
        obs.separation = d.hausdorff;
        const bool growing = obs.measure_slope > std::numbers::pi;
        obs.fate = (!growing && obs.separation <= gap) ? Fate::smooth_curve : Fate::fattens;
    } else {
        obs.fate = Fate::fattens;
    }
    return obs;
}

// ---------------------------------------------------------------------------

struct BackwardSample {
    double t = 0.0;
    double matched_sup = 0.0;
    double hausdorff = 0.0;
    bool envelope_ok = false;
    double envelope_excess = 0.0;  // max over vertices of dist(v, J) - (sqrt(2t) + slack)
    double length_gap = 0.0;       // L(J) minus the mean length of the inner and outer evolved boundaries
    double inner_length = 0.0;
    double outer_length = 0.0;
    PolyCurve curve;               // the evolved interior boundary u_t
};

struct BackwardOptions {
    int level = 7;
    int raster_extra_levels = 2;       // raster spacing 2^-(level + extra)
    double envelope_slack_cells = 2.0; // slack in cells of side 2^-level
    LevelSetOptions level_set{};
    DistanceOptions distance{};
};

/// Evolves the level set flow of an embedded Jordan polygon J and measures
/// how the evolved curve approaches J as t decreases.
inline std::vector<BackwardSample> backward_convergence_metric(const PolyCurve& J, const std::vector<double>& t_values,
                                                               const BackwardOptions& opt = {}) {
    if (!J.closed() || self_intersection_number(J) != 0) throw InvalidInput("J must be an embedded closed curve");
    const double h = std::ldexp(1.0, -(opt.level + opt.raster_extra_levels));
    const RasterSet K = raster_from_curves({J}, h, 2.0);
    const auto run = level_set_evolve(K, t_values, opt.level, opt.level_set);
    const double cell = std::ldexp(1.0, -opt.level);
    const double LJ = length(J);
    std::vector<BackwardSample> out;
    for (const auto& st : run.states) {
        BackwardSample s;
        s.t = st.t;
        const PolyCurve* inner = nullptr;
        const PolyCurve* outer = nullptr;
        for (std::size_t q = 0; q < st.component_boundaries.size(); ++q) {
            if (run.components[st.component_ids[q]].unbounded) outer = &st.component_boundaries[q];
            else if (!inner || std::abs(signed_area(st.component_boundaries[q])) > std::abs(signed_area(*inner)))
                inner = &st.component_boundaries[q];
        }
        if (!inner) throw Error("interior component vanished before t = " + std::to_string(st.t));
        s.curve = *inner;
        const auto d = distances(J, *inner, opt.distance);
        s.matched_sup = d.matched_sup;
        s.hausdorff = d.hausdorff;
        const double bound = std::sqrt(2.0 * st.t) + opt.envelope_slack_cells * cell;
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& v : inner->vertices()) worst = std::max(worst, point_curve_distance(v, J) - bound);
        s.envelope_excess = worst;
        s.envelope_ok = worst <= 0.0;
        s.inner_length = length(*inner);
        s.outer_length = outer ? length(*outer) : s.inner_length;
        s.length_gap = LJ - 0.5 * (s.inner_length + s.outer_length);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct SmoothnessDiagnostics {
    double max_abs_curvature = 0.0;
    double local_turning = 0.0;  // max over balls B_{nu r} of |integral of kappa ds| on a sub-arc
};

inline SmoothnessDiagnostics smoothness_diagnostics(const PolyCurve& c, double nu, double r) {
    if (!c.closed()) throw InvalidInput("smoothness diagnostics need a closed curve");
    SmoothnessDiagnostics out;
    for (const auto& k : curvature_vectors(c)) out.max_abs_curvature = std::max(out.max_abs_curvature, norm(k));
    const double radius = nu * r;
    const std::size_t n = c.size();
    std::vector<double> turn(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = c[i] - c[(i + n - 1) % n], e1 = c[(i + 1) % n] - c[i];
        turn[i] = std::atan2(cross(e0, e1), dot(e0, e1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        // Component of the curve inside the ball that contains vertex i.
        std::size_t back = 0, fwd = 0;
        while (back + 1 < n && distance(c[(i + n - back - 1) % n], c[i]) < radius) ++back;
        while (fwd + back + 1 < n && distance(c[(i + fwd + 1) % n], c[i]) < radius) ++fwd;
        double run = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t k = 0; k <= back + fwd; ++k) {
            run += turn[(i + n - back + k) % n];
            lo = std::min(lo, run);
            hi = std::max(hi, run);
        }
        out.local_turning = std::max(out.local_turning, hi - lo);
    }
    return out;
}

}  // namespace curveflow
