#pragma once

// Acceptance criteria 1-14 with pinned tolerances. Each criterion returns a
// pass flag plus a one-line summary of the measured quantities.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "curveflow/compact_set.hpp"
#include "curveflow/fixtures.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/level_set.hpp"
#include "curveflow/multiplicity.hpp"
#include "curveflow/reaper.hpp"

namespace curveflow {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Deterministic generic lines through the bounding box of c.
inline std::vector<Line> probe_lines(const PolyCurve& c, std::size_t count, std::uint64_t seed) {
    const CounterRng rng(seed);
    auto [lo, hi] = bounding_box({c});
    const Vec2 mid = 0.5 * (lo + hi);
    const double half = 0.5 * distance(lo, hi);
    std::vector<Line> lines;
    for (std::size_t i = 0; i < count; ++i) {
        const double angle = std::numbers::pi * rng.uniform(3 * i);
        const double shift = 0.8 * half * (2.0 * rng.uniform(3 * i + 1) - 1.0);
        lines.push_back(Line::at_angle(angle, dot(Line::at_angle(angle, 0.0).normal(), mid) + shift));
    }
    return lines;
}

namespace acceptance_detail {

inline std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double extinction_time(const PolyCurve& c) { return std::abs(signed_area(c)) / (2.0 * std::numbers::pi); }

// Counts increases of a sequence, skipping entries flagged as degenerate.
inline std::size_t increases(const std::vector<std::size_t>& seq, std::size_t* skipped = nullptr) {
    std::size_t bad = 0;
    bool have = false;
    std::size_t last = 0;
    for (auto v : seq) {
        if (v == std::numeric_limits<std::size_t>::max()) {
            if (skipped) ++*skipped;
            continue;
        }
        if (have && v > last) ++bad;
        last = v;
        have = true;
    }
    return bad;
}

inline CriterionResult shrinking_circle() {
    CriterionResult r{1, "shrinking circle", false, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    FlowConfig cfg;
    cfg.t_end = 0.25;
    const auto traj = evolve(fixtures::circle(512), cfg);
    const PolyCurve& c = traj.final_curve();
    Vec2 centroid{};
    for (const auto& p : c.vertices()) centroid += p;
    centroid = centroid / double(c.size());
    double mean_r = 0.0;
    for (const auto& p : c.vertices()) mean_r += distance(p, centroid);
    mean_r /= double(c.size());
    const double R = std::sqrt(1.0 - 2.0 * 0.25);
    const double radius_err = std::abs(mean_r - R) / R;
    const double length_err = std::abs(length(c) - 2.0 * std::numbers::pi * R) / (2.0 * std::numbers::pi * R);
    r.seconds = seconds_since(t0);
    r.passed = radius_err < 1e-3 && length_err < 1e-3 && r.seconds < 10.0;
    r.detail = fmt("radius err %.3g, length err %.3g, %.2f s", radius_err, length_err, r.seconds);
    return r;
}

inline CriterionResult area_law() {
    CriterionResult r{2, "area law", false, {}, 0.0};
    bool ok = true;
    for (const auto& [name, c] : {std::pair{"circle", fixtures::circle(512)}, std::pair{"ellipse", fixtures::ellipse(1.5, 0.75)}}) {
        FlowConfig cfg;
        cfg.t_end = 0.8 * extinction_time(c);
        cfg.keep_curves = false;
        const auto traj = evolve(c, cfg);
        const double rate = area_rate(traj, 0.0, cfg.t_end);
        const double lo = -2.0 * std::numbers::pi * 1.01, hi = -2.0 * std::numbers::pi * 0.99;
        ok = ok && rate >= lo && rate <= hi;
        r.detail += fmt("%s %.6f; ", name, rate);
    }
    r.passed = ok;
    r.detail += "band [-2pi 1.01, -2pi 0.99]";
    return r;
}

inline CriterionResult length_dissipation() {
    CriterionResult r{3, "length dissipation identity", false, {}, 0.0};
    bool ok = true;
    for (const auto& [name, c] : {std::pair{"circle", fixtures::circle(512)}, std::pair{"ellipse", fixtures::ellipse(1.5, 0.75)},
                                  std::pair{"star", fixtures::star(64)}}) {
        FlowConfig cfg;
        cfg.target_edge = 2.0 * std::numbers::pi / 512.0;
        cfg.t_end = 0.8 * extinction_time(c);
        cfg.keep_curves = false;
        const double defect = length_dissipation_check(evolve(c, cfg)).max_defect;
        ok = ok && defect < 1e-2;
        r.detail += fmt("%s %.3g; ", name, defect);
    }
    r.passed = ok;
    r.detail += "bound 1e-2";
    return r;
}

inline std::vector<std::pair<std::string, PolyCurve>> embedded_fixtures() {
    return {{"circle", fixtures::circle(512)}, {"ellipse", fixtures::ellipse(1.5, 0.75)}, {"star", fixtures::star(64)},
            {"koch3", fixtures::koch_prefix(3)}, {"comb", fixtures::comb(4, 0.25)}};
}

inline CriterionResult intersection_monotonicity(std::uint64_t seed) {
    CriterionResult r{4, "intersection monotonicity", false, {}, 0.0};
    std::size_t violations = 0, skipped = 0, samples = 0;
    for (const auto& [name, c] : embedded_fixtures()) {
        FlowConfig cfg;
        cfg.t_end = 0.8 * extinction_time(c);
        cfg.metric_lines = probe_lines(c, 16, seed);
        cfg.record_every = 8;
        cfg.keep_curves = false;
        const auto traj = evolve(c, cfg);
        samples += traj.samples.size();
        for (std::size_t l = 0; l < cfg.metric_lines.size(); ++l) {
            std::vector<std::size_t> seq;
            for (const auto& s : traj.samples) seq.push_back(s.metrics.line_counts[l]);
            violations += increases(seq, &skipped);
        }
    }
    r.passed = violations == 0;
    r.detail = fmt("%zu violations over %zu samples x 16 lines (%zu degenerate counts skipped)", violations, samples, skipped);
    return r;
}

inline CriterionResult multiplicity_monotonicity(std::uint64_t seed) {
    CriterionResult r{5, "multiplicity monotonicity", false, {}, 0.0};
    std::size_t violations = 0, samples = 0;
    for (const auto& [name, c] : {std::pair{"circle", fixtures::circle(512)}, std::pair{"star", fixtures::star(64)},
                                  std::pair{"koch3", fixtures::koch_prefix(3)}}) {
        FlowConfig cfg;
        cfg.t_end = 0.8 * extinction_time(c);
        for (const auto& l : probe_lines(c, 8, seed + 1)) cfg.strip_probes.push_back({l, 0.1});
        cfg.record_every = 8;
        cfg.keep_curves = false;
        const auto traj = evolve(c, cfg);
        samples += traj.samples.size();
        for (std::size_t q = 0; q < cfg.strip_probes.size(); ++q) {
            std::vector<std::size_t> seq;
            for (const auto& s : traj.samples) seq.push_back(s.metrics.strip_counts[q]);
            violations += increases(seq);
        }
    }
    r.passed = violations == 0;
    r.detail = fmt("%zu violations over %zu samples x 8 strips (r = 0.1)", violations, samples);
    return r;
}

inline CriterionResult reaper_exactness() {
    CriterionResult r{6, "grim reaper exactness", false, {}, 0.0};
    const auto p = reaper_constants(1.0, 1.0);
    const double analytic = translating_residual(p, 1000);
    const double discrete = discrete_translating_residual(p, 1024);
    r.passed = analytic < 1e-8 && discrete < 1e-3;
    r.detail = fmt("analytic %.3g (< 1e-8), discrete 1024 samples %.3g (< 1e-3)", analytic, discrete);
    return r;
}

inline CriterionResult straightening() {
    CriterionResult r{7, "straightening", false, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = straightening_experiment(0.2, 4.0, 0.5, fixtures::sawtooth(8, 0.2, 4.0));
    r.seconds = seconds_since(t0);
    r.passed = rep.max_slope_at_T <= 0.525 && r.seconds < 60.0;
    r.detail = fmt("T = %.6g, max slope %.4g (<= 0.525), barrier violations %zu, %.2f s", rep.T, rep.max_slope_at_T,
                   rep.barrier_violations, r.seconds);
    return r;
}

inline CriterionResult reaper_constants_check() {
    CriterionResult r{8, "reaper constants", false, {}, 0.0};
    const auto p = reaper_constants(1.0, 1.0);
    const auto g = check_reaper_guarantees(p, 1.0, 1.0);
    const bool c_ok = std::abs(p.c - std::numbers::pi / 12.0) <= 1e-4;
    const bool b_ok = std::abs(p.b - 4.0) <= 1e-4;
    const bool a_ok = std::abs(p.a - 6.16324) <= 1e-4;
    const bool g_ok = g.point_error <= 1e-8 && g.box_in_hull && g.max_slope <= 1.0 + 1e-8;
    r.passed = c_ok && b_ok && a_ok && g_ok;
    r.detail = fmt("c = %.9f, b = %.9f, a = %.9f (expected 6.16324 +- 1e-4: %s), guarantees %s", p.c, p.b, p.a,
                   a_ok ? "ok" : "off", g_ok ? "hold" : "fail");
    return r;
}

inline CriterionResult grid_exhaustion_check() {
    CriterionResult r{9, "grid exhaustion", false, {}, 0.0};
    bool ok = true;
    const double h = 1.0 / 256;
    for (const auto& [name, K] : {std::pair{"circle", fixtures::circle_raster(h)}, std::pair{"koch4", fixtures::koch_raster(4, h)}}) {
        const Vec2 seed{0.003, 0.002};
        std::vector<Exhaustion> ex;
        for (int n = 4; n <= 6; ++n) ex.push_back(grid_exhaustion(K, seed, n));
        bool nested = true, embedded = true;
        for (std::size_t i = 0; i + 1 < ex.size(); ++i) nested = nested && regions_nested(ex[i].region, ex[i + 1].region);
        std::vector<std::size_t> m;
        for (const auto& e : ex) {
            embedded = embedded && e.boundary && self_intersection_number(*e.boundary) == 0;
            m.push_back(e.boundary ? r_multiplicity(*e.boundary, 0.5, 64).value : 0);
        }
        const auto conn = local_connectivity_estimate(K, default_scales(K));
        const auto bound = multiplicity_bound_check(K, *ex.back().boundary, 0.5, conn);
        const bool constant = m[1] == m[2];
        const bool below = !bound.inconclusive && m[1] <= bound.bound && m[2] <= bound.bound;
        ok = ok && nested && embedded && constant && below;
        r.detail += fmt("%s: nested %d, embedded %d, M = %zu/%zu/%zu, bound %zu; ", name, nested, embedded, m[0], m[1],
                        m[2], bound.bound);
    }
    r.passed = ok;
    return r;
}

inline CriterionResult uniform_length_bound() {
    CriterionResult r{10, "uniform length bound", false, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> lengths;
    for (int n = 2; n <= 6; ++n) {
        FlowConfig cfg;
        cfg.t_end = 0.05;
        cfg.target_edge = 0.004;
        cfg.keep_curves = false;
        lengths.push_back(length(evolve(fixtures::koch_prefix(n), cfg).final_curve()));
    }
    const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
    const double spread = (*hi - *lo) / *hi;
    r.seconds = seconds_since(t0);
    r.passed = spread < 0.2 && r.seconds < 300.0;
    r.detail = fmt("L(t=0.05) for n = 2..6: %.4f %.4f %.4f %.4f %.4f, spread %.3g, %.1f s", lengths[0], lengths[1],
                   lengths[2], lengths[3], lengths[4], spread, r.seconds);
    return r;
}

inline std::vector<double> time_grid(double dt, double t_end) {
    std::vector<double> ts;
    for (int i = 0; i * dt <= t_end + 1e-12; ++i) ts.push_back(i * dt);
    return ts;
}

inline CriterionResult area_derivative_law() {
    CriterionResult r{11, "area derivative law", false, {}, 0.0};
    const double h = 1.0 / 256, T = 0.02;
    const auto ts = time_grid(0.0025, 0.04);
    const auto wedge = area_derivative_check(level_set_evolve(fixtures::wedge_raster(2, h), ts, 6).states, T);
    const auto jordan = area_derivative_check(level_set_evolve(fixtures::circle_raster(h), ts, 6).states, T);
    const double two_pi = 2.0 * std::numbers::pi;
    const bool wedge_ok = std::abs(wedge.left_slope - two_pi) <= 0.05 * two_pi &&
                          std::abs(wedge.right_slope - two_pi) <= 0.05 * two_pi && wedge.N_T == 3 && wedge.M_T == 3;
    const bool jordan_ok = std::abs(jordan.left_slope) <= 0.05 * two_pi && std::abs(jordan.right_slope) <= 0.05 * two_pi;
    r.passed = wedge_ok && jordan_ok;
    r.detail = fmt("tangent circles %.4f/%.4f (N %zu, M %zu); Jordan curve %.3g/%.3g", wedge.left_slope,
                   wedge.right_slope, wedge.N_T, wedge.M_T, jordan.left_slope, jordan.right_slope);
    return r;
}

inline CriterionResult backward_convergence() {
    CriterionResult r{12, "backward convergence", false, {}, 0.0};
    bool ok = true;
    for (const auto& [name, J] : {std::pair{"circle", fixtures::circle(1024)}, std::pair{"star", fixtures::star(64)}}) {
        BackwardOptions opt;
        opt.level = 7;
        opt.envelope_slack_cells = 4.0;
        const auto res = backward_convergence_metric(J, {0.01, 0.02, 0.04, 0.08}, opt);
        bool decreasing = true, envelope = true;
        for (std::size_t i = 0; i < res.size(); ++i) {
            envelope = envelope && res[i].envelope_ok;
            if (i > 0) decreasing = decreasing && res[i - 1].matched_sup < res[i].matched_sup;
        }
        ok = ok && decreasing && envelope;
        r.detail += fmt("%s: sup %.4f %.4f %.4f %.4f, envelope %s; ", name, res[3].matched_sup, res[2].matched_sup,
                        res[1].matched_sup, res[0].matched_sup, envelope ? "ok" : "violated");
    }
    r.passed = ok;
    return r;
}

inline CriterionResult fate_trichotomy() {
    CriterionResult r{13, "fate trichotomy", false, {}, 0.0};
    const double h = 1.0 / 256;
    const auto ts = time_grid(0.0025, 0.02);
    bool ok = true;
    const std::pair<const char*, Fate> cases[] = {{"segment", Fate::vanishes}, {"circle", Fate::smooth_curve}, {"wedge", Fate::fattens}};
    for (const auto& [name, expected] : cases) {
        const std::string n = name;
        const RasterSet K = n == "segment" ? fixtures::segment_raster(h) : n == "circle" ? fixtures::circle_raster(h)
                                                                                       : fixtures::wedge_raster(2, h);
        const auto predicted = classify_fate(K).fate;
        const auto observed = observe_fate(level_set_evolve(K, ts, 6), 0.02).fate;
        ok = ok && predicted == expected && observed == expected;
        r.detail += fmt("%s: predicted %s, observed %s; ", name, to_string(predicted), to_string(observed));
    }
    r.passed = ok;
    return r;
}

inline CriterionResult length_limit() {
    CriterionResult r{14, "length limit", false, {}, 0.0};
    BackwardOptions opt;
    opt.level = 8;
    opt.raster_extra_levels = 1;
    const auto res = backward_convergence_metric(fixtures::circle(4096), {0.001}, opt);
    const double gap = 2.0 * std::numbers::pi - 0.5 * (res[0].inner_length + res[0].outer_length);
    r.passed = std::abs(gap) < 0.01;
    r.detail = fmt("L(u_t) = %.5f (inner %.5f, outer %.5f), gap %.4g (< 0.01)", 2.0 * std::numbers::pi - gap,
                   res[0].inner_length, res[0].outer_length, gap);
    return r;
}

}  // namespace acceptance_detail

inline constexpr int criterion_count = 14;

inline CriterionResult run_criterion(int id, std::uint64_t seed = 0) {
    using namespace acceptance_detail;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
            case 1: r = shrinking_circle(); break;
            case 2: r = area_law(); break;
            case 3: r = length_dissipation(); break;
            case 4: r = intersection_monotonicity(seed); break;
            case 5: r = multiplicity_monotonicity(seed); break;
            case 6: r = reaper_exactness(); break;
            case 7: r = straightening(); break;
            case 8: r = reaper_constants_check(); break;
            case 9: r = grid_exhaustion_check(); break;
            case 10: r = uniform_length_bound(); break;
            case 11: r = area_derivative_law(); break;
            case 12: r = backward_convergence(); break;
            case 13: r = fate_trichotomy(); break;
            case 14: r = length_limit(); break;
            default: throw InvalidInput("criterion id must be in 1..14");
        }
    } catch (const InvalidInput&) {
        throw;
    } catch (const std::exception& e) {
        r.id = id;
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
}

inline std::string format_result(const CriterionResult& r) {
    return acceptance_detail::fmt("[%s] %2d %-28s %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                                  r.detail.c_str(), r.seconds);
}

}  // namespace curveflow
