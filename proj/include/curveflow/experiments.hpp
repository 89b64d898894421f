#pragma once

// Named experiments: parameter schemas, artifact writing and manifests.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveflow/acceptance.hpp"
#include "curveflow/compact_set.hpp"
#include "curveflow/curve_io.hpp"
#include "curveflow/error.hpp"
#include "curveflow/fixtures.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/level_set.hpp"
#include "curveflow/multiplicity.hpp"
#include "curveflow/raster.hpp"
#include "curveflow/reaper.hpp"

namespace curveflow {

inline constexpr const char* tool_version = "0.1.0";

/// Bad experiment name, unknown parameter or mistyped value (exit code 2).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

enum class ParamKind { number, integer, text, number_list, boolean };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::number;
    nlohmann::json fallback;  // null: required
    std::string help;
};

struct ExperimentConfig {
    std::string name;
    std::vector<std::string> inputs;
    nlohmann::json parameters = nlohmann::json::object();
    std::string output_dir = "out";
    std::uint64_t seed = 0;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunOutcome {
    int exit_code = 0;
    std::vector<Check> checks;
    std::vector<std::string> files;
};

/// 17 significant digits, so values round-trip exactly.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class ExperimentContext {
public:
    ExperimentContext(const ExperimentConfig& cfg, nlohmann::json params) : config(cfg), params(std::move(params)) {
        std::filesystem::create_directories(cfg.output_dir);
    }

    const ExperimentConfig& config;
    nlohmann::json params;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> files;  // relative path, hash
    std::string report;                                     // printed to stdout by the CLI

    double num(const std::string& k) const { return params.at(k).get<double>(); }
    long integer(const std::string& k) const { return params.at(k).get<long>(); }
    std::string text(const std::string& k) const { return params.at(k).get<std::string>(); }
    std::vector<double> list(const std::string& k) const { return params.at(k).get<std::vector<double>>(); }
    bool flag(const std::string& k) const { return params.at(k).get<bool>(); }

    void write_text(const std::string& rel, const std::string& content) {
        const auto path = std::filesystem::path(config.output_dir) / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << content;
        files.emplace_back(rel, hex64(fnv1a64(content)));
    }
    void write_json(const std::string& rel, const nlohmann::json& j) { write_text(rel, j.dump(1) + "\n"); }
    void check(const std::string& name, bool passed, std::string detail = {}) {
        checks.push_back({name, passed, std::move(detail)});
    }

    const std::string& input(std::size_t i = 0) const {
        if (config.inputs.size() <= i) throw UsageError("experiment needs an --input file");
        return config.inputs[i];
    }
};

namespace experiments_detail {

struct Experiment {
    std::vector<ParamSpec> schema;
    std::function<void(ExperimentContext&)> run;
    std::string help;
};

// Curve or raster input file; curves are rasterized at `spacing` when a raster is needed.
inline PolyCurve load_curve(const std::string& path) {
    const auto j = read_json_file(path);
    if (!j.contains("vertices")) throw InvalidInput(path + " is not a curve file");
    return curve_from_json(j);
}

inline RasterSet load_raster(const std::string& path, double spacing) {
    const auto j = read_json_file(path);
    if (j.contains("data")) return raster_from_json(j);
    if (j.contains("vertices")) return raster_from_curves({curve_from_json(j)}, spacing);
    throw InvalidInput(path + " is neither a raster nor a curve file");
}

inline std::string trajectory_csv(const FlowTrajectory& traj, std::size_t lines, std::size_t strips) {
    std::ostringstream out;
    out << "t,length,area,max_abs_curvature,kappa_sq_cum";
    for (std::size_t i = 0; i < lines; ++i) out << ",line_" << i;
    for (std::size_t i = 0; i < strips; ++i) out << ",strip_" << i;
    out << '\n';
    for (const auto& s : traj.samples) {
        const auto& m = s.metrics;
        out << csv_number(s.t) << ',' << csv_number(m.length) << ',' << csv_number(m.area) << ','
            << csv_number(m.max_abs_curvature) << ',' << csv_number(m.kappa_sq_cum);
        for (auto c : m.line_counts) out << ',' << (c == std::numeric_limits<std::size_t>::max() ? std::string("nan") : std::to_string(c));
        for (auto c : m.strip_counts) out << ',' << c;
        out << '\n';
    }
    return out.str();
}

inline void run_evolve(ExperimentContext& ctx) {
    const PolyCurve c = load_curve(ctx.input());
    FlowConfig cfg;
    cfg.t_end = ctx.num("t_end");
    cfg.target_edge = ctx.num("target_edge");
    cfg.cfl = ctx.num("cfl");
    cfg.record_every = std::size_t(ctx.integer("record_every"));
    cfg.extinction_length = ctx.num("extinction_length");
    cfg.keep_curves = false;
    if (ctx.num("sample_dt") > 0) cfg.sample_times = acceptance_detail::time_grid(ctx.num("sample_dt"), cfg.t_end);
    cfg.metric_lines = probe_lines(c, std::size_t(ctx.integer("probe_lines")), ctx.config.seed);
    if (ctx.num("strip_r") > 0)
        for (const auto& l : cfg.metric_lines) cfg.strip_probes.push_back({l, ctx.num("strip_r")});
    cfg.validate();
    const auto traj = evolve(c, cfg);
    ctx.write_text("trajectory.csv", trajectory_csv(traj, cfg.metric_lines.size(), cfg.strip_probes.size()));
    ctx.write_json("final_curve.json", curve_to_json(traj.final_curve()));
    nlohmann::json summary{{"status", to_string(traj.status)},
                           {"final_time", traj.final_time()},
                           {"steps", traj.steps},
                           {"resample_events", traj.resample_events}};
    if (traj.samples.size() >= 3) summary["dissipation_defect"] = length_dissipation_check(traj).max_defect;
    ctx.write_json("summary.json", summary);
    ctx.check("flow completed", traj.status != FlowStatus::step_limit, to_string(traj.status));
    if (!cfg.metric_lines.empty()) {
        std::size_t bad = 0;
        for (std::size_t l = 0; l < cfg.metric_lines.size(); ++l) {
            std::vector<std::size_t> seq;
            for (const auto& s : traj.samples) seq.push_back(s.metrics.line_counts[l]);
            bad += acceptance_detail::increases(seq);
        }
        ctx.check("line intersections non-increasing", bad == 0, std::to_string(bad) + " increases");
    }
    ctx.report = "status " + std::string(to_string(traj.status)) + " at t = " + csv_number(traj.final_time());
}

inline void run_multiplicity(ExperimentContext& ctx) {
    const PolyCurve c = load_curve(ctx.input());
    const double r = ctx.num("r");
    const auto budget = std::size_t(ctx.integer("budget"));
    const auto mode = ctx.text("mode");
    if (mode != "r" && mode != "tilde" && mode != "both") throw UsageError("mode must be r, tilde or both");
    nlohmann::json out{{"r", r}, {"budget", budget}};
    if (mode != "tilde") out["r_multiplicity"] = certificate_to_json(r_multiplicity(c, r, budget));
    if (mode != "r") out["tilde_r_multiplicity"] = certificate_to_json(tilde_r_multiplicity(c, r, budget));
    if (mode == "both") {
        const auto g = comparability_global(c, r, budget);
        out["comparability"] = {{"m", g.m}, {"m_tilde", g.m_tilde}, {"ok", g.ok}};
        ctx.check("comparability", g.ok, std::to_string(g.m) + " vs " + std::to_string(g.m_tilde));
    }
    ctx.write_json("certificate.json", out);
    ctx.report = "r = " + csv_number(r);
    if (out.contains("r_multiplicity")) ctx.report += ", M_r = " + out["r_multiplicity"]["value"].dump();
    if (out.contains("tilde_r_multiplicity")) ctx.report += ", tilde M_r = " + out["tilde_r_multiplicity"]["value"].dump();
}

inline void run_reaper(ExperimentContext& ctx) {
    const double r = ctx.num("r"), alpha = ctx.num("alpha"), l = ctx.num("l");
    const auto p = reaper_constants(r, alpha);
    const auto g = check_reaper_guarantees(p, r, alpha);
    const auto samples = std::size_t(ctx.integer("samples"));
    const double analytic = translating_residual(p, samples);
    const double discrete = discrete_translating_residual(p, samples);
    nlohmann::json out{{"r", r},
                       {"alpha", alpha},
                       {"a", p.a},
                       {"b", p.b},
                       {"c", p.c},
                       {"straightening_time", straightening_time(r, l, alpha)},
                       {"l", l},
                       {"guarantees",
                        {{"point_error", g.point_error}, {"box_in_hull", g.box_in_hull}, {"max_slope", g.max_slope},
                         {"hull_margin", g.hull_margin}}},
                       {"translating_residual", analytic},
                       {"discrete_translating_residual", discrete}};
    ctx.write_json("reaper.json", out);
    std::ostringstream csv;
    csv << "x,y\n";
    for (const auto& v : reaper_polyline(p, 0.0, samples).vertices()) csv << csv_number(v.x) << ',' << csv_number(v.y) << '\n';
    ctx.write_text("reaper_curve.csv", csv.str());
    ctx.check("point guarantee", g.point_error <= 1e-8, csv_number(g.point_error));
    ctx.check("box in hull", g.box_in_hull);
    ctx.check("slope guarantee", g.max_slope <= alpha + 1e-8, csv_number(g.max_slope));
    ctx.check("translating residual", analytic < 1e-8, csv_number(analytic));
    ctx.check("discrete residual", discrete < 1e-3, csv_number(discrete));
    ctx.report = "a = " + csv_number(p.a) + ", b = " + csv_number(p.b) + ", c = " + csv_number(p.c);
}

inline void run_straighten(ExperimentContext& ctx) {
    const double r = ctx.num("r"), l = ctx.num("l"), alpha = ctx.num("alpha");
    const PolyCurve pert = ctx.config.inputs.empty()
                               ? fixtures::sawtooth(int(ctx.integer("teeth")), ctx.num("amp"), l)
                               : load_curve(ctx.input());
    StraighteningOptions opt;
    opt.intervals_per_l = std::size_t(ctx.integer("intervals_per_l"));
    opt.domain_factor = ctx.num("domain_factor");
    opt.slope_tolerance = ctx.num("slope_tolerance");
    opt.barrier_shifts = ctx.list("barrier_shifts");
    const auto rep = straightening_experiment(r, l, alpha, pert, opt);
    ctx.write_json("straightening.json", report_to_json(rep));
    std::ostringstream csv;
    csv << "x,y\n";
    for (std::size_t i = 0; i < rep.final_state.heights.size(); ++i)
        csv << csv_number(rep.final_state.x0 + double(i) * rep.final_state.dx) << ',' << csv_number(rep.final_state.heights[i]) << '\n';
    ctx.write_text("final_graph.csv", csv.str());
    ctx.check("alpha-Lipschitz at T", rep.passed, "max slope " + csv_number(rep.max_slope_at_T));
    ctx.check("barrier single crossing", rep.barrier_violations == 0, std::to_string(rep.barrier_violations));
    ctx.report = "T = " + csv_number(rep.T) + ", max slope " + csv_number(rep.max_slope_at_T);
}

inline Vec2 seed_point(const ExperimentContext& ctx, const RasterSet& K) {
    const auto s = ctx.list("seed_point");
    if (s.size() == 2) return {s[0], s[1]};
    if (!s.empty()) throw UsageError("seed_point must have two coordinates");
    // Default: the free raster point farthest from the frame that lies in a
    // bounded complement component, else the raster center.
    int n = 0;
    const auto labels = label_components(K, false, &n);
    std::vector<bool> unbounded(std::size_t(n) + 1, false);
    for (std::size_t r = 0; r < K.rows(); ++r)
        for (std::size_t c = 0; c < K.cols(); ++c)
            if (r == 0 || c == 0 || r + 1 == K.rows() || c + 1 == K.cols()) unbounded[std::size_t(labels[r * K.cols() + c])] = true;
    const Vec2 center = K.point(std::ptrdiff_t(K.rows() / 2), std::ptrdiff_t(K.cols() / 2));
    Vec2 best = center;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < K.rows(); ++r)
        for (std::size_t c = 0; c < K.cols(); ++c) {
            const int l = labels[r * K.cols() + c];
            if (!l || unbounded[std::size_t(l)]) continue;
            const Vec2 p = K.point(std::ptrdiff_t(r), std::ptrdiff_t(c));
            if (distance(p, center) < best_d) { best_d = distance(p, center); best = p; }
        }
    return best + Vec2{0.25 * K.spacing(), 0.25 * K.spacing()};
}

inline void run_approximate(ExperimentContext& ctx) {
    const RasterSet K = load_raster(ctx.input(), ctx.num("spacing"));
    const Vec2 seed = seed_point(ctx, K);
    const double r = ctx.num("r");
    const auto budget = std::size_t(ctx.integer("budget"));
    std::vector<Exhaustion> levels;
    nlohmann::json out{{"seed", {seed.x, seed.y}}, {"r", r}, {"levels", nlohmann::json::array()}};
    std::optional<std::vector<ConnectivitySample>> conn;
    if (raster_connected(K)) conn = local_connectivity_estimate(K, default_scales(K));
    bool nested = true, embedded = true, bounded = true;
    for (double nd : ctx.list("levels")) {
        const int n = int(nd);
        auto ex = grid_exhaustion(K, seed, n);
        nlohmann::json lj{{"n", n}, {"cells", ex.region.cells.size()}, {"area", ex.region.area()}, {"unbounded", ex.unbounded}};
        if (!levels.empty() && levels.back().region.level + 1 == n) {
            const bool ok = regions_nested(levels.back().region, ex.region);
            lj["nested_in_next"] = ok;
            nested = nested && ok;
        }
        if (ex.boundary) {
            const auto I = self_intersection_number(*ex.boundary);
            const auto m = r_multiplicity(*ex.boundary, r, budget).value;
            lj["self_intersection_number"] = I;
            lj["r_multiplicity"] = m;
            embedded = embedded && I == 0;
            ctx.write_json("boundary_n" + std::to_string(n) + ".json", curve_to_json(*ex.boundary));
            if (conn) {
                const auto b = multiplicity_bound_check(K, *ex.boundary, r, *conn, budget);
                lj["bound"] = {{"value", b.bound}, {"ok", b.ok}, {"inconclusive", b.inconclusive}, {"s", b.s}, {"diam_k", b.diam_k}};
                if (!b.inconclusive) bounded = bounded && b.ok;
            }
        }
        out["levels"].push_back(lj);
        levels.push_back(std::move(ex));
    }
    ctx.write_json("approximation.json", out);
    ctx.check("regions nest", nested);
    ctx.check("boundaries embedded", embedded);
    ctx.check("multiplicity bound", bounded);
    ctx.report = std::to_string(levels.size()) + " levels";
}

inline void run_levelset(ExperimentContext& ctx) {
    const RasterSet K = load_raster(ctx.input(), ctx.num("spacing"));
    const int n = int(ctx.integer("n"));
    const auto ts = acceptance_detail::time_grid(ctx.num("dt"), ctx.num("t_end"));
    LevelSetOptions opt;
    opt.build_masks = ctx.flag("masks");
    const auto run = level_set_evolve(K, ts, n, opt);
    std::ostringstream csv;
    csv << "t,measure,component_count,N_t,M_t,max_abs_curvature\n";
    for (std::size_t i = 0; i < run.states.size(); ++i) {
        const auto& st = run.states[i];
        double kmax = 0.0;
        nlohmann::json bj = nlohmann::json::array();
        for (std::size_t q = 0; q < st.component_boundaries.size(); ++q) {
            for (const auto& k : curvature_vectors(st.component_boundaries[q])) kmax = std::max(kmax, norm(k));
            bj.push_back({{"component", st.component_ids[q]},
                          {"unbounded", run.components[st.component_ids[q]].unbounded},
                          {"curve", curve_to_json(st.component_boundaries[q])}});
        }
        csv << csv_number(st.t) << ',' << csv_number(st.measure) << ',' << st.component_boundaries.size() << ','
            << st.N_t << ',' << st.M_t << ',' << csv_number(kmax) << '\n';
        char dir[32];
        std::snprintf(dir, sizeof dir, "states/%04zu", i);
        ctx.write_json(std::string(dir) + "/boundaries.json", {{"t", st.t}, {"boundaries", bj}});
        if (st.K_t_mask) ctx.write_json(std::string(dir) + "/mask.json", raster_to_json(*st.K_t_mask));
    }
    ctx.write_text("summary.csv", csv.str());
    const auto predicted = classify_fate(K);
    const double t_obs = std::min(0.02, ts.back());
    const auto observed = observe_fate(run, t_obs);
    nlohmann::json fate{{"predicted", to_string(predicted.fate)},
                        {"complement_components", predicted.complement_component_count},
                        {"measure_estimate", predicted.measure_estimate_of_K},
                        {"measure_quantum", predicted.measure_quantum},
                        {"observed", to_string(observed.fate)},
                        {"observed_at", t_obs},
                        {"boundary_count", observed.boundary_count},
                        {"measure_slope", observed.measure_slope}};
    const double T = ctx.num("T") > 0 ? ctx.num("T") : 0.5 * ts.back();
    try {
        const auto ad = area_derivative_check(run.states, T);
        fate["area_derivative"] = {{"T", T}, {"left_slope", ad.left_slope}, {"right_slope", ad.right_slope},
                                   {"N_T", ad.N_T}, {"M_T", ad.M_T}, {"left_ok", ad.left_ok},
                                   {"right_ok", ad.right_ok}, {"inconclusive", ad.inconclusive}};
        if (!ad.inconclusive) ctx.check("area derivative law", ad.left_ok && ad.right_ok);
    } catch (const InvalidInput& e) {
        fate["area_derivative"] = {{"skipped", e.what()}};
    }
    ctx.write_json("fate.json", fate);
    ctx.check("fate consistency", predicted.fate == observed.fate,
              std::string(to_string(predicted.fate)) + " vs " + to_string(observed.fate));
    ctx.report = std::string("predicted ") + to_string(predicted.fate) + ", observed " + to_string(observed.fate);
}

inline void run_backconv(ExperimentContext& ctx) {
    const PolyCurve J = load_curve(ctx.input());
    BackwardOptions opt;
    opt.level = int(ctx.integer("n"));
    opt.raster_extra_levels = int(ctx.integer("extra_levels"));
    opt.envelope_slack_cells = ctx.num("slack_cells");
    auto ts = ctx.list("t_values");
    std::sort(ts.begin(), ts.end());
    const auto res = backward_convergence_metric(J, ts, opt);
    std::ostringstream csv;
    csv << "t,matched_sup,hausdorff,envelope_ok,envelope_excess,length_gap,inner_length,outer_length\n";
    bool envelope = true, decreasing = true;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& s = res[i];
        csv << csv_number(s.t) << ',' << csv_number(s.matched_sup) << ',' << csv_number(s.hausdorff) << ','
            << (s.envelope_ok ? 1 : 0) << ',' << csv_number(s.envelope_excess) << ',' << csv_number(s.length_gap) << ','
            << csv_number(s.inner_length) << ',' << csv_number(s.outer_length) << '\n';
        envelope = envelope && s.envelope_ok;
        if (i > 0) decreasing = decreasing && res[i - 1].matched_sup < s.matched_sup;
    }
    ctx.write_text("backconv.csv", csv.str());
    ctx.check("envelope", envelope);
    ctx.check("matched sup decreasing as t decreases", decreasing);
    ctx.report = std::to_string(res.size()) + " times";
}

inline void run_acceptance(ExperimentContext& ctx) {
    if (ctx.text("suite") != "primary") throw UsageError("unknown suite: " + ctx.text("suite"));
    std::vector<int> ids;
    for (double d : ctx.list("criteria")) ids.push_back(int(d));
    if (ids.empty())
        for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
    nlohmann::json out = nlohmann::json::array();
    std::string table;
    for (int id : ids) {
        const auto r = run_criterion(id, ctx.config.seed);
        table += format_result(r) + "\n";
        out.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        ctx.check("criterion " + std::to_string(r.id) + " " + r.name, r.passed, r.detail);
    }
    ctx.write_json("acceptance.json", out);
    ctx.report = table;
}

inline void run_make_fixture(ExperimentContext& ctx) {
    nlohmann::json p = ctx.params;
    for (auto it = p.begin(); it != p.end();)
        it = (it.value().is_number() && it.value().get<double>() < 0) ? p.erase(it) : std::next(it);
    const auto f = make_fixture(ctx.text("kind"), p, ctx.config.seed);
    const std::string name = ctx.text("output");
    if (const auto* c = std::get_if<PolyCurve>(&f)) {
        ctx.write_json(name, curve_to_json(*c));
        ctx.report = "curve with " + std::to_string(c->size()) + " vertices";
    } else {
        const auto& k = std::get<RasterSet>(f);
        ctx.write_json(name, raster_to_json(k));
        ctx.report = "raster " + std::to_string(k.rows()) + " x " + std::to_string(k.cols());
    }
}

using PK = ParamKind;

inline const std::map<std::string, Experiment>& registry() {
    static const std::map<std::string, Experiment> reg{
        {"evolve",
         {{{"t_end", PK::number, 0.25, "final time"},
           {"target_edge", PK::number, 2.0 * std::numbers::pi / 512.0, "resampling edge length"},
           {"cfl", PK::number, 0.25, "time step factor (dt = cfl * min_edge^2)"},
           {"record_every", PK::integer, 16, "steps between recorded samples"},
           {"sample_dt", PK::number, 0.0, "record on a uniform time grid instead (0: off)"},
           {"extinction_length", PK::number, 1e-2, "stop when the length drops below this"},
           {"probe_lines", PK::integer, 0, "number of seeded probe lines"},
           {"strip_r", PK::number, 0.0, "strip radius on the probe lines (0: off)"}},
          run_evolve,
          "curve shortening flow of a closed polygon"}},
        {"multiplicity",
         {{{"r", PK::number, 0.5, "scale"},
           {"budget", PK::integer, 64, "number of sampled directions"},
           {"mode", PK::text, "both", "r, tilde or both"}},
          run_multiplicity,
          "r-multiplicity certificates"}},
        {"reaper",
         {{{"r", PK::number, 1.0, "box half-height"},
           {"alpha", PK::number, 1.0, "slope bound"},
           {"l", PK::number, 10.0, "box length for the straightening time"},
           {"samples", PK::integer, 1024, "residual samples"}},
          run_reaper,
          "grim reaper constants and guarantees"}},
        {"straighten",
         {{{"r", PK::number, 0.2, "box half-height"},
           {"l", PK::number, 4.0, "box length"},
           {"alpha", PK::number, 0.5, "slope bound"},
           {"teeth", PK::integer, 8, "sawtooth teeth (without --input)"},
           {"amp", PK::number, 0.2, "sawtooth amplitude (without --input)"},
           {"intervals_per_l", PK::integer, 400, "grid intervals on [0, l]"},
           {"domain_factor", PK::number, 1.0, "truncated domain [-f l, 2 f l]"},
           {"slope_tolerance", PK::number, 0.05, "relative slope tolerance"},
           {"barrier_shifts", PK::number_list, nlohmann::json::array({0.0}), "reaper translates checked for single crossings"}},
          run_straighten,
          "straightening of a graph perturbation"}},
        {"approximate",
         {{{"levels", PK::number_list, nlohmann::json::array({4, 5, 6}), "dyadic levels n"},
           {"seed_point", PK::number_list, nlohmann::json::array(), "x y of the exhaustion seed"},
           {"spacing", PK::number, 1.0 / 256, "raster spacing for curve inputs"},
           {"r", PK::number, 0.5, "multiplicity scale"},
           {"budget", PK::integer, 64, "multiplicity directions"}},
          run_approximate,
          "grid exhaustion of a complement component"}},
        {"levelset",
         {{{"n", PK::integer, 6, "dyadic level"},
           {"t_end", PK::number, 0.05, "final time"},
           {"dt", PK::number, 0.0025, "state spacing"},
           {"spacing", PK::number, 1.0 / 256, "raster spacing for curve inputs"},
           {"T", PK::number, 0.0, "time of the area-derivative check (0: t_end / 2)"},
           {"masks", PK::boolean, false, "write K_t masks"}},
          run_levelset,
          "level set flow of a compact set"}},
        {"backconv",
         {{{"n", PK::integer, 7, "dyadic level"},
           {"t_values", PK::number_list, nlohmann::json::array({0.08, 0.04, 0.02, 0.01}), "times"},
           {"extra_levels", PK::integer, 2, "raster spacing 2^-(n + extra)"},
           {"slack_cells", PK::number, 2.0, "envelope slack in cells"}},
          run_backconv,
          "backward convergence of a Jordan curve"}},
        {"acceptance",
         {{{"suite", PK::text, "primary", "suite name"},
           {"criteria", PK::number_list, nlohmann::json::array(), "criterion ids (empty: all)"}},
          run_acceptance,
          "acceptance criteria"}},
        {"make-fixture",
         {{{"kind", PK::text, nullptr, "fixture kind"},
           {"output", PK::text, "fixture.json", "output file name"},
           {"n", PK::number, -1.0, "vertex count"},
           {"radius", PK::number, -1.0, "circle/annulus radius"},
           {"a", PK::number, -1.0, "ellipse semi-axis"},
           {"b", PK::number, -1.0, "ellipse semi-axis"},
           {"per_side", PK::number, -1.0, "star subdivisions"},
           {"teeth", PK::number, -1.0, "sawtooth teeth"},
           {"amp", PK::number, -1.0, "sawtooth amplitude"},
           {"l", PK::number, -1.0, "sawtooth length"},
           {"iter", PK::number, -1.0, "Koch iterations"},
           {"k", PK::number, -1.0, "comb teeth or wedge petals"},
           {"r", PK::number, -1.0, "comb scale"},
           {"len", PK::number, -1.0, "segment length"},
           {"gap", PK::number, -1.0, "spiral arm gap"},
           {"turns", PK::number, -1.0, "spiral turns"},
           {"width", PK::number, -1.0, "annulus width"},
           {"jitter", PK::number, -1.0, "relative vertex jitter"},
           {"raster_spacing", PK::number, -1.0, "rasterize at this spacing"}},
          run_make_fixture,
          "write a fixture curve or raster"}},
    };
    return reg;
}

inline nlohmann::json coerce(const ParamSpec& spec, const nlohmann::json& v) {
    auto bad = [&]() -> UsageError { return UsageError("parameter " + spec.name + " has the wrong type"); };
    switch (spec.kind) {
        case ParamKind::number:
            if (!v.is_number()) throw bad();
            return v.get<double>();
        case ParamKind::integer:
            if (!v.is_number() || v.get<double>() != std::floor(v.get<double>())) throw bad();
            return v.get<long>();
        case ParamKind::text:
            if (!v.is_string()) throw bad();
            return v;
        case ParamKind::boolean:
            if (!v.is_boolean()) throw bad();
            return v;
        case ParamKind::number_list:
            if (!v.is_array()) throw bad();
            for (const auto& x : v)
                if (!x.is_number()) throw bad();
            return v;
    }
    throw bad();
}

}  // namespace experiments_detail

inline std::vector<std::string> experiment_names() {
    std::vector<std::string> names;
    for (const auto& [name, e] : experiments_detail::registry()) names.push_back(name);
    return names;
}

inline const std::vector<ParamSpec>& experiment_schema(const std::string& name) {
    const auto& reg = experiments_detail::registry();
    const auto it = reg.find(name);
    if (it == reg.end()) throw UsageError("unknown experiment: " + name);
    return it->second.schema;
}

/// Parses a command-line string into a parameter value of the given kind.
inline nlohmann::json parse_param_text(const ParamSpec& spec, const std::string& text) {
    try {
        switch (spec.kind) {
            case ParamKind::text: return text;
            case ParamKind::boolean:
                if (text == "true" || text == "1") return true;
                if (text == "false" || text == "0") return false;
                break;
            case ParamKind::number_list: {
                nlohmann::json arr = nlohmann::json::array();
                std::stringstream ss(text);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) arr.push_back(std::stod(item));
                return arr;
            }
            case ParamKind::integer: {
                std::size_t pos = 0;
                const long v = std::stol(text, &pos);
                if (pos == text.size()) return v;
                break;
            }
            case ParamKind::number: {
                std::size_t pos = 0;
                const double v = std::stod(text, &pos);
                if (pos == text.size()) return v;
                break;
            }
        }
    } catch (const std::logic_error&) {
    }
    std::string flag = spec.name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    throw UsageError("cannot parse --" + flag + " value '" + text + "'");
}

/// Fills defaults and type-checks the parameters against the schema.
inline nlohmann::json validate_parameters(const std::string& name, const nlohmann::json& given) {
    const auto& schema = experiment_schema(name);
    if (!given.is_object()) throw UsageError("parameters must be an object");
    for (const auto& [k, v] : given.items()) {
        (void)v;
        if (std::none_of(schema.begin(), schema.end(), [&](const ParamSpec& s) { return s.name == k; }))
            throw UsageError("unknown parameter for " + name + ": " + k);
    }
    nlohmann::json out = nlohmann::json::object();
    for (const auto& spec : schema) {
        if (given.contains(spec.name)) out[spec.name] = experiments_detail::coerce(spec, given[spec.name]);
        else if (spec.fallback.is_null()) throw UsageError("missing required parameter: " + spec.name);
        else out[spec.name] = spec.fallback;
    }
    return out;
}

/// Runs an experiment, writes its artifacts and manifest.json, and returns
/// exit code 0 (all checks pass) or 1 (some check failed). Usage errors
/// propagate as UsageError.
inline RunOutcome run(const ExperimentConfig& config, std::string* report = nullptr) {
    const auto& reg = experiments_detail::registry();
    const auto it = reg.find(config.name);
    if (it == reg.end()) throw UsageError("unknown experiment: " + config.name);
    const auto params = validate_parameters(config.name, config.parameters);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentContext ctx(config, params);
    it->second.run(ctx);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    RunOutcome outcome;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : ctx.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        if (!c.passed) outcome.exit_code = 1;
    }
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [path, hash] : ctx.files) {
        files.push_back({{"path", path}, {"fnv1a64", hash}});
        outcome.files.push_back(path);
    }
    const nlohmann::json manifest{{"tool", "curveflow"},
                                  {"version", tool_version},
                                  {"config",
                                   {{"name", config.name},
                                    {"inputs", config.inputs},
                                    {"parameters", params},
                                    {"output_dir", config.output_dir},
                                    {"seed", config.seed}}},
                                  {"wall_time_s", wall},
                                  {"checks", checks},
                                  {"files", files}};
    write_json_file((std::filesystem::path(config.output_dir) / "manifest.json").string(), manifest);
    outcome.checks = ctx.checks;
    if (report) *report = ctx.report;
    return outcome;
}

/// Reads {"name", "inputs", "parameters", "output_dir", "seed"} (all optional).
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    if (j.contains("name")) cfg.name = j["name"].get<std::string>();
    if (j.contains("inputs")) cfg.inputs = j["inputs"].get<std::vector<std::string>>();
    if (j.contains("parameters")) cfg.parameters = j["parameters"];
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

}  // namespace curveflow
