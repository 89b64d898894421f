#pragma once

// Coarse crossing counts of a closed curve against strips around lines:
// the strip multiplicity M_{r,l}, its variant tilde-M_{r,l}, their sups over
// lines, and the multi-scale greedy reparametrization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveflow/error.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/parallel.hpp"

namespace curveflow {

namespace detail {

// A connected component of the parameter set where |d| < threshold, d being
// the signed distance along the curve (piecewise linear in the parameter).
struct StripComponent {
    double lo = 0.0;  // inf of d over the closure of the component
    double hi = 0.0;  // sup of d over the closure of the component
};

// Splits the closed curve with vertex distances d into components of
// {|d| < threshold}. Closure values include the boundary hit (+-threshold).
inline std::vector<StripComponent> strip_components(const std::vector<double>& d, bool closed,
                                                    double threshold) {
    const std::size_t n = d.size();
    auto side = [&](double v) { return v <= -threshold ? -1 : (v >= threshold ? 1 : 0); };
    std::vector<StripComponent> out;

    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (side(d[i]) != 0) { start = i; break; }
    if (start == n) {
        // Entirely inside: one component (the whole parameter circle or interval).
        auto [mn, mx] = std::minmax_element(d.begin(), d.end());
        out.push_back({*mn, *mx});
        return out;
    }

    bool open = false;
    StripComponent cur;
    auto include = [&](double v) { cur.lo = std::min(cur.lo, v); cur.hi = std::max(cur.hi, v); };

    std::size_t steps;
    std::size_t first;
    if (closed) {
        steps = n;
        first = start;
    } else {
        steps = n - 1;
        first = 0;
        if (side(d[0]) == 0) {
            open = true;
            cur = {d[0], d[0]};
        }
    }
    for (std::size_t k = 0; k < steps; ++k) {
        const std::size_t i = (first + k) % n, j = (i + 1) % n;
        const int si = side(d[i]), sj = side(d[j]);
        if (si != 0 && sj != 0) {
            if (si != sj) out.push_back({-threshold, threshold});
        } else if (si != 0 && sj == 0) {
            open = true;
            cur = {si * threshold, si * threshold};
            include(d[j]);
        } else if (si == 0 && sj == 0) {
            include(d[j]);
        } else {
            include(sj * threshold);
            out.push_back(cur);
            open = false;
        }
    }
    if (open) out.push_back(cur);
    return out;
}

inline std::vector<double> signed_distances(const PolyCurve& c, const Line& line) {
    std::vector<double> d(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) d[i] = line.signed_distance(c[i]);
    return d;
}

inline void require_positive_r(double r) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
}

}  // namespace detail

/// M_{r,l}: components of the curve's preimage of the open strip of radius
/// r/2 around `line` whose image closure reaches both boundary lines.
inline std::size_t strip_multiplicity(const PolyCurve& c, const Line& line, double r) {
    detail::require_positive_r(r);
    const double half = r / 2.0, eps = c.eps();
    std::size_t count = 0;
    for (const auto& comp : detail::strip_components(detail::signed_distances(c, line), c.closed(), half))
        if (comp.lo <= -half + eps && comp.hi >= half - eps) ++count;
    return count;
}

/// tilde-M_{r,l}: components of the preimage of the open 2r-strip whose
/// image meets the closed r-strip.
inline std::size_t tilde_strip_multiplicity(const PolyCurve& c, const Line& line, double r) {
    detail::require_positive_r(r);
    const double eps = c.eps();
    std::size_t count = 0;
    for (const auto& comp : detail::strip_components(detail::signed_distances(c, line), c.closed(), 2.0 * r)) {
        const double closest = (comp.lo <= 0.0 && comp.hi >= 0.0) ? 0.0
                                                                  : std::min(std::abs(comp.lo), std::abs(comp.hi));
        if (closest <= r + eps) ++count;
    }
    return count;
}

enum class CertificateMode { exact_per_direction, sampled_lower_bound };

struct WitnessLine {
    Line line;
    std::size_t count = 0;
};

struct MultiplicityCertificate {
    std::size_t value = 0;
    std::vector<WitnessLine> witness_lines;  // best line of each sampled direction
    CertificateMode mode = CertificateMode::exact_per_direction;
    std::size_t directions_used = 0;
    std::string offsets_policy;
};

namespace detail {

// Max of `count(line)` over all offsets for one direction. The count is
// piecewise constant in the offset with breakpoints at vertex projections
// shifted by the listed strip radii; evaluating at every breakpoint and every
// midpoint between consecutive breakpoints is exact.
template <class Count>
WitnessLine best_offset(const PolyCurve& c, double angle, std::initializer_list<double> shifts, Count&& count) {
    const Line base = Line::at_angle(angle, 0.0);
    std::vector<double> breaks;
    breaks.reserve(c.size() * 2 * shifts.size());
    for (const auto& p : c.vertices()) {
        const double proj = dot(base.normal(), p);
        for (double s : shifts) {
            breaks.push_back(proj + s);
            breaks.push_back(proj - s);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    WitnessLine best{base, 0};
    auto consider = [&](double off) {
        Line l = base;
        l.offset = off;
        const std::size_t k = count(l);
        if (k > best.count) best = {l, k};
    };
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        consider(breaks[i]);
        if (i + 1 < breaks.size()) consider(0.5 * (breaks[i] + breaks[i + 1]));
    }
    return best;
}

template <class Count>
MultiplicityCertificate sup_over_directions(const PolyCurve& c, std::size_t budget,
                                            std::initializer_list<double> shifts, Count&& count) {
    if (budget < 1) throw InvalidInput("direction_budget must be >= 1");
    MultiplicityCertificate cert;
    cert.directions_used = budget;
    cert.mode = CertificateMode::exact_per_direction;
    cert.offsets_policy = "vertex_projections_pm_radius_with_midpoints";
    cert.witness_lines.resize(budget);
    parallel_for(budget, [&](std::size_t k) {
        const double angle = std::numbers::pi * double(k) / double(budget);
        cert.witness_lines[k] = best_offset(c, angle, shifts, count);
    });
    // Lowest direction index wins ties.
    for (const auto& w : cert.witness_lines) cert.value = std::max(cert.value, w.count);
    return cert;
}

}  // namespace detail

/// Sampled sup over lines of M_{r,l}: exact over offsets for each of
/// `direction_budget` evenly spaced directions in [0, pi), hence a lower
/// bound for the sup over all lines.
inline MultiplicityCertificate r_multiplicity(const PolyCurve& c, double r, std::size_t direction_budget) {
    detail::require_positive_r(r);
    return detail::sup_over_directions(c, direction_budget, {r / 2.0},
                                       [&](const Line& l) { return strip_multiplicity(c, l, r); });
}

/// Same sampled sup for tilde-M_{r,l}.
inline MultiplicityCertificate tilde_r_multiplicity(const PolyCurve& c, double r, std::size_t direction_budget) {
    detail::require_positive_r(r);
    return detail::sup_over_directions(c, direction_budget, {r, 2.0 * r},
                                       [&](const Line& l) { return tilde_strip_multiplicity(c, l, r); });
}

inline const char* to_string(CertificateMode m) {
    return m == CertificateMode::exact_per_direction ? "exact_per_direction" : "sampled_lower_bound";
}

inline nlohmann::json certificate_to_json(const MultiplicityCertificate& cert) {
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& w : cert.witness_lines)
        lines.push_back({{"dir", {w.line.direction.x, w.line.direction.y}},
                         {"offset", w.line.offset},
                         {"count", w.count}});
    return {{"value", cert.value},
            {"mode", to_string(cert.mode)},
            {"directions_used", cert.directions_used},
            {"offsets_policy", cert.offsets_policy},
            {"witness_lines", std::move(lines)}};
}

// ---------------------------------------------------------------------------

struct ComparabilityEntry {
    Line line;
    std::size_t m = 0;
    std::size_t m_tilde = 0;
    bool ok = false;  // m/2 <= m_tilde <= m
};

/// Linewise check of m/2 <= tilde-m <= m. Violations are reported, not thrown.
inline std::vector<ComparabilityEntry> comparability_report(const PolyCurve& c, double r,
                                                            const std::vector<Line>& lines) {
    std::vector<ComparabilityEntry> out;
    out.reserve(lines.size());
    for (const auto& l : lines) {
        ComparabilityEntry e{l, strip_multiplicity(c, l, r), tilde_strip_multiplicity(c, l, r), false};
        e.ok = e.m <= 2 * e.m_tilde && e.m_tilde <= e.m;
        out.push_back(e);
    }
    return out;
}

struct GlobalComparability {
    std::size_t m = 0;
    std::size_t m_tilde = 0;
    bool ok = false;
};

/// Sup-level comparability over the sampled directions.
inline GlobalComparability comparability_global(const PolyCurve& c, double r, std::size_t direction_budget) {
    GlobalComparability g;
    g.m = r_multiplicity(c, r, direction_budget).value;
    g.m_tilde = tilde_r_multiplicity(c, r, direction_budget).value;
    g.ok = g.m <= 2 * g.m_tilde && g.m_tilde <= g.m;
    return g;
}

// ---------------------------------------------------------------------------
// Reparametrization

/// Strictly decreasing list of positive radii.
class ScaleList {
public:
    explicit ScaleList(std::vector<double> radii) : radii_(std::move(radii)) {
        if (radii_.empty()) throw InvalidInput("scale list is empty");
        for (std::size_t i = 0; i < radii_.size(); ++i) {
            if (!(radii_[i] > 0.0)) throw InvalidInput("scales must be positive");
            if (i > 0 && !(radii_[i] < radii_[i - 1])) throw InvalidInput("scales must strictly decrease");
        }
    }
    const std::vector<double>& radii() const { return radii_; }

private:
    std::vector<double> radii_;
};

struct ParameterAnchor {
    double angle = 0.0;
    std::size_t vertex = 0;
    std::size_t level = 0;  // 0-based scale index at which the anchor was chosen
};

struct ScaleModulus {
    double radius = 0.0;
    double delta = 0.0;
    std::size_t max_count = 0;  // n_1 at level 0, max gap subdivision count after
    bool verified = false;      // parameter gap < delta => image distance < radius on all vertex pairs
};

struct Reparametrization {
    std::vector<ParameterAnchor> anchors;
    std::vector<double> vertex_angles;  // angle in [0, 2 pi) for every vertex
    std::vector<ScaleModulus> modulus;
};

namespace detail {

// Greedy maximal ordered set in vertex range [start, start + span] (cyclic),
// consecutive image distances >= step, endpoint start + span closing the gap.
inline std::vector<std::size_t> greedy_chain(const PolyCurve& c, std::size_t start, std::size_t span, double step) {
    const std::size_t n = c.size();
    std::vector<std::size_t> chosen{start};
    for (std::size_t k = 1; k < span; ++k) {
        const std::size_t idx = (start + k) % n;
        if (distance(c[idx], c[chosen.back() % n]) >= step) chosen.push_back(start + k);
    }
    const std::size_t end = (start + span) % n;
    if (chosen.size() > 1 && distance(c[chosen.back() % n], c[end]) < step) chosen.pop_back();
    return chosen;  // unreduced indices in [start, start + span)
}

}  // namespace detail

/// Multi-scale greedy reparametrization: at each scale r_k a maximal chain of
/// points with consecutive image distances >= r_k / 8 is chosen inside every
/// gap of the previous level and spread evenly in angle.
inline Reparametrization canonical_reparametrize(const PolyCurve& c, const ScaleList& scales) {
    if (!c.closed()) throw InvalidInput("reparametrization needs a closed curve");
    const std::size_t n = c.size();
    const double two_pi = 2.0 * std::numbers::pi;

    struct Gap { std::size_t start; std::size_t span; double a0; double a1; };
    Reparametrization out;

    auto level0 = detail::greedy_chain(c, 0, n, scales.radii()[0] / 8.0);
    if (level0.size() < 3)
        throw InvalidInput("scale too large for the curve (fewer than 3 greedy points)");
    std::vector<Gap> gaps;
    {
        const std::size_t m = level0.size();
        for (std::size_t i = 0; i < m; ++i) {
            const double a = two_pi * double(i) / double(m);
            out.anchors.push_back({a, level0[i] % n, 0});
            const std::size_t next = i + 1 < m ? level0[i + 1] : n;
            gaps.push_back({level0[i], next - level0[i], a, two_pi * double(i + 1) / double(m)});
        }
        out.modulus.push_back({scales.radii()[0], 0.0, m, false});
    }

    for (std::size_t level = 1; level < scales.radii().size(); ++level) {
        const double step = scales.radii()[level] / 8.0;
        std::vector<Gap> next_gaps;
        std::size_t max_count = 1;
        for (const auto& g : gaps) {
            auto chain = detail::greedy_chain(c, g.start, g.span, step);
            const std::size_t m = chain.size();
            max_count = std::max(max_count, m);
            for (std::size_t j = 0; j < m; ++j) {
                const double a = g.a0 + (g.a1 - g.a0) * double(j) / double(m);
                if (j > 0) out.anchors.push_back({a, chain[j] % n, level});
                const std::size_t end = j + 1 < m ? chain[j + 1] : g.start + g.span;
                next_gaps.push_back({chain[j], end - chain[j], a, g.a0 + (g.a1 - g.a0) * double(j + 1) / double(m)});
            }
        }
        gaps = std::move(next_gaps);
        out.modulus.push_back({scales.radii()[level], 0.0, max_count, false});
    }

    // Vertices between finest anchors: interpolate by arclength.
    out.vertex_angles.assign(n, 0.0);
    for (const auto& g : gaps) {
        double total = 0.0;
        for (std::size_t k = 0; k < g.span; ++k) total += c.edge_length((g.start + k) % n);
        double acc = 0.0;
        for (std::size_t k = 0; k < g.span; ++k) {
            out.vertex_angles[(g.start + k) % n] = g.a0 + (g.a1 - g.a0) * (total > 0.0 ? acc / total : 0.0);
            acc += c.edge_length((g.start + k) % n);
        }
    }
    std::sort(out.anchors.begin(), out.anchors.end(),
              [](const ParameterAnchor& a, const ParameterAnchor& b) { return a.angle < b.angle; });

    // delta_k = 2 pi / (n_1 * max n_2 * ... * max n_k), then verify a posteriori.
    double denom = 1.0;
    for (auto& mod : out.modulus) {
        denom *= double(mod.max_count);
        mod.delta = two_pi / denom;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t k = 1; k < n; ++k) {
                const std::size_t j = (i + k) % n;
                double gap = out.vertex_angles[j] - out.vertex_angles[i];
                if (gap < 0.0) gap += two_pi;
                if (gap >= mod.delta) break;
                if (distance(c[i], c[j]) >= mod.radius) { ok = false; break; }
            }
        mod.verified = ok;
    }
    return out;
}

/// Largest delta such that normalized-arclength parameters (scaled to
/// [0, 2 pi)) closer than delta map to vertices closer than `radius`.
inline double modulus_of_continuity(const PolyCurve& c, double radius) {
    const std::size_t n = c.size();
    ArclengthTable table(c);
    const double two_pi = 2.0 * std::numbers::pi;
    double delta = two_pi;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(c[i], c[j]) < radius) continue;
            double gap = two_pi * (table.vertex_parameter(j) - table.vertex_parameter(i));
            gap = std::min(gap, two_pi - gap);
            delta = std::min(delta, gap);
        }
    return delta;
}

}  // namespace curveflow
