#pragma once

// Dyadic-grid exhaustion of a complement component of a rasterized compact
// set, boundary extraction, the sampled local-connectivity function and the
// multiplicity bound it implies for the exhaustion boundaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "curveflow/error.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/multiplicity.hpp"
#include "curveflow/raster.hpp"

namespace curveflow {

struct CellIndex {
    std::ptrdiff_t row = 0;
    std::ptrdiff_t col = 0;
    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Edge-connected union of closed dyadic squares of side 2^-level.
struct GridRegion {
    int level = 0;
    std::vector<CellIndex> cells;  // sorted
    Vec2 seed{};
    Vec2 origin{};                 // world position of cell (0, 0)'s lower-left corner
    double cell = 1.0;

    double area() const { return double(cells.size()) * cell * cell; }
    bool contains(CellIndex c) const { return std::binary_search(cells.begin(), cells.end(), c); }
    CellIndex cell_of(Vec2 p) const {
        return {std::ptrdiff_t(std::floor((p.y - origin.y) / cell)), std::ptrdiff_t(std::floor((p.x - origin.x) / cell))};
    }
};

struct Exhaustion {
    GridRegion region;
    std::optional<PolyCurve> boundary;  // empty when the region is empty
    bool unbounded = false;             // region touches the raster frame
    std::vector<PolyCurve> loops;       // every boundary loop of the cell union
};

namespace detail {

inline std::size_t cells_per_side(const RasterSet& k, int level) {
    const double ratio = std::ldexp(1.0, -level) / k.spacing();
    const auto m = static_cast<std::size_t>(std::llround(ratio));
    if (m < 2 || std::abs(ratio - double(m)) > 1e-9 * ratio)
        throw InvalidInput("level not resolvable: 2^-n must be an integer multiple >= 2 of the raster spacing");
    return m;
}

// 2D prefix sums of the occupancy for O(1) closed-cell queries.
class OccupancySums {
public:
    explicit OccupancySums(const RasterSet& k) : cols_(k.cols() + 1), sums_((k.rows() + 1) * (k.cols() + 1), 0) {
        for (std::size_t r = 0; r < k.rows(); ++r)
            for (std::size_t c = 0; c < k.cols(); ++c)
                sums_[(r + 1) * cols_ + c + 1] = sums_[r * cols_ + c + 1] + sums_[(r + 1) * cols_ + c] -
                                                 sums_[r * cols_ + c] + (k.at(std::ptrdiff_t(r), std::ptrdiff_t(c)) ? 1 : 0);
    }
    // Occupied points with row in [r0, r1] and col in [c0, c1] (inclusive).
    std::int64_t count(std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) const {
        return sums_[(r1 + 1) * cols_ + c1 + 1] - sums_[r0 * cols_ + c1 + 1] - sums_[(r1 + 1) * cols_ + c0] +
               sums_[r0 * cols_ + c0];
    }

private:
    std::size_t cols_;
    std::vector<std::int64_t> sums_;
};

// Traces the boundary loops of a set of unit cells on the integer lattice.
// Loops keep the region on the left (outer loops counter-clockwise, holes
// clockwise). At saddle vertices the loop turns around the cell it is
// wrapping (region cells are edge-connected only) and the vertex is pulled
// `inset` into that cell so loops stay embedded.
inline std::vector<std::vector<Vec2>> trace_cell_loops(const std::vector<std::vector<std::uint8_t>>& in, double inset) {
    const auto rows = std::ptrdiff_t(in.size());
    const auto cols = rows ? std::ptrdiff_t(in[0].size()) : 0;
    auto region = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
        return r >= 0 && c >= 0 && r < rows && c < cols && in[std::size_t(r)][std::size_t(c)];
    };
    // Directions: 0 east, 1 north, 2 west, 3 south.
    static constexpr std::ptrdiff_t dx[4] = {1, 0, -1, 0};
    static constexpr std::ptrdiff_t dy[4] = {0, 1, 0, -1};
    // Outgoing directed boundary edges keyed by lattice vertex (x = col, y = row).
    struct Key {
        std::ptrdiff_t x, y;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return std::hash<std::int64_t>()((std::int64_t(k.x) << 32) ^ std::int64_t(k.y)); }
    };
    std::unordered_map<Key, std::array<bool, 4>, KeyHash> out;
    std::vector<std::pair<Key, int>> order;
    auto add = [&](std::ptrdiff_t x, std::ptrdiff_t y, int d) {
        auto& slot = out[{x, y}];
        if (!slot[d]) order.push_back({{x, y}, d});
        slot[d] = true;
    };
    for (std::ptrdiff_t r = 0; r < rows; ++r)
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            if (!region(r, c)) continue;
            if (!region(r - 1, c)) add(c, r, 0);          // bottom side, heading east
            if (!region(r, c + 1)) add(c + 1, r, 1);      // right side, heading north
            if (!region(r + 1, c)) add(c + 1, r + 1, 2);  // top side, heading west
            if (!region(r, c - 1)) add(c, r + 1, 3);      // left side, heading south
        }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first.y < b.first.y || (a.first.y == b.first.y && (a.first.x < b.first.x ||
                                                                     (a.first.x == b.first.x && a.second < b.second)));
    });

    std::unordered_map<Key, std::array<bool, 4>, KeyHash> used;
    std::vector<std::vector<Vec2>> loops;
    for (const auto& [start, start_dir] : order) {
        if (used[start][start_dir]) continue;
        std::vector<Vec2> loop;
        Key v = start;
        int d = start_dir;
        do {
            used[v][d] = true;
            const Key w{v.x + dx[d], v.y + dy[d]};
            const auto& slots = out[w];
            int next = -1;
            for (int cd : {(d + 1) % 4, d, (d + 3) % 4})  // left, straight, right
                if (slots[cd]) { next = cd; break; }
            if (next < 0) throw Error("broken boundary loop");
            const bool saddle = slots[(d + 1) % 4] && slots[(d + 3) % 4];
            Vec2 p{double(w.x), double(w.y)};
            if (saddle) {
                // Pull into the wrapped cell: left normals of both edges.
                const Vec2 n1{double(-dy[d]), double(dx[d])}, n2{double(-dy[next]), double(dx[next])};
                p += inset * (n1 + n2);
            }
            loop.push_back(p);
            v = w;
            d = next;
        } while (!(v == start && d == start_dir));
        loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace detail

/// Cells of side 2^-level that miss K and are edge-reachable from the seed's
/// cell, with the boundary polygon of their union. For a bounded region the
/// outer loop is returned; for the region touching the raster frame the loop
/// around K (frame boundary discarded).
inline Exhaustion grid_exhaustion(const RasterSet& k, Vec2 seed, int level,
                                  const detail::OccupancySums* sums_in = nullptr) {
    const std::size_t m = detail::cells_per_side(k, level);
    const auto near = k.nearest(seed);
    if (k.at(near.row, near.col)) throw InvalidInput("seed lies in K");

    std::optional<detail::OccupancySums> own;
    if (!sums_in) own.emplace(k);
    const detail::OccupancySums& sums = sums_in ? *sums_in : *own;

    const auto crow = std::ptrdiff_t((k.rows() - 1) / m), ccol = std::ptrdiff_t((k.cols() - 1) / m);
    Exhaustion ex;
    ex.region.level = level;
    ex.region.seed = seed;
    ex.region.origin = k.origin();
    ex.region.cell = std::ldexp(1.0, -level);

    auto blocked = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
        return sums.count(std::size_t(r) * m, std::size_t(c) * m, std::size_t(r + 1) * m, std::size_t(c + 1) * m) > 0;
    };
    const CellIndex s = ex.region.cell_of(seed);
    if (s.row < 0 || s.col < 0 || s.row >= crow || s.col >= ccol) throw InvalidInput("seed outside the raster");
    if (blocked(s.row, s.col)) return ex;

    std::vector<std::vector<std::uint8_t>> in(std::size_t(crow), std::vector<std::uint8_t>(std::size_t(ccol), 0));
    std::vector<std::vector<std::uint8_t>> seen = in;
    std::deque<CellIndex> queue{s};
    seen[std::size_t(s.row)][std::size_t(s.col)] = 1;
    while (!queue.empty()) {
        const CellIndex cur = queue.front();
        queue.pop_front();
        in[std::size_t(cur.row)][std::size_t(cur.col)] = 1;
        ex.region.cells.push_back(cur);
        if (cur.row == 0 || cur.col == 0 || cur.row == crow - 1 || cur.col == ccol - 1) ex.unbounded = true;
        static constexpr std::ptrdiff_t dr[4] = {1, -1, 0, 0}, dc[4] = {0, 0, 1, -1};
        for (int q = 0; q < 4; ++q) {
            const CellIndex nb{cur.row + dr[q], cur.col + dc[q]};
            if (nb.row < 0 || nb.col < 0 || nb.row >= crow || nb.col >= ccol) continue;
            auto& sn = seen[std::size_t(nb.row)][std::size_t(nb.col)];
            if (sn) continue;
            sn = 1;
            if (!blocked(nb.row, nb.col)) queue.push_back(nb);
        }
    }
    std::sort(ex.region.cells.begin(), ex.region.cells.end());

    const double cell = ex.region.cell;
    auto raw = detail::trace_cell_loops(in, 0.1);
    double best_area = 0.0;
    std::size_t best = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        std::vector<Vec2> world;
        world.reserve(raw[i].size());
        for (const auto& p : raw[i]) world.push_back({k.origin().x + p.x * cell, k.origin().y + p.y * cell});
        PolyCurve loop(std::move(world), true);
        const double a = signed_area(loop);
        // Bounded region: outer loop (positive). Frame-touching region: the
        // largest hole (negative), which is the loop around K.
        const double score = ex.unbounded ? -a : a;
        if (score > best_area) { best_area = score; best = i; }
        ex.loops.push_back(std::move(loop));
    }
    if (best < ex.loops.size()) ex.boundary = ex.loops[best];
    return ex;
}

/// True when every cell of `coarse` is covered by the four children in `fine`
/// (both regions built on the same raster, fine one level deeper).
inline bool regions_nested(const GridRegion& coarse, const GridRegion& fine) {
    if (fine.level != coarse.level + 1) throw InvalidInput("regions must be one level apart");
    for (const auto& c : coarse.cells)
        for (std::ptrdiff_t i = 0; i < 2; ++i)
            for (std::ptrdiff_t j = 0; j < 2; ++j)
                if (!fine.contains({2 * c.row + i, 2 * c.col + j})) return false;
    return true;
}

/// Short curve shortening run that rounds the staircase corners of an
/// exhaustion boundary: t = cell^2, edges of half a cell.
inline PolyCurve smooth_boundary(const PolyCurve& boundary, double cell) {
    FlowConfig cfg;
    cfg.target_edge = 0.5 * cell;
    cfg.t_end = cell * cell;
    cfg.cfl = 0.25;
    cfg.keep_curves = false;
    cfg.extinction_length = std::min(1e-3 * length(boundary), 0.5 * length(boundary));
    cfg.record_every = 1u << 30;
    auto traj = evolve(boundary, cfg);
    return traj.final_curve();
}

// ---------------------------------------------------------------------------
// Local connectivity

struct ConnectivitySample {
    double s = 0.0;
    double f = 0.0;  // sampled local-connectivity estimate
};

struct ConnectivityOptions {
    std::size_t max_pairs = 1'000'000;
    std::size_t directions = 24;  // directional widths used for path diameters
};

/// Sampled local-connectivity function: for each s, the max over sampled
/// pairs p, q of K with |p - q| <= s of the diameter of the shortest raster
/// path joining them inside K.
inline std::vector<ConnectivitySample> local_connectivity_estimate(const RasterSet& k,
                                                                   const std::vector<double>& s_values,
                                                                   ConnectivityOptions opt = {}) {
    int ncomp = 0;
    const auto labels = label_components(k, true, &ncomp);
    if (ncomp != 1) throw InvalidInput("K must be raster-connected");
    if (s_values.empty()) return {};
    const double s_max = *std::max_element(s_values.begin(), s_values.end());

    // Nodes in row-major order.
    const auto cols = std::ptrdiff_t(k.cols());
    std::vector<std::ptrdiff_t> node_of(k.rows() * k.cols(), -1);
    std::vector<RasterIndex> nodes;
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(k.rows()); ++r)
        for (std::ptrdiff_t c = 0; c < cols; ++c)
            if (k.at(r, c)) {
                node_of[std::size_t(r * cols + c)] = std::ptrdiff_t(nodes.size());
                nodes.push_back({r, c});
            }
    const std::size_t n = nodes.size();
    std::vector<Vec2> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = k.point(nodes[i].row, nodes[i].col);

    // Decimate sources/targets until the pair count fits the budget.
    const double cellsz = std::max(s_max, k.spacing());
    auto pair_count = [&](std::size_t dec) {
        std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> bins;
        for (std::size_t i = 0; i < n; i += dec)
            bins[{std::int64_t(std::floor(pos[i].x / cellsz)), std::int64_t(std::floor(pos[i].y / cellsz))}].push_back(i);
        std::size_t total = 0;
        for (const auto& [key, members] : bins)
            for (std::int64_t ox = -1; ox <= 1; ++ox)
                for (std::int64_t oy = -1; oy <= 1; ++oy) {
                    auto it = bins.find({key.first + ox, key.second + oy});
                    if (it == bins.end()) continue;
                    for (auto i : members)
                        for (auto j : it->second)
                            if (i < j && distance(pos[i], pos[j]) <= s_max) ++total;
                }
        return total;
    };
    std::size_t dec = 1;
    while (pair_count(dec) > opt.max_pairs) dec *= 2;

    std::vector<Vec2> dirs(opt.directions);
    for (std::size_t d = 0; d < opt.directions; ++d) {
        const double a = std::numbers::pi * double(d) / double(opt.directions);
        dirs[d] = {std::cos(a), std::sin(a)};
    }

    std::vector<std::pair<double, double>> pairs;  // (distance, path diameter)
    std::vector<std::ptrdiff_t> parent(n);
    std::vector<double> lo(n * opt.directions), hi(n * opt.directions);
    std::vector<std::size_t> queue;
    queue.reserve(n);
    static constexpr std::ptrdiff_t dr[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr std::ptrdiff_t dc[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (std::size_t src = 0; src < n; src += dec) {
        std::fill(parent.begin(), parent.end(), -1);
        queue.clear();
        queue.push_back(src);
        parent[src] = std::ptrdiff_t(src);
        for (std::size_t d = 0; d < opt.directions; ++d) lo[src * opt.directions + d] = hi[src * opt.directions + d] = dot(dirs[d], pos[src]);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t cur = queue[head];
            for (int q = 0; q < 8; ++q) {
                const auto nr = nodes[cur].row + dr[q], nc = nodes[cur].col + dc[q];
                if (!k.at(nr, nc)) continue;
                const auto nb = std::size_t(node_of[std::size_t(nr * cols + nc)]);
                if (parent[nb] >= 0) continue;
                parent[nb] = std::ptrdiff_t(cur);
                for (std::size_t d = 0; d < opt.directions; ++d) {
                    const double p = dot(dirs[d], pos[nb]);
                    lo[nb * opt.directions + d] = std::min(lo[cur * opt.directions + d], p);
                    hi[nb * opt.directions + d] = std::max(hi[cur * opt.directions + d], p);
                }
                queue.push_back(nb);
            }
        }
        for (std::size_t dst = src + dec; dst < n; dst += dec) {
            const double d = distance(pos[src], pos[dst]);
            if (d > s_max) continue;
            double width = 0.0;
            for (std::size_t q = 0; q < opt.directions; ++q)
                width = std::max(width, hi[dst * opt.directions + q] - lo[dst * opt.directions + q]);
            pairs.push_back({d, width});
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<double> sorted_s = s_values;
    std::sort(sorted_s.begin(), sorted_s.end());
    std::vector<ConnectivitySample> out;
    double running = 0.0;
    std::size_t idx = 0;
    for (double s : sorted_s) {
        while (idx < pairs.size() && pairs[idx].first <= s) running = std::max(running, pairs[idx++].second);
        out.push_back({s, running});
    }
    (void)labels;
    return out;
}

struct BoundCheck {
    std::size_t measured = 0;
    std::size_t bound = 0;
    bool ok = false;
    bool inconclusive = false;
    double s = 0.0;
    double diam_k = 0.0;
};

/// Compares M_r of an exhaustion boundary with 4 (diam(K) / s + 1), where s
/// is the largest sampled scale whose connectivity estimate is below r/2.
inline BoundCheck multiplicity_bound_check(const RasterSet& k, const PolyCurve& boundary, double r,
                                           const std::vector<ConnectivitySample>& connectivity,
                                           std::size_t direction_budget = 64) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    BoundCheck out;
    out.measured = r_multiplicity(boundary, r, direction_budget).value;
    const auto pts = k.occupied_points();
    out.diam_k = diameter(std::span<const Vec2>(pts));
    double s = 0.0;
    for (const auto& c : connectivity)
        if (c.f < r / 2.0) s = std::max(s, c.s);
    if (!(s > 0.0)) {
        out.inconclusive = true;
        return out;
    }
    out.s = s;
    out.bound = static_cast<std::size_t>(std::floor(4.0 * (out.diam_k / s + 1.0)));
    out.ok = out.measured <= out.bound;
    return out;
}

/// Geometric grid of scales from 2h up to diam(K).
inline std::vector<double> default_scales(const RasterSet& k, std::size_t count = 24) {
    const auto pts = k.occupied_points();
    const double d = std::max(diameter(std::span<const Vec2>(pts)), 4.0 * k.spacing());
    std::vector<double> s(count);
    const double lo = 2.0 * k.spacing();
    for (std::size_t i = 0; i < count; ++i) s[i] = lo * std::pow(d / lo, double(i) / double(count - 1));
    return s;
}

}  // namespace curveflow
