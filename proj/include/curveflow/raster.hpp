#pragma once

// Occupancy rasters standing in for compact sets K. Raster point (row, col)
// sits at origin + (col * spacing, row * spacing).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include <json.hpp>

#include "curveflow/error.hpp"
#include "curveflow/geometry.hpp"

namespace curveflow {

struct RasterIndex {
    std::ptrdiff_t row = 0;
    std::ptrdiff_t col = 0;
    friend bool operator==(RasterIndex, RasterIndex) = default;
};

class RasterSet {
public:
    RasterSet() = default;
    RasterSet(Vec2 origin, double spacing, std::size_t rows, std::size_t cols)
        : origin_(origin), spacing_(spacing), rows_(rows), cols_(cols), data_(rows * cols, 0) {
        if (!(spacing > 0.0)) throw InvalidInput("raster spacing must be positive");
        if (rows == 0 || cols == 0) throw InvalidInput("raster must be nonempty");
    }

    Vec2 origin() const { return origin_; }
    double spacing() const { return spacing_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool inside(std::ptrdiff_t r, std::ptrdiff_t c) const {
        return r >= 0 && c >= 0 && r < std::ptrdiff_t(rows_) && c < std::ptrdiff_t(cols_);
    }
    bool at(std::ptrdiff_t r, std::ptrdiff_t c) const { return inside(r, c) && data_[std::size_t(r) * cols_ + c]; }
    void set(std::ptrdiff_t r, std::ptrdiff_t c, bool v = true) {
        if (inside(r, c)) data_[std::size_t(r) * cols_ + c] = v ? 1 : 0;
    }
    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    Vec2 point(std::ptrdiff_t r, std::ptrdiff_t c) const {
        return {origin_.x + double(c) * spacing_, origin_.y + double(r) * spacing_};
    }
    RasterIndex nearest(Vec2 p) const {
        return {std::ptrdiff_t(std::llround((p.y - origin_.y) / spacing_)),
                std::ptrdiff_t(std::llround((p.x - origin_.x) / spacing_))};
    }

    std::size_t count() const {
        return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
    }

    std::vector<Vec2> occupied_points() const {
        std::vector<Vec2> pts;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (data_[r * cols_ + c]) pts.push_back(point(std::ptrdiff_t(r), std::ptrdiff_t(c)));
        return pts;
    }

private:
    Vec2 origin_{};
    double spacing_ = 1.0;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Empty raster covering [lo - margin, hi + margin] with the origin snapped
/// to an integer multiple of `align` so dyadic cells line up with the world
/// grid.
inline RasterSet make_raster(Vec2 lo, Vec2 hi, double spacing, double margin, double align = 1.0) {
    const double x0 = std::floor((lo.x - margin) / align) * align;
    const double y0 = std::floor((lo.y - margin) / align) * align;
    const double x1 = std::ceil((hi.x + margin) / align) * align;
    const double y1 = std::ceil((hi.y + margin) / align) * align;
    const auto cols = static_cast<std::size_t>(std::llround((x1 - x0) / spacing)) + 1;
    const auto rows = static_cast<std::size_t>(std::llround((y1 - y0) / spacing)) + 1;
    return RasterSet({x0, y0}, spacing, rows, cols);
}

/// Marks the raster point nearest to every point of the curve (sampled at a
/// quarter of the spacing), giving an 8-connected trace.
inline void rasterize_curve(RasterSet& k, const PolyCurve& c) {
    const double step = 0.25 * k.spacing();
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
        auto [a, b] = c.edge(e);
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(distance(a, b) / step)));
        for (std::size_t i = 0; i <= n; ++i) {
            const auto idx = k.nearest(a + (double(i) / double(n)) * (b - a));
            k.set(idx.row, idx.col);
        }
    }
}

inline std::pair<Vec2, Vec2> bounding_box(const std::vector<PolyCurve>& curves) {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi = -lo;
    for (const auto& c : curves)
        for (const auto& p : c.vertices()) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
    return {lo, hi};
}

/// Raster of the union of curves with the given free margin around them.
inline RasterSet raster_from_curves(const std::vector<PolyCurve>& curves, double spacing, double margin = 2.0) {
    auto [lo, hi] = bounding_box(curves);
    RasterSet k = make_raster(lo, hi, spacing, margin);
    for (const auto& c : curves) rasterize_curve(k, c);
    return k;
}

/// Marks every raster point within `width` of an occupied point.
inline RasterSet thicken(const RasterSet& k, double width) {
    RasterSet out = k;
    const auto w = static_cast<std::ptrdiff_t>(std::floor(width / k.spacing()));
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(k.rows()); ++r)
        for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(k.cols()); ++c) {
            if (!k.at(r, c)) continue;
            for (std::ptrdiff_t dr = -w; dr <= w; ++dr)
                for (std::ptrdiff_t dc = -w; dc <= w; ++dc)
                    if (dr * dr + dc * dc <= w * w) out.set(r + dr, c + dc);
        }
    return out;
}

/// Extends the raster by `units` world units on every side; `units` times
/// 1/spacing must be an integer so the grid stays aligned.
inline RasterSet pad(const RasterSet& k, double units) {
    const auto p = static_cast<std::size_t>(std::llround(units / k.spacing()));
    RasterSet out({k.origin().x - double(p) * k.spacing(), k.origin().y - double(p) * k.spacing()}, k.spacing(),
                  k.rows() + 2 * p, k.cols() + 2 * p);
    for (std::size_t r = 0; r < k.rows(); ++r)
        for (std::size_t c = 0; c < k.cols(); ++c)
            if (k.at(std::ptrdiff_t(r), std::ptrdiff_t(c))) out.set(std::ptrdiff_t(r + p), std::ptrdiff_t(c + p));
    return out;
}

/// Component labels (1-based, 0 = not in the set) of the occupied points
/// (8-connectivity) or the free points (4-connectivity).
inline std::vector<int> label_components(const RasterSet& k, bool occupied, int* count = nullptr) {
    const auto rows = std::ptrdiff_t(k.rows()), cols = std::ptrdiff_t(k.cols());
    std::vector<int> label(k.rows() * k.cols(), 0);
    int next = 0;
    std::vector<std::ptrdiff_t> stack;
    const int nbrs = occupied ? 8 : 4;
    static constexpr std::ptrdiff_t dr[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr std::ptrdiff_t dc[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (std::ptrdiff_t r = 0; r < rows; ++r)
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            const auto idx = r * cols + c;
            if (label[idx] || k.at(r, c) != occupied) continue;
            label[idx] = ++next;
            stack.push_back(idx);
            while (!stack.empty()) {
                const auto cur = stack.back();
                stack.pop_back();
                const auto cr = cur / cols, cc = cur % cols;
                for (int q = 0; q < nbrs; ++q) {
                    const auto nr = cr + dr[q], nc = cc + dc[q];
                    if (!k.inside(nr, nc) || k.at(nr, nc) != occupied) continue;
                    const auto ni = nr * cols + nc;
                    if (label[ni]) continue;
                    label[ni] = next;
                    stack.push_back(ni);
                }
            }
        }
    if (count) *count = next;
    return label;
}

inline bool raster_connected(const RasterSet& k) {
    int n = 0;
    label_components(k, true, &n);
    return n == 1;
}

/// Occupied points whose four neighbours are all occupied: the raster's
/// estimate of the interior of K.
inline std::size_t interior_count(const RasterSet& k) {
    std::size_t n = 0;
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(k.rows()); ++r)
        for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(k.cols()); ++c)
            if (k.at(r, c) && k.at(r + 1, c) && k.at(r - 1, c) && k.at(r, c + 1) && k.at(r, c - 1)) ++n;
    return n;
}

inline nlohmann::json raster_to_json(const RasterSet& k) {
    nlohmann::json data = nlohmann::json::array();
    for (auto v : k.data()) data.push_back(int(v));
    return {{"origin", {k.origin().x, k.origin().y}},
            {"spacing", k.spacing()},
            {"rows", k.rows()},
            {"cols", k.cols()},
            {"data", std::move(data)}};
}

inline RasterSet raster_from_json(const nlohmann::json& j) {
    for (const char* key : {"origin", "spacing", "rows", "cols", "data"})
        if (!j.contains(key)) throw InvalidInput(std::string("raster JSON missing ") + key);
    RasterSet k({j["origin"][0].get<double>(), j["origin"][1].get<double>()}, j["spacing"].get<double>(),
                j["rows"].get<std::size_t>(), j["cols"].get<std::size_t>());
    const auto& data = j["data"];
    if (data.size() != k.rows() * k.cols()) throw InvalidInput("raster data size mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int v = data[i].get<int>();
        if (v != 0 && v != 1) throw InvalidInput("raster data must be 0/1");
        k.data()[i] = static_cast<std::uint8_t>(v);
    }
    return k;
}

}  // namespace curveflow
