#pragma once

// Binary rasters for compact, possibly non-convex planar sets, and finite
// point clouds for Minkowski means of compact sets.
//
// Cell (i, j) covers [i h, (i+1) h) x [j h, (j+1) h) with -E <= i, j < E.
// Only the bounding box of the occupied cells is stored.

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "symmkit/config.hpp"
#include "symmkit/geom.hpp"
#include "symmkit/polygon.hpp"
#include "symmkit/polygon_io.hpp"

namespace symmkit {

struct CellBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
    [[nodiscard]] int width() const { return x1 - x0; }
    [[nodiscard]] int height() const { return y1 - y0; }
    [[nodiscard]] bool empty() const { return x1 <= x0 || y1 <= y0; }
};

class RasterSet {
public:
    /// An empty raster; fill through `from_mask` or the builders below.
    RasterSet(double cell_size, int half_extent) : h_(cell_size), e_(half_extent) {
        if (!(cell_size > 0) || !std::isfinite(cell_size)) throw InputError("RasterSet: cell_size must be > 0");
        if (half_extent < 1) throw InputError("RasterSet: half_extent must be >= 1");
    }

    /// Takes a dense mask over `box` and crops it to the occupied cells.
    static RasterSet from_mask(double cell_size, int half_extent, CellBox box, const std::vector<std::uint8_t>& mask) {
        RasterSet r(cell_size, half_extent);
        if (box.empty()) return r;
        if (box.x0 < -half_extent || box.y0 < -half_extent || box.x1 > half_extent || box.y1 > half_extent)
            throw InputError("RasterSet: cells outside the grid");
        int x0 = box.x1, x1 = box.x0, y0 = box.y1, y1 = box.y0;
        const int w = box.width();
        for (int y = box.y0; y < box.y1; ++y)
            for (int x = box.x0; x < box.x1; ++x)
                if (mask[static_cast<std::size_t>((y - box.y0) * w + (x - box.x0))]) {
                    x0 = std::min(x0, x);
                    x1 = std::max(x1, x + 1);
                    y0 = std::min(y0, y);
                    y1 = std::max(y1, y + 1);
                }
        if (x1 <= x0) return r;
        r.box_ = {x0, y0, x1, y1};
        r.bits_.assign(static_cast<std::size_t>(r.box_.width()) * static_cast<std::size_t>(r.box_.height()), 0);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
                if (mask[static_cast<std::size_t>((y - box.y0) * w + (x - box.x0))]) {
                    r.bits_[r.offset(x, y)] = 1;
                    ++r.count_;
                }
        return r;
    }

    [[nodiscard]] double cell_size() const { return h_; }
    [[nodiscard]] int half_extent() const { return e_; }
    [[nodiscard]] const CellBox& box() const { return box_; }
    [[nodiscard]] std::size_t count() const { return count_; }
    [[nodiscard]] bool empty() const { return count_ == 0; }
    [[nodiscard]] bool get(int i, int j) const {
        if (i < box_.x0 || i >= box_.x1 || j < box_.y0 || j >= box_.y1) return false;
        return bits_[offset(i, j)] != 0;
    }
    [[nodiscard]] Vec2 center(int i, int j) const { return {(i + 0.5) * h_, (j + 0.5) * h_}; }

    template <typename F>
    void for_each_cell(F&& f) const {
        for (int j = box_.y0; j < box_.y1; ++j)
            for (int i = box_.x0; i < box_.x1; ++i)
                if (bits_[offset(i, j)]) f(i, j);
    }

    friend bool operator==(const RasterSet& a, const RasterSet& b) {
        return a.h_ == b.h_ && a.e_ == b.e_ && a.count_ == b.count_ &&
               (a.count_ == 0 || (a.box_.x0 == b.box_.x0 && a.box_.y0 == b.box_.y0 && a.box_.x1 == b.box_.x1 &&
                                  a.box_.y1 == b.box_.y1 && a.bits_ == b.bits_));
    }

private:
    [[nodiscard]] std::size_t offset(int i, int j) const {
        return static_cast<std::size_t>(j - box_.y0) * static_cast<std::size_t>(box_.width()) +
               static_cast<std::size_t>(i - box_.x0);
    }
    double h_;
    int e_;
    CellBox box_{};
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

// --- builders ------------------------------------------------------------------

namespace detail {
inline CellBox cells_covering(double x0, double y0, double x1, double y1, double h, int e) {
    CellBox b{static_cast<int>(std::floor(x0 / h)) - 1, static_cast<int>(std::floor(y0 / h)) - 1,
              static_cast<int>(std::floor(x1 / h)) + 2, static_cast<int>(std::floor(y1 / h)) + 2};
    b.x0 = std::max(b.x0, -e);
    b.y0 = std::max(b.y0, -e);
    b.x1 = std::min(b.x1, e);
    b.y1 = std::min(b.y1, e);
    return b;
}

template <typename Inside>
RasterSet rasterize(double h, int e, CellBox box, Inside&& inside) {
    if (box.empty()) return RasterSet(h, e);
    std::vector<std::uint8_t> m(static_cast<std::size_t>(box.width()) * static_cast<std::size_t>(box.height()), 0);
    for (int j = box.y0; j < box.y1; ++j)
        for (int i = box.x0; i < box.x1; ++i)
            if (inside(Vec2{(i + 0.5) * h, (j + 0.5) * h}))
                m[static_cast<std::size_t>((j - box.y0) * box.width() + (i - box.x0))] = 1;
    return RasterSet::from_mask(h, e, box, m);
}
}  // namespace detail

/// Cells whose centre lies in P.
inline RasterSet rasterize_polygon(const ConvexPolygon& p, double h, int e) {
    if (!p.is_full()) throw InputError("rasterize_polygon: polygon must be full-dimensional");
    const auto& v = p.vertices();
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (auto q : v) {
        x0 = std::min(x0, q.x);
        y0 = std::min(y0, q.y);
        x1 = std::max(x1, q.x);
        y1 = std::max(y1, q.y);
    }
    return detail::rasterize(h, e, detail::cells_covering(x0, y0, x1, y1, h, e), [&](Vec2 c) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (cross(v[(k + 1) % v.size()] - v[k], c - v[k]) < 0) return false;
        return true;
    });
}

/// Cells whose centre lies in the closed disc.
inline RasterSet rasterize_disk(Vec2 center, double r, double h, int e) {
    return detail::rasterize(h, e, detail::cells_covering(center.x - r, center.y - r, center.x + r, center.y + r, h, e),
                             [&](Vec2 c) { return dot(c - center, c - center) <= r * r; });
}

inline RasterSet raster_union(const RasterSet& a, const RasterSet& b) {
    if (a.cell_size() != b.cell_size() || a.half_extent() != b.half_extent())
        throw InputError("raster_union: grids differ");
    if (a.empty()) return b;
    if (b.empty()) return a;
    const CellBox box{std::min(a.box().x0, b.box().x0), std::min(a.box().y0, b.box().y0),
                      std::max(a.box().x1, b.box().x1), std::max(a.box().y1, b.box().y1)};
    std::vector<std::uint8_t> m(static_cast<std::size_t>(box.width()) * static_cast<std::size_t>(box.height()), 0);
    auto mark = [&](int i, int j) { m[static_cast<std::size_t>((j - box.y0) * box.width() + (i - box.x0))] = 1; };
    a.for_each_cell(mark);
    b.for_each_cell(mark);
    return RasterSet::from_mask(a.cell_size(), a.half_extent(), box, m);
}

/// Vertical bar `bar_cells` wide and `length` long centred at the origin,
/// united with a disc of radius r at the origin.
inline RasterSet segment_with_disk(double length, double disk_radius, double h, int e, int bar_cells = 3) {
    if (bar_cells < 1) throw InputError("segment_with_disk: bar_cells must be >= 1");
    // Columns [-(c+1)/2, (c-1)/2]: odd widths sit half a cell left of centre,
    // the same convention as the exact recentring path.
    const int i0 = -(bar_cells + 1) / 2;
    auto bar = detail::rasterize(h, e, detail::cells_covering(i0 * h, -length / 2, (i0 + bar_cells) * h, length / 2, h, e),
                                 [&](Vec2 c) {
                                     const int i = static_cast<int>(std::floor(c.x / h));
                                     return i >= i0 && i < i0 + bar_cells && std::abs(c.y) <= length / 2;
                                 });
    if (disk_radius <= 0) return bar;
    return raster_union(bar, rasterize_disk({0, 0}, disk_radius, h, e));
}

// --- measures ----------------------------------------------------------------------

inline double raster_area(const RasterSet& s) { return static_cast<double>(s.count()) * s.cell_size() * s.cell_size(); }

/// Convex hull of the occupied cells' corners.
inline ConvexPolygon convex_hull_raster(const RasterSet& s) {
    if (s.empty()) throw InputError("convex_hull_raster: empty raster");
    const double h = s.cell_size();
    std::vector<Vec2> pts;
    const auto& b = s.box();
    for (int j = b.y0; j < b.y1; ++j) {
        int lo = b.x1, hi = b.x0 - 1;
        for (int i = b.x0; i < b.x1; ++i)
            if (s.get(i, j)) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        if (hi < lo) continue;
        for (double y : {j * h, (j + 1) * h}) {
            pts.push_back({lo * h, y});
            pts.push_back({(hi + 1) * h, y});
        }
    }
    return ConvexPolygon::hull(pts);
}

/// Length of the orthogonal projection of the occupied cells onto the
/// line through the origin with direction angle `angle`.
inline double projection_length(const RasterSet& s, double angle) {
    if (s.empty()) return 0.0;
    const Vec2 d = unit_vec(angle);
    const double h = s.cell_size();
    double lo = INFINITY, hi = -INFINITY;
    const auto& b = s.box();
    for (int j = b.y0; j < b.y1; ++j)
        for (int i = b.x0; i < b.x1; ++i)
            if (s.get(i, j)) {
                const double t = dot(s.center(i, j), d);
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
    return hi - lo + h * (std::abs(d.x) + std::abs(d.y));
}

// --- Steiner symmetrization ------------------------------------------------------------

namespace detail {

inline CellBox full_box(int e) { return {-e, -e, e, e}; }

/// Exact recentring of column counts. `columns` = true recentres every
/// vertical column about y = 0 (H is the x-axis), else every row about x = 0.
inline RasterSet recenter_runs(const RasterSet& s, bool columns) {
    const int e = s.half_extent();
    const auto& b = s.box();
    std::vector<std::pair<int, int>> counts;  // (index, count)
    if (columns) {
        for (int i = b.x0; i < b.x1; ++i) {
            int c = 0;
            for (int j = b.y0; j < b.y1; ++j) c += s.get(i, j) ? 1 : 0;
            if (c) counts.emplace_back(i, c);
        }
    } else {
        for (int j = b.y0; j < b.y1; ++j) {
            int c = 0;
            for (int i = b.x0; i < b.x1; ++i) c += s.get(i, j) ? 1 : 0;
            if (c) counts.emplace_back(j, c);
        }
    }
    int maxc = 0;
    for (auto [k, c] : counts) maxc = std::max(maxc, c);
    const int lo_run = -(maxc + 1) / 2, hi_run = maxc / 2 + 1;
    if (lo_run < -e || hi_run > e) throw CapacityError("steiner_symmetrize_raster: output leaves the grid");
    const int k0 = counts.front().first, k1 = counts.back().first + 1;
    CellBox box = columns ? CellBox{k0, lo_run, k1, hi_run} : CellBox{lo_run, k0, hi_run, k1};
    std::vector<std::uint8_t> m(static_cast<std::size_t>(box.width()) * static_cast<std::size_t>(box.height()), 0);
    for (auto [k, c] : counts) {
        // c even: [-c/2, c/2); c odd: [-(c+1)/2, (c-1)/2), off centre by half a cell.
        const int start = -(c + 1) / 2;
        for (int t = start; t < start + c; ++t) {
            const int i = columns ? k : t, j = columns ? t : k;
            m[static_cast<std::size_t>((j - box.y0) * box.width() + (i - box.x0))] = 1;
        }
    }
    return RasterSet::from_mask(s.cell_size(), e, box, m);
}

}  // namespace detail

/// Sections orthogonal to H replaced by centred intervals of equal measure.
///
/// Lines along the axes use exact run recentring. Otherwise every occupied
/// cell is split into 4x4 subsamples, their mass is binned by the coordinate
/// t along H into columns of width h, and each candidate output cell is
/// scored by how many of its 16 subsamples fall inside the centred column
/// bands (ties broken by the depth of the cell centre inside its band).
/// The cell at the centre of every non-empty column is always set, so thin
/// columns keep a representative (the zero-measure case of the definition);
/// the rest of the input's cell count goes to the best-scored cells. The
/// output therefore has the input's cell count unless the forced centres
/// alone exceed it.
inline RasterSet steiner_symmetrize_raster(const RasterSet& s, const LineSubspace& hline,
                                           const Tolerances& tol = default_tolerances()) {
    if (s.empty()) throw InputError("steiner_symmetrize_raster: empty raster");
    const double phi = detail::planar_angle(hline);
    const double pi = std::numbers::pi;
    if (phi <= tol.grid_alignment || pi - phi <= tol.grid_alignment) return detail::recenter_runs(s, true);
    if (std::abs(phi - pi / 2) <= tol.grid_alignment) return detail::recenter_runs(s, false);

    const double h = s.cell_size();
    const int e = s.half_extent();
    const Vec2 d = unit_vec(phi), n{-d.y, d.x};
    constexpr int sub = 4;
    const double sh = h / sub;
    const double w = h * h / (sub * sub);

    // Column measures.
    long long kmin = std::numeric_limits<long long>::max(), kmax = std::numeric_limits<long long>::min();
    std::unordered_map<long long, double> mass;
    s.for_each_cell([&](int i, int j) {
        for (int a = 0; a < sub; ++a)
            for (int b = 0; b < sub; ++b) {
                const Vec2 p{i * h + (a + 0.5) * sh, j * h + (b + 0.5) * sh};
                const auto k = static_cast<long long>(std::floor(dot(p, d) / h));
                mass[k] += w;
                kmin = std::min(kmin, k);
                kmax = std::max(kmax, k);
            }
    });
    std::vector<double> half(static_cast<std::size_t>(kmax - kmin + 1), -1.0);  // -1 marks an empty column
    double rmax = 0.0;
    for (const auto& [k, m] : mass) {
        half[static_cast<std::size_t>(k - kmin)] = 0.5 * m / h;
        rmax = std::max(rmax, 0.5 * m / h);
    }
    auto band = [&](Vec2 p) {
        const auto k = static_cast<long long>(std::floor(dot(p, d) / h));
        return (k < kmin || k > kmax) ? -1.0 : half[static_cast<std::size_t>(k - kmin)];
    };

    // Output bounding box: the band kmin h <= t <= (kmax+1) h, |s| <= rmax.
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (double t : {static_cast<double>(kmin) * h, static_cast<double>(kmax + 1) * h})
        for (double r : {-rmax - h, rmax + h}) {
            const Vec2 p = t * d + r * n;
            x0 = std::min(x0, p.x);
            y0 = std::min(y0, p.y);
            x1 = std::max(x1, p.x);
            y1 = std::max(y1, p.y);
        }
    const CellBox box{static_cast<int>(std::floor(x0 / h)) - 1, static_cast<int>(std::floor(y0 / h)) - 1,
                      static_cast<int>(std::floor(x1 / h)) + 2, static_cast<int>(std::floor(y1 / h)) + 2};
    if (box.x0 < -e || box.y0 < -e || box.x1 > e || box.y1 > e)
        throw CapacityError("steiner_symmetrize_raster: output leaves the grid");
    const auto at = [&](int i, int j) { return static_cast<std::size_t>((j - box.y0) * box.width() + (i - box.x0)); };
    std::vector<std::uint8_t> m(static_cast<std::size_t>(box.width()) * static_cast<std::size_t>(box.height()), 0);

    long long budget = static_cast<long long>(s.count());
    for (long long k = kmin; k <= kmax; ++k) {
        if (half[static_cast<std::size_t>(k - kmin)] < 0) continue;
        const Vec2 c = ((static_cast<double>(k) + 0.5) * h) * d;
        const int i = static_cast<int>(std::floor(c.x / h)), j = static_cast<int>(std::floor(c.y / h));
        if (!m[at(i, j)]) {
            m[at(i, j)] = 1;
            --budget;
        }
    }

    struct Candidate {
        double score;
        std::size_t index;
    };
    std::vector<Candidate> cand;
    for (int j = box.y0; j < box.y1; ++j)
        for (int i = box.x0; i < box.x1; ++i) {
            if (m[at(i, j)]) continue;
            int hits = 0;
            for (int a = 0; a < sub; ++a)
                for (int b = 0; b < sub; ++b) {
                    const Vec2 p{i * h + (a + 0.5) * sh, j * h + (b + 0.5) * sh};
                    const double r = band(p);
                    if (r >= 0 && std::abs(dot(p, n)) <= r) ++hits;
                }
            if (hits == 0) continue;
            const Vec2 c{(i + 0.5) * h, (j + 0.5) * h};
            const double depth = std::clamp((band(c) - std::abs(dot(c, n))) / h, -1.0, 1.0);
            cand.push_back({hits + 0.49 * (depth + 1.0), at(i, j)});
        }
    if (budget > 0) {
        const auto take = std::min<std::size_t>(static_cast<std::size_t>(budget), cand.size());
        const auto better = [](const Candidate& a, const Candidate& b) {
            return a.score > b.score || (a.score == b.score && a.index < b.index);
        };
        std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(), better);
        for (std::size_t t = 0; t < take; ++t) m[cand[t].index] = 1;
    }
    return RasterSet::from_mask(h, e, box, m);
}

/// Cell-wise image under the reflection about H (cell centres mapped, then
/// floored to the containing cell).
inline RasterSet reflect_raster(const RasterSet& s, const LineSubspace& hline) {
    const double phi = detail::planar_angle(hline);
    const double h = s.cell_size();
    const int e = s.half_extent();
    std::vector<std::pair<int, int>> cells;
    CellBox box{e, e, -e, -e};
    s.for_each_cell([&](int i, int j) {
        const Vec2 c = reflect_vec(s.center(i, j), phi);
        const int a = static_cast<int>(std::floor(c.x / h)), b = static_cast<int>(std::floor(c.y / h));
        cells.emplace_back(a, b);
        box = {std::min(box.x0, a), std::min(box.y0, b), std::max(box.x1, a + 1), std::max(box.y1, b + 1)};
    });
    if (cells.empty()) return RasterSet(h, e);
    if (box.x0 < -e || box.y0 < -e || box.x1 > e || box.y1 > e) throw CapacityError("reflect_raster: leaves the grid");
    std::vector<std::uint8_t> m(static_cast<std::size_t>(box.width()) * static_cast<std::size_t>(box.height()), 0);
    for (auto [a, b] : cells) m[static_cast<std::size_t>((b - box.y0) * box.width() + (a - box.x0))] = 1;
    return RasterSet::from_mask(h, e, box, m);
}

// --- Hausdorff distance ---------------------------------------------------------------------

namespace detail {

/// One-dimensional squared distance transform (lower envelope of parabolas).
inline void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == inf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -inf;
            z[1] = inf;
            continue;
        }
        double sp = 0;
        for (;;) {
            const int p = v[static_cast<std::size_t>(k)];
            sp = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p);
            if (sp <= z[static_cast<std::size_t>(k)] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        if (sp <= z[static_cast<std::size_t>(k)]) {  // k == 0 and the new parabola dominates
            v[0] = q;
            z[0] = -inf;
            z[1] = inf;
            continue;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = sp;
        z[static_cast<std::size_t>(k) + 1] = inf;
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) d[q] = inf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        d[q] = (q - p) * static_cast<double>(q - p) + f[p];
    }
}

/// Squared distance (in cells) from every cell of `box` to the nearest set cell of s.
inline std::vector<double> squared_edt(const RasterSet& s, const CellBox& box) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int w = box.width(), ht = box.height();
    std::vector<double> g(static_cast<std::size_t>(w) * static_cast<std::size_t>(ht), inf);
    s.for_each_cell([&](int i, int j) {
        if (i >= box.x0 && i < box.x1 && j >= box.y0 && j < box.y1)
            g[static_cast<std::size_t>((j - box.y0) * w + (i - box.x0))] = 0.0;
    });
    std::vector<int> v;
    std::vector<double> z, f(static_cast<std::size_t>(std::max(w, ht))), d(f.size());
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < ht; ++y) f[static_cast<std::size_t>(y)] = g[static_cast<std::size_t>(y * w + x)];
        edt_1d(f.data(), d.data(), ht, v, z);
        for (int y = 0; y < ht; ++y) g[static_cast<std::size_t>(y * w + x)] = d[static_cast<std::size_t>(y)];
    }
    for (int y = 0; y < ht; ++y) {
        edt_1d(&g[static_cast<std::size_t>(y * w)], d.data(), w, v, z);
        std::copy(d.begin(), d.begin() + w, g.begin() + static_cast<std::ptrdiff_t>(y) * w);
    }
    return g;
}

}  // namespace detail

/// Hausdorff distance between the sets of occupied cell centres.
inline double hausdorff_raster(const RasterSet& a, const RasterSet& b) {
    if (a.cell_size() != b.cell_size()) throw InputError("hausdorff_raster: cell sizes differ");
    if (a.empty() || b.empty()) throw InputError("hausdorff_raster: empty raster");
    const CellBox box{std::min(a.box().x0, b.box().x0), std::min(a.box().y0, b.box().y0),
                      std::max(a.box().x1, b.box().x1), std::max(a.box().y1, b.box().y1)};
    auto directed = [&](const RasterSet& from, const RasterSet& to) {
        const auto g = detail::squared_edt(to, box);
        double m = 0.0;
        from.for_each_cell([&](int i, int j) {
            m = std::max(m, g[static_cast<std::size_t>((j - box.y0) * box.width() + (i - box.x0))]);
        });
        return m;
    };
    return std::sqrt(std::max(directed(a, b), directed(b, a))) * a.cell_size();
}

// --- files ----------------------------------------------------------------------------------

/// Plain PBM of the whole grid (top row first) plus a sidecar `<path>.meta`
/// holding "cell_size half_extent".
inline void write_pbm(const std::string& path, const RasterSet& s) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    const int e = s.half_extent();
    out << "P1\n" << 2 * e << ' ' << 2 * e << '\n';
    std::string row(static_cast<std::size_t>(2 * e), '0');
    for (int j = e - 1; j >= -e; --j) {
        for (int i = -e; i < e; ++i) row[static_cast<std::size_t>(i + e)] = s.get(i, j) ? '1' : '0';
        for (std::size_t k = 0; k < row.size(); k += 64) out << row.substr(k, 64) << '\n';
    }
    std::ofstream meta(path + ".meta");
    meta << format_real(s.cell_size()) << ' ' << e << '\n';
}

inline RasterSet read_pbm(const std::string& path) {
    std::ifstream meta(path + ".meta");
    double h = 0;
    int e = 0;
    if (!meta || !(meta >> h >> e)) throw ParseError(path + ".meta: expected \"cell_size half_extent\"");
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string clean;
    clean.reserve(content.size());
    for (std::size_t k = 0; k < content.size(); ++k) {
        if (content[k] == '#') {
            while (k < content.size() && content[k] != '\n') ++k;
            clean.push_back('\n');
        } else {
            clean.push_back(content[k]);
        }
    }
    std::istringstream ss(clean);
    std::string magic;
    int w = 0, ht = 0;
    if (!(ss >> magic >> w >> ht) || magic != "P1") throw ParseError(path + ": not a plain PBM (P1)");
    if (w != 2 * e || ht != 2 * e) throw ParseError(path + ": size does not match the sidecar half_extent");
    std::vector<std::uint8_t> m(static_cast<std::size_t>(w) * static_cast<std::size_t>(ht), 0);
    std::size_t filled = 0;
    char c = 0;
    while (filled < m.size() && ss.get(c)) {
        if (c == '0' || c == '1') {
            const int col = static_cast<int>(filled % static_cast<std::size_t>(w));
            const int row = static_cast<int>(filled / static_cast<std::size_t>(w));
            m[static_cast<std::size_t>((ht - 1 - row) * w + col)] = (c == '1');
            ++filled;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw ParseError(path + ": unexpected character in raster body");
        }
    }
    if (filled != m.size()) throw ParseError(path + ": truncated raster body");
    try {
        return RasterSet::from_mask(h, e, detail::full_box(e), m);
    } catch (const InputError& ex) {
        throw ParseError(path + ": " + ex.what());
    }
}

// --- point clouds -----------------------------------------------------------------------------

struct PointCloud {
    std::vector<Vec2> points;
    std::size_t max_size = 200000;
};

namespace detail {

/// Bucketed nearest-neighbour queries over a fixed point set.
class PointIndex {
public:
    PointIndex(const std::vector<Vec2>& pts, double cell) : pts_(pts), cell_(cell) {
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const long long x = coord(pts[k].x), y = coord(pts[k].y);
            x0_ = std::min(x0_, x), x1_ = std::max(x1_, x);
            y0_ = std::min(y0_, y), y1_ = std::max(y1_, y);
            buckets_[pack(x, y)].push_back(k);
        }
    }
    // Exact: rings are scanned from the first one touching the occupied
    // cells until the best distance is certified or every cell was seen.
    [[nodiscard]] double nearest(Vec2 q) const {
        if (buckets_.empty()) return INFINITY;
        const long long cx = coord(q.x), cy = coord(q.y);
        const long long first = std::max({x0_ - cx, cx - x1_, y0_ - cy, cy - y1_, 0LL});
        const long long last = std::max({cx - x0_, x1_ - cx, cy - y0_, y1_ - cy});
        double best = INFINITY;
        for (long long ring = first; ring <= last; ++ring) {
            auto visit = [&](long long x, long long y) {
                if (x < x0_ || x > x1_ || y < y0_ || y > y1_) return;
                auto it = buckets_.find(pack(x, y));
                if (it == buckets_.end()) return;
                for (auto k : it->second) best = std::min(best, norm(pts_[k] - q));
            };
            if (ring == 0) {
                visit(cx, cy);
            } else {
                for (long long x = std::max(cx - ring, x0_); x <= std::min(cx + ring, x1_); ++x) {
                    visit(x, cy - ring);
                    visit(x, cy + ring);
                }
                for (long long y = std::max(cy - ring + 1, y0_); y <= std::min(cy + ring - 1, y1_); ++y) {
                    visit(cx - ring, y);
                    visit(cx + ring, y);
                }
            }
            // Everything outside this ring is at least ring * cell away.
            if (best <= static_cast<double>(ring) * cell_) return best;
        }
        return best;
    }

private:
    [[nodiscard]] long long coord(double x) const { return static_cast<long long>(std::floor(x / cell_)); }
    static long long pack(long long a, long long b) { return (a << 32) ^ (b & 0xffffffffLL); }
    const std::vector<Vec2>& pts_;
    double cell_;
    long long x0_ = LLONG_MAX, x1_ = LLONG_MIN, y0_ = LLONG_MAX, y1_ = LLONG_MIN;
    std::unordered_map<long long, std::vector<std::size_t>> buckets_;
};

inline double cloud_scale(const std::vector<Vec2>& pts);

/// Buckets sized to the target set's spacing so queries scan few rings;
/// never finer than 1e-6 of the joint extent, so cell indices stay small.
inline double directed_cloud(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    std::vector<Vec2> both(from);
    both.insert(both.end(), to.begin(), to.end());
    const double cell = std::max(cloud_scale(to) / std::max(1.0, std::sqrt(static_cast<double>(to.size()))),
                                 1e-6 * cloud_scale(both));
    const PointIndex idx(to, cell);
    double m = 0.0;
    for (auto p : from) m = std::max(m, idx.nearest(p));
    return m;
}

inline double cloud_scale(const std::vector<Vec2>& pts) {
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (auto p : pts) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    return std::max({x1 - x0, y1 - y0, 1e-12});
}

}  // namespace detail

inline ConvexPolygon cloud_hull(const PointCloud& c) {
    if (c.points.empty()) throw InputError("cloud_hull: empty cloud");
    return ConvexPolygon::hull(c.points);
}

/// All midpoints (c + R_H c')/2, deduplicated on a grid of pitch `snap`.
/// Each occupied snap cell keeps one actual midpoint, preferring vertices
/// of the hull (conv C + R_H conv C)/2, so the hull loses only the vertices
/// that share a snap cell with another hull vertex.
inline PointCloud minkowski_symmetrize_cloud(const PointCloud& c, const LineSubspace& hline, double snap,
                                             std::size_t max_pairs = 10'000'000) {
    if (c.points.empty()) throw InputError("minkowski_symmetrize_cloud: empty cloud");
    if (!(snap > 0)) throw InputError("minkowski_symmetrize_cloud: snap must be > 0");
    const double phi = detail::planar_angle(hline);
    const std::size_t n = c.points.size();
    if (n > max_pairs / n || n * n > max_pairs)
        throw CapacityError("minkowski_symmetrize_cloud: " + std::to_string(n) + "^2 midpoints exceed the pair cap " +
                            std::to_string(max_pairs));
    std::vector<Vec2> refl(n);
    for (std::size_t k = 0; k < n; ++k) refl[k] = reflect_vec(c.points[k], phi);

    PointCloud out;
    out.max_size = c.max_size;
    std::unordered_map<long long, std::size_t> seen;
    auto cell_key = [&](Vec2 p) {
        const auto a = static_cast<long long>(std::floor(p.x / snap)), b = static_cast<long long>(std::floor(p.y / snap));
        return (a << 32) ^ (b & 0xffffffffLL);
    };
    const auto hull = minkowski_symmetrize(cloud_hull(c), hline);
    for (auto v : hull.vertices())
        if (seen.emplace(cell_key(v), out.points.size()).second) out.points.push_back(v);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const Vec2 m = 0.5 * (c.points[a] + refl[b]);
            if (seen.emplace(cell_key(m), out.points.size()).second) {
                out.points.push_back(m);
                if (out.points.size() > out.max_size)
                    throw CapacityError("minkowski_symmetrize_cloud: more than " + std::to_string(out.max_size) +
                                        " points after snapping");
            }
        }
    return out;
}

/// Hausdorff distance between two finite point sets.
inline double hausdorff_cloud(const PointCloud& a, const PointCloud& b) {
    if (a.points.empty() || b.points.empty()) throw InputError("hausdorff_cloud: empty cloud");
    return std::max(detail::directed_cloud(a.points, b.points), detail::directed_cloud(b.points, a.points));
}

/// Hausdorff distance between a cloud and a convex polygon. The polygon
/// side is sampled on a square lattice of pitch `pitch` plus its vertices
/// and boundary, so the result is within pitch/sqrt(2) of the exact value.
inline double hausdorff_cloud_polygon(const PointCloud& c, const ConvexPolygon& p, double pitch,
                                      std::size_t max_samples = 4'000'000) {
    if (c.points.empty()) throw InputError("hausdorff_cloud_polygon: empty cloud");
    if (!(pitch > 0)) throw InputError("hausdorff_cloud_polygon: pitch must be > 0");
    const auto& v = p.vertices();
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (auto q : v) {
        x0 = std::min(x0, q.x);
        y0 = std::min(y0, q.y);
        x1 = std::max(x1, q.x);
        y1 = std::max(y1, q.y);
    }
    const double nx = (x1 - x0) / pitch + 2, ny = (y1 - y0) / pitch + 2;
    if (nx * ny + 2 * (nx + ny) > static_cast<double>(max_samples))
        throw CapacityError("hausdorff_cloud_polygon: pitch " + format_real(pitch) + " needs more than " +
                            std::to_string(max_samples) + " samples");
    std::vector<Vec2> samples(v);
    for (std::size_t k = 0; k < v.size() && v.size() > 1; ++k) {
        const Vec2 a = v[k], b = v[(k + 1) % v.size()];
        const int steps = static_cast<int>(std::ceil(norm(b - a) / pitch));
        for (int t = 1; t < steps; ++t) samples.push_back(a + (static_cast<double>(t) / steps) * (b - a));
    }
    if (p.is_full()) {
        for (double y = std::floor(y0 / pitch) * pitch; y <= y1; y += pitch)
            for (double x = std::floor(x0 / pitch) * pitch; x <= x1; x += pitch) {
                bool in = true;
                for (std::size_t k = 0; k < v.size() && in; ++k) in = cross(v[(k + 1) % v.size()] - v[k], Vec2{x, y} - v[k]) >= 0;
                if (in) samples.push_back({x, y});
            }
    }
    double d = detail::directed_cloud(samples, c.points);
    // Cloud points outside P.
    if (!p.is_full()) return std::max(d, detail::directed_cloud(c.points, samples));
    for (auto q : c.points) {
        double out = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const Vec2 a = v[k], e = v[(k + 1) % v.size()] - a;
            const double s = -cross(e, q - a) / norm(e);
            out = std::max(out, s);
        }
        d = std::max(d, out);
    }
    return d;
}

}  // namespace symmkit
