#pragma once

// Test-only reference computations, independent of the library's fast paths.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "symmkit/polygon.hpp"

namespace oracle {

using symmkit::Vec2;

/// Gift-wrapping hull (O(nh)), kept separate from the library's monotone chain.
inline std::vector<Vec2> jarvis_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
                  return std::abs(a.x - b.x) < 1e-13 && std::abs(a.y - b.y) < 1e-13;
              }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> h;
    std::size_t start = 0, cur = 0;
    do {
        h.push_back(pts[cur]);
        std::size_t next = (cur + 1) % pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double c = symmkit::cross(pts[next] - pts[cur], pts[i] - pts[cur]);
            const Vec2 a = pts[i] - pts[cur], b = pts[next] - pts[cur];
            if (c < -1e-13 || (std::abs(c) <= 1e-13 && symmkit::dot(a, a) > symmkit::dot(b, b))) next = i;
        }
        cur = next;
    } while (cur != start && h.size() <= pts.size());
    return h;
}

/// Brute-force support function over an explicit point list.
inline double support(const std::vector<Vec2>& pts, Vec2 u) {
    double best = -INFINITY;
    for (auto p : pts) best = std::max(best, symmkit::dot(p, u));
    return best;
}

/// All pairwise sums a + b.
inline std::vector<Vec2> pair_sums(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double scale = 1.0) {
    std::vector<Vec2> s;
    for (auto p : a)
        for (auto q : b) s.push_back(scale * (p + q));
    return s;
}

/// sup |h_A - h_B| by dense sampling of the circle (a lower bound).
inline double sampled_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b, int samples) {
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 u = symmkit::unit_vec(2 * std::numbers::pi * (i + 0.5) / samples);
        best = std::max(best, std::abs(support(a, u) - support(b, u)));
    }
    return best;
}

/// Polygons equal as vertex sets up to tolerance (order-free).
inline bool same_vertex_set(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (auto p : a) {
        bool found = false;
        for (auto q : b) found = found || (std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol);
        if (!found) return false;
    }
    return true;
}

/// Composite midpoint rule for (1/pi)∫_0^{2pi} h(θ) dθ with a fine uniform grid.
template <typename H>
double mean_width_midpoint(H&& h, int samples) {
    double s = 0.0;
    for (int i = 0; i < samples; ++i) s += h(2 * std::numbers::pi * (i + 0.5) / samples);
    return s * (2 * std::numbers::pi / samples) / std::numbers::pi;
}

}  // namespace oracle
