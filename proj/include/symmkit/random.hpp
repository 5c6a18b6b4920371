#pragma once

// Seeded generators whose output depends only on the seed (the standard
// library distributions are implementation-defined, so none are used).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "symmkit/polygon.hpp"

namespace symmkit {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

/// Hull of `points` samples drawn uniformly from the disc of `radius`
/// around `center`; retried until the hull is full-dimensional.
inline ConvexPolygon random_polygon(Rng& rng, int points = 12, double radius = 1.0, Vec2 center = {}) {
    for (;;) {
        std::vector<Vec2> pts;
        pts.reserve(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double r = radius * std::sqrt(rng.uniform());
            const double t = 2 * std::numbers::pi * rng.uniform();
            pts.push_back(center + r * unit_vec(t));
        }
        auto p = ConvexPolygon::hull(pts);
        if (p.is_full() && area(p) > 1e-3 * radius * radius) return p;
    }
}

inline LineSubspace random_line(Rng& rng) { return LineSubspace::line2d(std::numbers::pi * rng.uniform()); }

}  // namespace symmkit
