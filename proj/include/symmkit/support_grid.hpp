#pragma once

// Convex bodies as support functions sampled on a fixed direction set:
// N equally spaced directions on the circle, or an icosahedral geodesic grid
// on the 2-sphere. Values between grid directions are taken from the
// homogeneous interpolant h(v) ~ sum c_k h(u_k), v = sum c_k u_k, c_k >= 0,
// which is exact for points and never below the true support.

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "symmkit/config.hpp"
#include "symmkit/geom.hpp"
#include "symmkit/polygon.hpp"
#include "symmkit/polygon_io.hpp"

namespace symmkit {

using Dir3 = std::array<double, 3>;

namespace detail {
inline double dot3(const Dir3& a, const Dir3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Dir3 cross3(const Dir3& a, const Dir3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Dir3 unit3(const Dir3& a) {
    const double n = std::sqrt(dot3(a, a));
    return {a[0] / n, a[1] / n, a[2] / n};
}
/// Solid angle of the spherical triangle abc (unit vectors).
inline double spherical_area(const Dir3& a, const Dir3& b, const Dir3& c) {
    const double num = std::abs(dot3(a, cross3(b, c)));
    const double den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    return 2.0 * std::atan2(num, den);
}
}  // namespace detail

/// A value of h at an arbitrary direction, expressed through grid samples.
struct GridStencil {
    std::array<int, 3> index{-1, -1, -1};
    std::array<double, 3> coef{0, 0, 0};
    bool exact = false;
};

class DirectionSet {
public:
    /// N equally spaced angles 2 pi k / N, weights 2 pi / N.
    static std::shared_ptr<const DirectionSet> circle(int n) {
        if (n < 3) throw InputError("DirectionSet::circle: need N >= 3");
        auto d = std::shared_ptr<DirectionSet>(new DirectionSet());
        d->dim_ = 2;
        d->step_ = 2 * std::numbers::pi / n;
        for (int k = 0; k < n; ++k) {
            const double t = d->step_ * k;
            d->dirs_.push_back({std::cos(t), std::sin(t), 0.0});
            d->weights_.push_back(d->step_);
        }
        d->finish();
        return d;
    }

    /// Icosahedron subdivided `level` times (10 * 4^level + 2 directions);
    /// each direction carries a third of its incident spherical triangles.
    static std::shared_ptr<const DirectionSet> icosphere(int level = 4) {
        if (level < 0 || level > 7) throw InputError("DirectionSet::icosphere: level must be in [0, 7]");
        auto d = std::shared_ptr<DirectionSet>(new DirectionSet());
        d->dim_ = 3;
        d->level_ = level;
        const double p = (1 + std::sqrt(5.0)) / 2;
        const std::vector<Dir3> base{{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                                     {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
        for (const auto& v : base) d->dirs_.push_back(detail::unit3(v));
        d->tris_ = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                    {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                    {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
        for (int l = 0; l < level; ++l) {
            std::map<std::pair<int, int>, int> mid;
            auto midpoint = [&](int a, int b) {
                const auto key = std::minmax(a, b);
                if (auto it = mid.find(key); it != mid.end()) return it->second;
                const Dir3& x = d->dirs_[static_cast<std::size_t>(a)];
                const Dir3& y = d->dirs_[static_cast<std::size_t>(b)];
                d->dirs_.push_back(detail::unit3({x[0] + y[0], x[1] + y[1], x[2] + y[2]}));
                const int id = static_cast<int>(d->dirs_.size()) - 1;
                mid.emplace(key, id);
                return id;
            };
            std::vector<std::array<int, 3>> next;
            next.reserve(d->tris_.size() * 4);
            for (const auto& t : d->tris_) {
                const int a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
                next.push_back({t[0], a, c});
                next.push_back({t[1], b, a});
                next.push_back({t[2], c, b});
                next.push_back({a, b, c});
            }
            d->tris_ = std::move(next);
        }
        d->weights_.assign(d->dirs_.size(), 0.0);
        d->incident_.assign(d->dirs_.size(), {});
        for (std::size_t k = 0; k < d->tris_.size(); ++k) {
            const auto& t = d->tris_[k];
            const double a = detail::spherical_area(d->dirs_[static_cast<std::size_t>(t[0])],
                                                    d->dirs_[static_cast<std::size_t>(t[1])],
                                                    d->dirs_[static_cast<std::size_t>(t[2])]);
            for (int v : t) {
                d->weights_[static_cast<std::size_t>(v)] += a / 3;
                d->incident_[static_cast<std::size_t>(v)].push_back(static_cast<int>(k));
            }
        }
        d->finish();
        return d;
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return dirs_.size(); }
    [[nodiscard]] const Dir3& dir(std::size_t i) const { return dirs_[i]; }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] int level() const { return level_; }
    /// Angular spacing of the circle grid (0 on the sphere).
    [[nodiscard]] double step() const { return step_; }
    /// Measure of the unit sphere: 2 pi or 4 pi.
    [[nodiscard]] double sphere_measure() const { return dim_ == 2 ? 2 * std::numbers::pi : 4 * std::numbers::pi; }
    [[nodiscard]] int antipode(std::size_t i) const { return antipode_[i]; }
    [[nodiscard]] UnitDirection direction(std::size_t i) const {
        Vector v(dim_);
        for (int k = 0; k < dim_; ++k) v[k] = dirs_[i][static_cast<std::size_t>(k)];
        return UnitDirection::normalized(v);
    }

    /// Expresses v (unit, padded with zero in 2D) through at most three
    /// grid directions with nonnegative coefficients.
    [[nodiscard]] GridStencil locate(const Dir3& v, double align_tol = 1e-12) const {
        GridStencil s;
        if (dim_ == 2) {
            const std::size_t n = dirs_.size();
            double pos = std::atan2(v[1], v[0]) / step_;
            if (pos < 0) pos += static_cast<double>(n);
            const double r = std::round(pos);
            if (std::abs(pos - r) * step_ <= align_tol) {
                s.index[0] = static_cast<int>(static_cast<std::size_t>(r) % n);
                s.coef[0] = 1.0;
                s.exact = true;
                return s;
            }
            const auto i = static_cast<std::size_t>(std::floor(pos)) % n, j = (i + 1) % n;
            const Dir3 &a = dirs_[i], &b = dirs_[j];
            const double det = a[0] * b[1] - a[1] * b[0];
            s.index = {static_cast<int>(i), static_cast<int>(j), -1};
            s.coef = {(v[0] * b[1] - v[1] * b[0]) / det, (a[0] * v[1] - a[1] * v[0]) / det, 0.0};
            return s;
        }
        std::size_t best = 0;
        double bd = -2.0;
        for (std::size_t i = 0; i < dirs_.size(); ++i) {
            const double c = detail::dot3(dirs_[i], v);
            if (c > bd) {
                bd = c;
                best = i;
            }
        }
        const Dir3& u = dirs_[best];
        const Dir3 diff{u[0] - v[0], u[1] - v[1], u[2] - v[2]};
        if (std::sqrt(detail::dot3(diff, diff)) <= align_tol) {
            s.index[0] = static_cast<int>(best);
            s.coef[0] = 1.0;
            s.exact = true;
            return s;
        }
        // Barycentric solve in each incident triangle; keep the one where all
        // coefficients are (nearly) nonnegative.
        double best_min = -INFINITY;
        for (int t : incident_[best]) {
            const auto& tri = tris_[static_cast<std::size_t>(t)];
            const Dir3 &a = dirs_[static_cast<std::size_t>(tri[0])], &b = dirs_[static_cast<std::size_t>(tri[1])],
                       &c = dirs_[static_cast<std::size_t>(tri[2])];
            const double det = detail::dot3(a, detail::cross3(b, c));
            const std::array<double, 3> k{detail::dot3(v, detail::cross3(b, c)) / det,
                                          detail::dot3(a, detail::cross3(v, c)) / det,
                                          detail::dot3(a, detail::cross3(b, v)) / det};
            const double m = std::min({k[0], k[1], k[2]});
            if (m > best_min) {
                best_min = m;
                s.index = tri;
                s.coef = k;
            }
        }
        return s;
    }

private:
    DirectionSet() = default;

    void finish() {
        antipode_.assign(dirs_.size(), -1);
        for (std::size_t i = 0; i < dirs_.size(); ++i) {
            const Dir3& u = dirs_[i];
            const auto s = locate({-u[0], -u[1], -u[2]}, 1e-9);
            if (s.exact) antipode_[i] = s.index[0];
        }
    }

    int dim_ = 2;
    int level_ = -1;
    double step_ = 0.0;
    std::vector<Dir3> dirs_;
    std::vector<double> weights_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<std::vector<int>> incident_;
    std::vector<int> antipode_;
};

using DirectionSetPtr = std::shared_ptr<const DirectionSet>;

class SupportGrid {
public:
    SupportGrid(DirectionSetPtr dirs, std::vector<double> values) : dirs_(std::move(dirs)), values_(std::move(values)) {
        if (!dirs_) throw InputError("SupportGrid: null direction set");
        if (values_.size() != dirs_->size()) throw InputError("SupportGrid: one value per direction required");
        for (double v : values_)
            if (!std::isfinite(v)) throw InputError("SupportGrid: non-finite support value");
    }

    [[nodiscard]] const DirectionSet& dirs() const { return *dirs_; }
    [[nodiscard]] const DirectionSetPtr& dirs_ptr() const { return dirs_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] int dim() const { return dirs_->dim(); }
    /// Set when some value came from interpolation rather than a grid sample.
    [[nodiscard]] bool approximate() const { return approximate_; }
    /// Largest spread of sample values blended by an interpolating stencil.
    [[nodiscard]] double interpolation_error() const { return interp_err_; }

    [[nodiscard]] double value_at(const GridStencil& s) const {
        double h = 0.0;
        for (int k = 0; k < 3; ++k)
            if (s.index[static_cast<std::size_t>(k)] >= 0)
                h += s.coef[static_cast<std::size_t>(k)] * values_[static_cast<std::size_t>(s.index[static_cast<std::size_t>(k)])];
        return h;
    }
    [[nodiscard]] double value_at(const Dir3& u) const { return value_at(dirs_->locate(u)); }

    void mark_approximate(double err) {
        approximate_ = true;
        interp_err_ = std::max(interp_err_, err);
    }
    void inherit_flags(const SupportGrid& g) {
        approximate_ = approximate_ || g.approximate_;
        interp_err_ = std::max(interp_err_, g.interp_err_);
    }

private:
    DirectionSetPtr dirs_;
    std::vector<double> values_;
    bool approximate_ = false;
    double interp_err_ = 0.0;
};

namespace detail {
inline void require_same_dirs(const SupportGrid& a, const SupportGrid& b, const char* what) {
    if (a.dirs_ptr() == b.dirs_ptr()) return;
    const auto &da = a.dirs(), &db = b.dirs();
    bool same = da.dim() == db.dim() && da.size() == db.size();
    for (std::size_t i = 0; same && i < da.size(); ++i)
        for (int k = 0; k < 3; ++k) same = same && std::abs(da.dir(i)[static_cast<std::size_t>(k)] - db.dir(i)[static_cast<std::size_t>(k)]) <= 1e-12;
    if (!same) throw InputError(std::string(what) + ": grids use different direction sets");
}

inline Dir3 to_dir3(const Vector& v) { return {v[0], v[1], v.size() > 2 ? v[2] : 0.0}; }

/// Error scale of an interpolating stencil: spread of the samples it blends.
inline double stencil_spread(const SupportGrid& g, const GridStencil& s) {
    if (s.exact) return 0.0;
    double lo = INFINITY, hi = -INFINITY;
    for (int idx : s.index)
        if (idx >= 0) {
            lo = std::min(lo, g.values()[static_cast<std::size_t>(idx)]);
            hi = std::max(hi, g.values()[static_cast<std::size_t>(idx)]);
        }
    return hi - lo;
}
}  // namespace detail

inline SupportGrid sample_from_polygon(const ConvexPolygon& p, DirectionSetPtr d) {
    if (d->dim() != 2) throw InputError("sample_from_polygon: direction set must be planar");
    std::vector<double> h(d->size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = support_value(p, Vec2{d->dir(i)[0], d->dir(i)[1]});
    return SupportGrid(std::move(d), std::move(h));
}

/// Support function of conv(points).
inline SupportGrid sample_from_points(const std::vector<Vector>& pts, DirectionSetPtr d) {
    if (pts.empty()) throw InputError("sample_from_points: empty point set");
    std::vector<double> h(d->size(), -INFINITY);
    for (const auto& p : pts) {
        if (p.size() != d->dim()) throw InputError("sample_from_points: dimension mismatch");
        const Dir3 q = detail::to_dir3(p);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::max(h[i], detail::dot3(q, d->dir(i)));
    }
    return SupportGrid(std::move(d), std::move(h));
}

inline SupportGrid ball_grid(DirectionSetPtr d, double r) {
    if (!(r >= 0)) throw InputError("ball_grid: radius must be nonnegative");
    const std::size_t n = d->size();
    return SupportGrid(std::move(d), std::vector<double>(n, r));
}

/// h1 + h2 (the Minkowski sum of the bodies).
inline SupportGrid add_grids(const SupportGrid& a, const SupportGrid& b) {
    detail::require_same_dirs(a, b, "add_grids");
    std::vector<double> h(a.values().size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = a.values()[i] + b.values()[i];
    SupportGrid out(a.dirs_ptr(), std::move(h));
    out.inherit_flags(a);
    out.inherit_flags(b);
    return out;
}

/// h_{M_H K}(u) = (h(u) + h(R_H u)) / 2.
inline SupportGrid minkowski_symmetrize_grid(const SupportGrid& g, const LineSubspace& h,
                                             const Tolerances& tol = default_tolerances()) {
    const auto& d = g.dirs();
    if (h.ambient_dim() != d.dim()) throw InputError("minkowski_symmetrize_grid: dimension mismatch");
    std::vector<double> out(g.values().size());
    double err = 0.0;
    bool approx = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Dir3& u = d.dir(i);
        Vector uv(d.dim());
        for (int k = 0; k < d.dim(); ++k) uv[k] = u[static_cast<std::size_t>(k)];
        const Vector r = 2.0 * (h.basis() * (h.basis().transpose() * uv)) - uv;
        const auto s = d.locate(detail::to_dir3(r), tol.grid_alignment);
        if (!s.exact) {
            approx = true;
            err = std::max(err, detail::stencil_spread(g, s));
        }
        out[i] = 0.5 * (g.values()[i] + g.value_at(s));
    }
    SupportGrid result(g.dirs_ptr(), std::move(out));
    result.inherit_flags(g);
    if (approx) result.mark_approximate(err);
    return result;
}

/// values'_i = h(R^T u_i): the support function of R K.
inline SupportGrid rotate_grid(const SupportGrid& g, const RotationOp& r, const Tolerances& tol = default_tolerances()) {
    const auto& d = g.dirs();
    if (r.dim() != d.dim()) throw InputError("rotate_grid: dimension mismatch");
    const std::size_t n = d.size();
    std::vector<double> out(n);
    if (d.dim() == 2) {
        const double pos = r.planar_angle() / d.step();
        const double k = std::round(pos);
        if (std::abs(pos - k) * d.step() <= tol.grid_alignment) {
            const auto nn = static_cast<long long>(n);
            const long long shift = ((static_cast<long long>(k) % nn) + nn) % nn;
            for (std::size_t i = 0; i < n; ++i)
                out[i] = g.values()[static_cast<std::size_t>((static_cast<long long>(i) - shift + nn) % nn)];
            SupportGrid res(g.dirs_ptr(), std::move(out));
            res.inherit_flags(g);
            return res;
        }
    }
    const Matrix rt = r.matrix().transpose();
    double err = 0.0;
    bool approx = false;
    for (std::size_t i = 0; i < n; ++i) {
        Vector uv(d.dim());
        for (int k = 0; k < d.dim(); ++k) uv[k] = d.dir(i)[static_cast<std::size_t>(k)];
        const auto s = d.locate(detail::to_dir3(rt * uv), tol.grid_alignment);
        if (!s.exact) {
            approx = true;
            err = std::max(err, detail::stencil_spread(g, s));
        }
        out[i] = g.value_at(s);
    }
    SupportGrid res(g.dirs_ptr(), std::move(out));
    res.inherit_flags(g);
    if (approx) res.mark_approximate(err);
    return res;
}

/// (1/omega) * sum_i w_i (h(u_i) + h(-u_i)).
inline double mean_width_quadrature(const SupportGrid& g) {
    const auto& d = g.dirs();
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int a = d.antipode(i);
        const Dir3& u = d.dir(i);
        const double opp = a >= 0 ? g.values()[static_cast<std::size_t>(a)] : g.value_at(Dir3{-u[0], -u[1], -u[2]});
        s += d.weight(i) * (g.values()[i] + opp);
    }
    return s / d.sphere_measure();
}

/// max_i |h1_i - h2_i|: a lower bound on the Hausdorff distance.
inline double hausdorff_supnorm(const SupportGrid& a, const SupportGrid& b) {
    detail::require_same_dirs(a, b, "hausdorff_supnorm");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

/// Discrete support-function test on the circle: each sample lies below
/// the value forced by its two neighbours (within tol).
inline bool is_consistent(const SupportGrid& g, double tol = 1e-9) {
    const auto& d = g.dirs();
    if (d.dim() != 2) return true;
    const std::size_t n = d.size();
    const double dt = d.step();
    const auto& h = g.values();
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = h[(i + n - 1) % n], next = h[(i + 1) % n];
        // For equal spacing: h_i <= (h_{i-1} + h_{i+1}) / (2 cos dt).
        if (h[i] > (prev + next) / (2 * std::cos(dt)) + tol) return false;
    }
    return true;
}

/// The polygon {x : x.u_i <= h_i for all i} of a planar grid.
inline ConvexPolygon grid_polygon(const SupportGrid& g) {
    const auto& d = g.dirs();
    if (d.dim() != 2) throw InputError("grid_polygon: planar grids only");
    const std::size_t n = d.size();
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const Dir3 &a = d.dir(i), &b = d.dir(j);
        const double det = a[0] * b[1] - a[1] * b[0];
        const double hi = g.values()[i], hj = g.values()[j];
        pts.push_back({(hi * b[1] - hj * a[1]) / det, (a[0] * hj - b[0] * hi) / det});
    }
    return ConvexPolygon::hull(pts);
}

/// Area of the halfplane polygon in 2D; NaN in 3D.
inline double grid_area(const SupportGrid& g) {
    if (g.dim() != 2) return std::nan("");
    return area(grid_polygon(g));
}

// --- snapshot files ---------------------------------------------------------

inline void write_grid(std::ostream& out, const SupportGrid& g) {
    const auto& d = g.dirs();
    out << d.dim() << ' ' << d.size() << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Dir3& u = d.dir(i);
        if (d.dim() == 2)
            out << format_real(d.step() * static_cast<double>(i)) << ' ' << format_real(g.values()[i]) << '\n';
        else
            out << format_real(u[0]) << ' ' << format_real(u[1]) << ' ' << format_real(u[2]) << ' '
                << format_real(g.values()[i]) << '\n';
    }
}

inline SupportGrid parse_grid(std::istream& in, const std::string& name = "<stream>") {
    int n = 0;
    long long count = 0;
    if (!(in >> n >> count) || (n != 2 && n != 3) || count < 3) throw ParseError(name + ": bad header, expected \"n N\"");
    DirectionSetPtr d;
    if (n == 2) {
        d = DirectionSet::circle(static_cast<int>(count));
    } else {
        int level = -1;
        for (int l = 0; l <= 7; ++l)
            if (10LL * (1LL << (2 * l)) + 2 == count) level = l;
        if (level < 0) throw ParseError(name + ": N does not match an icosahedral grid");
        d = DirectionSet::icosphere(level);
    }
    std::vector<double> h(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (n == 2) {
            double t = 0;
            if (!(in >> t >> h[i])) throw ParseError(name + ": truncated grid file");
            if (std::abs(t - d->step() * static_cast<double>(i)) > 1e-12) throw ParseError(name + ": angles are not the standard grid");
        } else {
            Dir3 u{};
            if (!(in >> u[0] >> u[1] >> u[2] >> h[i])) throw ParseError(name + ": truncated grid file");
            for (int k = 0; k < 3; ++k)
                if (std::abs(u[static_cast<std::size_t>(k)] - d->dir(i)[static_cast<std::size_t>(k)]) > 1e-12)
                    throw ParseError(name + ": directions are not the standard grid");
        }
    }
    try {
        SupportGrid g(d, std::move(h));
        if (!is_consistent(g)) throw ParseError(name + ": values are not a support function");
        return g;
    } catch (const InputError& e) {
        throw ParseError(name + ": " + e.what());
    }
}

inline void write_grid(const std::string& path, const SupportGrid& g) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    write_grid(out, g);
}

inline SupportGrid read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_grid(in, path);
}

}  // namespace symmkit
