#pragma once

// Exact planar convex bodies stored as counterclockwise vertex cycles, with
// measures, Minkowski sums, the symmetrization operators and metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "symmkit/config.hpp"
#include "symmkit/geom.hpp"

namespace symmkit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// (cos θ, sin θ), exact at the quarter turns so axis-aligned lines reflect
/// and rotate without rounding.
inline Vec2 unit_vec(double theta) {
    constexpr double q = std::numbers::pi / 2;
    if (theta == 0.0) return {1.0, 0.0};
    if (theta == q) return {0.0, 1.0};
    if (theta == 2 * q || theta == -2 * q) return {-1.0, 0.0};
    if (theta == -q || theta == 3 * q) return {0.0, -1.0};
    return {std::cos(theta), std::sin(theta)};
}

enum class PolygonKind { point, segment, full };

class ConvexPolygon;

namespace detail {
std::vector<Vec2> normalize_cycle(std::vector<Vec2> v, double collinear_rel);
}

/// A convex compact subset of the plane: a point, a segment, or a polygon
/// with non-empty interior. Vertices run counterclockwise starting from the
/// lowest (then leftmost) vertex, with no repeated closing vertex and no
/// collinear triples.
class ConvexPolygon {
public:
    /// Convex hull of an arbitrary point set.
    static ConvexPolygon hull(std::span<const Vec2> pts, const Tolerances& tol = default_tolerances());

    /// Vertices already in convex counterclockwise position. Near-collinear
    /// and duplicate vertices are merged; a clockwise or reflex input throws.
    static ConvexPolygon from_ccw(std::vector<Vec2> v, const Tolerances& tol = default_tolerances());

    static ConvexPolygon point(Vec2 p) { return ConvexPolygon({p}); }
    static ConvexPolygon segment(Vec2 a, Vec2 b) {
        return from_ccw({a, b});
    }

    [[nodiscard]] const std::vector<Vec2>& vertices() const& { return v_; }
    [[nodiscard]] std::vector<Vec2> vertices() && { return std::move(v_); }  // safe in range-for over a temporary
    [[nodiscard]] std::size_t size() const { return v_.size(); }
    [[nodiscard]] PolygonKind kind() const {
        return v_.size() == 1 ? PolygonKind::point : v_.size() == 2 ? PolygonKind::segment : PolygonKind::full;
    }
    [[nodiscard]] bool is_full() const { return kind() == PolygonKind::full; }

    /// Same vertex cycle, bit for bit, from the same starting vertex.
    friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) { return a.v_ == b.v_; }

    /// Builds from a cycle produced by an internal operator: reflex
    /// vertices caused by rounding are removed rather than rejected.
    static ConvexPolygon from_cycle_unchecked(std::vector<Vec2> v, const Tolerances& tol = default_tolerances()) {
        if (v.empty()) throw InputError("ConvexPolygon: empty vertex list");
        return ConvexPolygon(detail::normalize_cycle(std::move(v), tol.collinear_area));
    }

private:
    explicit ConvexPolygon(std::vector<Vec2> v) : v_(std::move(v)) {}
    std::vector<Vec2> v_;
};

namespace detail {

inline double bbox_diag2(const std::vector<Vec2>& v) {
    double x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
    for (const auto& p : v) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    return (x1 - x0) * (x1 - x0) + (y1 - y0) * (y1 - y0);
}

inline bool lower_left(Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }

inline void rotate_to_lowest(std::vector<Vec2>& v) {
    auto it = std::min_element(v.begin(), v.end(), lower_left);
    std::rotate(v.begin(), it, v.end());
}

inline double signed_area2(const std::vector<Vec2>& v) {
    double s = 0.0;
    const Vec2 o = v[0];
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += cross(v[i] - o, v[i + 1] - o);
    return s;
}

/// Extreme pair of a nearly one-dimensional vertex set.
inline std::vector<Vec2> collapse_to_segment(const std::vector<Vec2>& v, double diag2) {
    std::size_t far = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 d = v[i] - v[0];
        if (dot(d, d) > best) {
            best = dot(d, d);
            far = i;
        }
    }
    const Vec2 dir = v[far] - v[0];
    if (dot(dir, dir) <= 1e-30 * std::max(diag2, 1e-300) || best == 0.0) return {v[0]};
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (dot(v[i], dir) < dot(v[lo], dir)) lo = i;
        if (dot(v[i], dir) > dot(v[hi], dir)) hi = i;
    }
    std::vector<Vec2> s{v[lo], v[hi]};
    rotate_to_lowest(s);
    return s;
}

/// Removes duplicates, reflex and near-collinear vertices from a roughly
/// convex counterclockwise cycle. A vertex is dropped when the triangle it
/// forms with its neighbours has area below collinear_rel * diam^2.
inline std::vector<Vec2> normalize_cycle(std::vector<Vec2> v, double collinear_rel) {
    for (const auto& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("ConvexPolygon: non-finite vertex");
    if (v.size() == 1) return v;
    const double diag2 = bbox_diag2(v);
    if (diag2 == 0.0) return {v[0]};
    const double thr2 = 2.0 * collinear_rel * diag2;  // twice the triangle area
    const double dup2 = 1e-28 * diag2;

    auto bad = [&](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a) < thr2; };

    std::vector<Vec2> s;
    s.reserve(v.size());
    for (const auto& p : v) {
        if (!s.empty()) {
            const Vec2 d = p - s.back();
            if (dot(d, d) <= dup2) continue;
        }
        while (s.size() >= 2 && bad(s[s.size() - 2], s.back(), p)) s.pop_back();
        s.push_back(p);
    }
    // Close the cycle: fix the seam between the tail and the head.
    while (s.size() >= 2) {
        const Vec2 d = s.front() - s.back();
        if (dot(d, d) <= dup2) {
            s.pop_back();
            continue;
        }
        if (s.size() >= 3 && bad(s[s.size() - 2], s.back(), s.front())) {
            s.pop_back();
            continue;
        }
        if (s.size() >= 3 && bad(s.back(), s.front(), s[1])) {
            s.erase(s.begin());
            continue;
        }
        break;
    }
    if (s.size() >= 3 && signed_area2(s) > thr2) {
        rotate_to_lowest(s);
        return s;
    }
    return collapse_to_segment(s.size() >= 2 ? s : v, diag2);
}

}  // namespace detail

inline ConvexPolygon ConvexPolygon::hull(std::span<const Vec2> pts, const Tolerances& tol) {
    if (pts.empty()) throw InputError("ConvexPolygon::hull: empty point set");
    std::vector<Vec2> p(pts.begin(), pts.end());
    for (const auto& q : p)
        if (!std::isfinite(q.x) || !std::isfinite(q.y)) throw InputError("ConvexPolygon::hull: non-finite point");
    std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() == 1) return ConvexPolygon({p[0]});
    std::vector<Vec2> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return ConvexPolygon(detail::normalize_cycle(std::move(h), tol.collinear_area));
}

inline ConvexPolygon ConvexPolygon::from_ccw(std::vector<Vec2> v, const Tolerances& tol) {
    if (v.empty()) throw InputError("ConvexPolygon: empty vertex list");
    if (v.size() >= 3) {
        const double diag2 = detail::bbox_diag2(v);
        const double slack = 2.0 * tol.predicate * diag2;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i], b = v[(i + 1) % v.size()], c = v[(i + 2) % v.size()];
            if (cross(b - a, c - a) < -slack)
                throw InputError("ConvexPolygon: vertices are not in convex counterclockwise order");
        }
        // Total turning of a convex cycle is exactly one revolution.
        double turn = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 e0 = v[(i + 1) % v.size()] - v[i];
            const Vec2 e1 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
            if (norm(e0) == 0.0 || norm(e1) == 0.0) continue;
            turn += std::atan2(cross(e0, e1), dot(e0, e1));
        }
        if (std::abs(turn - 2 * std::numbers::pi) > 1e-6 && detail::signed_area2(v) > slack)
            throw InputError("ConvexPolygon: vertex cycle winds more than once");
    }
    return ConvexPolygon(detail::normalize_cycle(std::move(v), tol.collinear_area));
}

// ---------------------------------------------------------------------------
// Shape builders

inline ConvexPolygon regular_polygon(int n, double radius, double phase = 0.0, Vec2 center = {}) {
    if (n < 3 || !(radius > 0)) throw InputError("regular_polygon: need n >= 3, radius > 0");
    std::vector<Vec2> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = phase + 2 * std::numbers::pi * i / n;
        v[static_cast<std::size_t>(i)] = center + radius * unit_vec(t);
    }
    return ConvexPolygon::from_ccw(std::move(v));
}

/// Inscribed polygon of the ellipse x^2/a^2 + y^2/b^2 <= 1.
inline ConvexPolygon ellipse_polygon(double a, double b, int n) {
    if (n < 3 || !(a > 0) || !(b > 0)) throw InputError("ellipse_polygon: bad parameters");
    std::vector<Vec2> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        v[static_cast<std::size_t>(i)] = {a * std::cos(t), b * std::sin(t)};
    }
    return ConvexPolygon::from_ccw(std::move(v));
}

inline ConvexPolygon rectangle(double x0, double y0, double x1, double y1) {
    return ConvexPolygon::from_ccw({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

// ---------------------------------------------------------------------------
// Support function and normal fan

inline double support_value(const ConvexPolygon& p, Vec2 u) {
    double best = -INFINITY;
    for (const auto& v : p.vertices()) best = std::max(best, dot(u, v));
    return best;
}

inline double support_value(const ConvexPolygon& p, const UnitDirection& u) {
    if (u.dim() != 2) throw InputError("support_value: direction must be planar");
    return support_value(p, Vec2{u.coords()[0], u.coords()[1]});
}

/// Normal fan of a polygon: arc k of the circle, starting at `start[k]`
/// (angles in [0, 2pi), ascending) and ending at the next start, is the set
/// of directions in which `vertex[k]` is extreme.
struct NormalFan {
    std::vector<double> start;
    std::vector<Vec2> vertex;
};

namespace detail {
inline double wrap_2pi(double a) {
    constexpr double tau = 2 * std::numbers::pi;
    a = std::fmod(a, tau);
    if (a < 0) a += tau;
    if (a >= tau) a = 0.0;
    return a;
}
}  // namespace detail

inline NormalFan normal_fan(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    const std::size_t n = v.size();
    NormalFan f;
    if (n == 1) {
        f.start = {0.0};
        f.vertex = {v[0]};
        return f;
    }
    std::vector<std::pair<double, Vec2>> arcs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = v[i] - v[(i + n - 1) % n];  // edge entering vertex i
        arcs[i] = {detail::wrap_2pi(std::atan2(e.y, e.x) - std::numbers::pi / 2), v[i]};
    }
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    f.start.reserve(n);
    f.vertex.reserve(n);
    for (const auto& [a, w] : arcs) {
        f.start.push_back(a);
        f.vertex.push_back(w);
    }
    return f;
}

/// Visits the circle [0, 2pi) cut at the union of the fans' breakpoints
/// (plus any extra cut angles). On each piece both supports are single
/// sinusoids: visit(lo, hi, vertex_of_first, vertex_of_second).
template <typename Visit>
void for_each_fan_piece(const NormalFan& f, const NormalFan& g, std::span<const double> extra, Visit&& visit) {
    constexpr double tau = 2 * std::numbers::pi;
    std::vector<double> cuts;
    cuts.reserve(f.start.size() + g.start.size() + extra.size() + 2);
    cuts.insert(cuts.end(), f.start.begin(), f.start.end());
    cuts.insert(cuts.end(), g.start.begin(), g.start.end());
    cuts.insert(cuts.end(), extra.begin(), extra.end());
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(tau);
    // Arc owning angle a: last start <= a, wrapping to the final arc.
    auto owner = [](const NormalFan& fan, std::size_t& k, double a) {
        while (k + 1 < fan.start.size() && fan.start[k + 1] <= a) ++k;
        return (fan.start[k] <= a) ? fan.vertex[k] : fan.vertex.back();
    };
    std::size_t kf = 0, kg = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        visit(lo, hi, owner(f, kf, lo), owner(g, kg, lo));
    }
}

namespace detail {
/// max and min of d·u(theta) over theta in [lo, hi].
inline std::pair<double, double> sinusoid_range(Vec2 d, double lo, double hi) {
    double mx = std::max(dot(d, unit_vec(lo)), dot(d, unit_vec(hi)));
    double mn = std::min(dot(d, unit_vec(lo)), dot(d, unit_vec(hi)));
    const double r = norm(d);
    if (r > 0) {
        const double phi = wrap_2pi(std::atan2(d.y, d.x));
        for (double c : {phi, wrap_2pi(phi + std::numbers::pi)}) {
            for (double cc : {c, c + 2 * std::numbers::pi}) {
                if (cc > lo && cc < hi) {
                    const double val = dot(d, unit_vec(cc));
                    mx = std::max(mx, val);
                    mn = std::min(mn, val);
                }
            }
        }
    }
    return {mx, mn};
}
}  // namespace detail

/// min and max of the support function over the unit circle.
inline std::pair<double, double> support_range(const ConvexPolygon& p, Vec2 center = {}) {
    const NormalFan f = normal_fan(p);
    double mn = INFINITY, mx = -INFINITY;
    for_each_fan_piece(f, f, {}, [&](double lo, double hi, Vec2 v, Vec2) {
        const auto [a, b] = detail::sinusoid_range(v - center, lo, hi);
        mx = std::max(mx, a);
        mn = std::min(mn, b);
    });
    return {mn, mx};
}

// ---------------------------------------------------------------------------
// Measures

struct BodyMeasures {
    double area = 0.0;
    double perimeter = 0.0;
    double mean_width = 0.0;             // perimeter / pi
    double mean_width_quadrature = 0.0;  // support-function integral
};

inline double area(const ConvexPolygon& p) {
    if (!p.is_full()) return 0.0;
    return 0.5 * detail::signed_area2(p.vertices());
}

/// Boundary length; a segment's boundary traverses it twice.
inline double perimeter(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    if (v.size() == 1) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += norm(v[(i + 1) % v.size()] - v[i]);
    return s;
}

inline double mean_width(const ConvexPolygon& p) { return perimeter(p) / std::numbers::pi; }

/// (1/pi) ∫ h(θ) dθ over the circle, cut into `cells` equal pieces refined at
/// the normal-fan breakpoints, two-point Gauss–Legendre on every piece.
inline double mean_width_by_quadrature(const ConvexPolygon& p, int cells = 512) {
    const NormalFan f = normal_fan(p);
    std::vector<double> extra(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) extra[static_cast<std::size_t>(i)] = 2 * std::numbers::pi * i / cells;
    const double g = 1.0 / std::sqrt(3.0);
    double integral = 0.0;
    for_each_fan_piece(f, f, extra, [&](double lo, double hi, Vec2 v, Vec2) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        integral += half * (dot(v, unit_vec(mid - g * half)) + dot(v, unit_vec(mid + g * half)));
    });
    return integral / std::numbers::pi;
}

inline BodyMeasures measures(const ConvexPolygon& p) {
    BodyMeasures m;
    m.area = area(p);
    m.perimeter = perimeter(p);
    m.mean_width = m.perimeter / std::numbers::pi;
    m.mean_width_quadrature = mean_width_by_quadrature(p);
    return m;
}

/// Steiner point (1/pi)∫ h(u) u dθ: vertices weighted by their exterior angle.
inline Vec2 steiner_point(const ConvexPolygon& p) {
    const NormalFan f = normal_fan(p);
    Vec2 s{};
    const std::size_t n = f.start.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double end = (k + 1 < n) ? f.start[k + 1] : f.start[0] + 2 * std::numbers::pi;
        s = s + ((end - f.start[k]) / (2 * std::numbers::pi)) * f.vertex[k];
    }
    return s;
}

/// max_u h(u) - min_u h(u) after centring at the Steiner point; vanishes
/// exactly for discs.
inline double ball_gap(const ConvexPolygon& p) {
    if (!p.is_full()) throw InputError("ball_gap: polygon must be full-dimensional");
    const auto [mn, mx] = support_range(p, steiner_point(p));
    return mx - mn;
}

// ---------------------------------------------------------------------------
// Rigid maps

inline ConvexPolygon translate_polygon(const ConvexPolygon& p, Vec2 t) {
    std::vector<Vec2> v = p.vertices();
    for (auto& q : v) q = q + t;
    return ConvexPolygon::from_cycle_unchecked(std::move(v));
}

inline Vec2 reflect_vec(Vec2 x, double line_angle) {
    const auto [c, s] = unit_vec(2 * line_angle);
    return {c * x.x + s * x.y, s * x.x - c * x.y};
}

inline ConvexPolygon reflect_polygon(const ConvexPolygon& p, const LineSubspace& h) {
    if (!h.is_planar_line()) throw InputError("reflect_polygon: subspace must be a planar line");
    std::vector<Vec2> v;
    v.reserve(p.size());
    for (auto it = p.vertices().rbegin(); it != p.vertices().rend(); ++it) v.push_back(reflect_vec(*it, h.angle()));
    return ConvexPolygon::from_cycle_unchecked(std::move(v));
}

inline ConvexPolygon rotate_polygon(const ConvexPolygon& p, double theta) {
    const auto [c, s] = unit_vec(theta);
    std::vector<Vec2> v = p.vertices();
    for (auto& q : v) q = {c * q.x - s * q.y, s * q.x + c * q.y};
    return ConvexPolygon::from_cycle_unchecked(std::move(v));
}

inline ConvexPolygon rotate_polygon(const ConvexPolygon& p, const RotationOp& r) {
    if (r.dim() != 2) throw InputError("rotate_polygon: rotation must be planar");
    const auto& m = r.matrix();
    std::vector<Vec2> v = p.vertices();
    for (auto& q : v) q = {m(0, 0) * q.x + m(0, 1) * q.y, m(1, 0) * q.x + m(1, 1) * q.y};
    return ConvexPolygon::from_cycle_unchecked(std::move(v));
}

inline ConvexPolygon scale_polygon(const ConvexPolygon& p, double t) {
    if (!(t > 0) || !std::isfinite(t)) throw InputError("scale_polygon: factor must be positive");
    std::vector<Vec2> v = p.vertices();
    for (auto& q : v) q = t * q;
    return ConvexPolygon::from_cycle_unchecked(std::move(v));
}

// ---------------------------------------------------------------------------
// Minkowski sum

namespace detail {
inline int half_plane(Vec2 e) { return (e.y < 0 || (e.y == 0 && e.x < 0)) ? 1 : 0; }
inline bool angle_less(Vec2 a, Vec2 b) {
    const int ha = half_plane(a), hb = half_plane(b);
    return ha != hb ? ha < hb : cross(a, b) > 0;
}
inline std::vector<Vec2> edges(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    if (v.size() == 1) return {};
    std::vector<Vec2> e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e[i] = v[(i + 1) % v.size()] - v[i];
    return e;
}
}  // namespace detail

/// Merges edge vectors in angular order; parallel edges fuse into one.
inline ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
    const auto ep = detail::edges(p), eq = detail::edges(q);
    std::vector<Vec2> out;
    out.reserve(ep.size() + eq.size() + 1);
    Vec2 pos = p.vertices()[0] + q.vertices()[0];
    out.push_back(pos);
    std::size_t i = 0, j = 0;
    while (i < ep.size() || j < eq.size()) {
        Vec2 step;
        if (j == eq.size()) {
            step = ep[i++];
        } else if (i == ep.size()) {
            step = eq[j++];
        } else {
            const Vec2 a = ep[i], b = eq[j];
            const bool parallel = std::abs(cross(a, b)) <= 1e-14 * norm(a) * norm(b) && dot(a, b) > 0;
            if (parallel) {
                step = a + b;
                ++i;
                ++j;
            } else if (detail::angle_less(a, b)) {
                step = a;
                ++i;
            } else {
                step = b;
                ++j;
            }
        }
        pos = pos + step;
        out.push_back(pos);
    }
    if (out.size() > 1) out.pop_back();  // closing vertex repeats the start
    return ConvexPolygon::from_cycle_unchecked(std::move(out));
}

// ---------------------------------------------------------------------------
// Symmetrizations

namespace detail {

/// Chord of P orthogonal to the line at `angle`, as a function of the
/// coordinate along the line: breakpoint abscissae with the lower and upper
/// boundary ordinates (in the frame rotated so the line is the x-axis).
struct Sections {
    std::vector<double> x, lo, hi;
};

inline Sections sections_along(const ConvexPolygon& p, double angle) {
    const auto [c, s] = unit_vec(angle);
    const auto& v0 = p.vertices();
    const std::size_t n = v0.size();
    std::vector<Vec2> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {c * v0[i].x + s * v0[i].y, -s * v0[i].x + c * v0[i].y};

    std::size_t left = 0, bottom_right = 0, right = 0, top_left = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const Vec2 a = v[i];
        if (a.x < v[left].x || (a.x == v[left].x && a.y < v[left].y)) left = i;
        if (a.x > v[bottom_right].x || (a.x == v[bottom_right].x && a.y < v[bottom_right].y)) bottom_right = i;
        if (a.x > v[right].x || (a.x == v[right].x && a.y > v[right].y)) right = i;
        if (a.x < v[top_left].x || (a.x == v[top_left].x && a.y > v[top_left].y)) top_left = i;
    }
    std::vector<Vec2> lower, upper;
    for (std::size_t i = left;; i = (i + 1) % n) {
        lower.push_back(v[i]);
        if (i == bottom_right) break;
    }
    for (std::size_t i = right;; i = (i + 1) % n) {
        upper.push_back(v[i]);
        if (i == top_left) break;
    }
    std::reverse(upper.begin(), upper.end());

    Sections out;
    out.x.reserve(lower.size() + upper.size());
    for (const auto& a : lower) out.x.push_back(a.x);
    for (const auto& a : upper) out.x.push_back(a.x);
    std::sort(out.x.begin(), out.x.end());
    out.x.erase(std::unique(out.x.begin(), out.x.end()), out.x.end());

    // Piecewise-linear evaluation by a forward sweep; at shared abscissae the
    // lower chain takes the minimum and the upper chain the maximum ordinate.
    auto eval = [](const std::vector<Vec2>& chain, std::size_t& k, double x, bool take_min) {
        while (k + 1 < chain.size() && chain[k + 1].x < x) ++k;
        if (x <= chain.front().x) {
            double y = chain.front().y;
            for (std::size_t t = 1; t < chain.size() && chain[t].x <= x; ++t)
                y = take_min ? std::min(y, chain[t].y) : std::max(y, chain[t].y);
            return y;
        }
        if (k + 1 >= chain.size()) return chain.back().y;
        const Vec2 a = chain[k], b = chain[k + 1];
        if (b.x == x) {
            double y = b.y;
            for (std::size_t t = k + 2; t < chain.size() && chain[t].x == x; ++t)
                y = take_min ? std::min(y, chain[t].y) : std::max(y, chain[t].y);
            return y;
        }
        if (b.x <= a.x) return take_min ? std::min(a.y, b.y) : std::max(a.y, b.y);
        return a.y + (b.y - a.y) * ((x - a.x) / (b.x - a.x));
    };
    out.lo.resize(out.x.size());
    out.hi.resize(out.x.size());
    std::size_t kl = 0, ku = 0;
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        out.lo[i] = eval(lower, kl, out.x[i], true);
        out.hi[i] = std::max(out.lo[i], eval(upper, ku, out.x[i], false));
    }
    return out;
}

/// Rebuilds a polygon symmetric about the line at `angle` from centred
/// half-lengths r_i over abscissae x_i.
///
/// Dropping near-collinear breakpoints removes thin triangles, which over
/// thousands of steps shows up as area drift. The chords are therefore
/// stretched by the lost fraction afterwards, so the rebuilt area equals the
/// trapezoid sum of the profile.
inline ConvexPolygon from_centered_sections(const std::vector<double>& x, const std::vector<double>& r, double angle) {
    const auto [c, s] = unit_vec(angle);
    auto back = [&](double a, double b) { return Vec2{c * a - s * b, s * a + c * b}; };
    std::vector<Vec2> v;
    v.reserve(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v.push_back(back(x[i], -r[i]));
    for (std::size_t i = x.size(); i-- > 0;)
        if (r[i] > 0 || v.empty()) v.push_back(back(x[i], r[i]));
    auto out = ConvexPolygon::from_cycle_unchecked(std::move(v));
    if (!out.is_full()) return out;

    double target = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) target += (x[i + 1] - x[i]) * (r[i] + r[i + 1]);
    const double got = 0.5 * signed_area2(out.vertices());
    if (!(target > 0.0) || got == target) return out;
    const double k = target / got;
    if (std::abs(k - 1.0) > 1e-9) return out;  // not a rounding-scale loss; leave as built
    const Vec2 nrm{-s, c};
    std::vector<Vec2> w;
    w.reserve(out.size());
    for (const auto& p : out.vertices()) w.push_back(p + (k - 1.0) * dot(p, nrm) * nrm);
    return ConvexPolygon::from_cycle_unchecked(std::move(w));
}

inline double planar_angle(const LineSubspace& h) {
    if (!h.is_planar_line()) throw InputError("symmetrization: subspace must be a planar line");
    return h.angle();
}

}  // namespace detail

/// Replaces every chord orthogonal to H by the chord of equal length centred
/// on H. Vertices sit at the union of the upper and lower breakpoints, so
/// the chord-length function and hence the area are reproduced exactly.
inline ConvexPolygon steiner_symmetrize(const ConvexPolygon& p, const LineSubspace& h) {
    const double angle = detail::planar_angle(h);
    if (p.kind() == PolygonKind::point) {
        const Vec2 d = unit_vec(angle);
        return ConvexPolygon::point(dot(p.vertices()[0], d) * d);
    }
    const auto sec = detail::sections_along(p, angle);
    std::vector<double> r(sec.x.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.5 * (sec.hi[i] - sec.lo[i]);
    return detail::from_centered_sections(sec.x, r, angle);
}

/// Union over x in H of the central Minkowski symmetral of the section of P
/// through x. For a planar line this coincides with steiner_symmetrize.
inline ConvexPolygon fiber_symmetrize(const ConvexPolygon& p, const LineSubspace& h) {
    const double angle = detail::planar_angle(h);
    if (p.kind() == PolygonKind::point) {
        const Vec2 d = unit_vec(angle);
        return ConvexPolygon::point(dot(p.vertices()[0], d) * d);
    }
    const auto sec = detail::sections_along(p, angle);
    std::vector<double> r(sec.x.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        // ([lo, hi] + [-hi, -lo]) / 2 = [-(hi - lo)/2, (hi - lo)/2]
        const double lo = 0.5 * (sec.lo[i] - sec.hi[i]);
        const double hi = 0.5 * (sec.hi[i] - sec.lo[i]);
        r[i] = 0.5 * (hi - lo);
    }
    return detail::from_centered_sections(sec.x, r, angle);
}

/// (P + R_H P) / 2
///
/// The sum merges near-collinear vertices, and short edges at sharp turns
/// go with them, so perimeter (hence mean width) leaks at ~1e-10 per step
/// on long runs. The result is rescaled about a point of H to the exact
/// perimeter of P, which keeps it H-symmetric.
inline ConvexPolygon minkowski_symmetrize(const ConvexPolygon& p, const LineSubspace& h) {
    auto out = scale_polygon(minkowski_sum(p, reflect_polygon(p, h)), 0.5);
    if (!out.is_full()) return out;
    const double target = perimeter(p), got = perimeter(out);
    if (!(got > 0.0) || got == target) return out;
    const double k = target / got;
    // Below 1e-13 the difference is summation order, not lost edges.
    if (std::abs(k - 1.0) > 1e-9 || std::abs(k - 1.0) < 1e-13) return out;
    const Vec2 d = unit_vec(detail::planar_angle(h));
    Vec2 mean{};
    for (const auto& v : out.vertices()) mean = mean + v;
    const Vec2 c = (dot(mean, d) / static_cast<double>(out.size())) * d;
    std::vector<Vec2> w;
    w.reserve(out.size());
    for (const auto& v : out.vertices()) w.push_back(c + k * (v - c));
    return ConvexPolygon::from_cycle_unchecked(std::move(w));
}

/// (P - P) / 2
inline ConvexPolygon central_symmetrize(const ConvexPolygon& p) {
    std::vector<Vec2> neg;
    neg.reserve(p.size());
    for (const auto& v : p.vertices()) neg.push_back(-v);
    const auto minus_p = ConvexPolygon::from_cycle_unchecked(std::move(neg));
    const auto sum = minkowski_sum(p, minus_p);
    if (sum.kind() == PolygonKind::point) return ConvexPolygon::point({0.0, 0.0});
    return scale_polygon(sum, 0.5);
}

// ---------------------------------------------------------------------------
// Metrics

/// sup over the circle of |h_P - h_Q|, maximized exactly on every arc of
/// the merged normal fans.
inline double hausdorff_distance(const ConvexPolygon& p, const ConvexPolygon& q) {
    const NormalFan f = normal_fan(p), g = normal_fan(q);
    double best = 0.0;
    for_each_fan_piece(f, g, {}, [&](double lo, double hi, Vec2 a, Vec2 b) {
        const auto [mx, mn] = detail::sinusoid_range(a - b, lo, hi);
        best = std::max({best, std::abs(mx), std::abs(mn)});
    });
    return best;
}

namespace detail {
/// Clips a convex cycle against the half-plane left of a->b.
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 a, Vec2 b) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % n];
        const double sp = cross(b - a, p - a), sq = cross(b - a, q - a);
        if (sp >= 0) out.push_back(p);
        if ((sp >= 0) != (sq >= 0)) {
            const double t = sp / (sp - sq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}
}  // namespace detail

/// Area of the intersection of two convex polygons.
inline double intersection_area(const ConvexPolygon& p, const ConvexPolygon& q) {
    if (!p.is_full() || !q.is_full()) return 0.0;
    std::vector<Vec2> cur = p.vertices();
    const auto& qv = q.vertices();
    for (std::size_t i = 0; i < qv.size() && cur.size() >= 3; ++i)
        cur = detail::clip_halfplane(cur, qv[i], qv[(i + 1) % qv.size()]);
    if (cur.size() < 3) return 0.0;
    return std::max(0.0, 0.5 * detail::signed_area2(cur));
}

/// Nikodym distance |P Δ Q|.
inline double symmetric_difference_area(const ConvexPolygon& p, const ConvexPolygon& q) {
    return std::max(0.0, area(p) + area(q) - 2.0 * intersection_area(p, q));
}

/// Width of P along the unit vector d: h(d) + h(-d).
inline double width_along(const ConvexPolygon& p, Vec2 d) { return support_value(p, d) + support_value(p, -d); }

}  // namespace symmkit
