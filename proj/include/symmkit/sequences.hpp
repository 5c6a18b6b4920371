#pragma once

// Angle sequences (alpha_m), the planar direction sequences they generate,
// the constant gamma = prod cos(alpha_m) with a certified lower bound, and
// the rotation schedule R_m that carries u_m back onto e1.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "symmkit/config.hpp"
#include "symmkit/geom.hpp"
#include "symmkit/polygon_io.hpp"
#include "symmkit/random.hpp"

namespace symmkit {

enum class SequenceKind { harmonic, power, geometric, periodic, oscillating, explicit_list, random_lines };

inline const char* to_string(SequenceKind k) {
    switch (k) {
        case SequenceKind::harmonic: return "harmonic";
        case SequenceKind::power: return "power";
        case SequenceKind::geometric: return "geometric";
        case SequenceKind::periodic: return "periodic";
        case SequenceKind::oscillating: return "oscillating";
        case SequenceKind::explicit_list: return "explicit";
        case SequenceKind::random_lines: return "random";
    }
    return "?";
}

/// alpha_m for m >= 1. Values live in (0, pi/2]; pi/2 is allowed because the
/// alternating-axes examples step by exactly a right angle.
///
///   harmonic     c / m
///   power        c / m^p
///   geometric    c q^m
///   periodic     list[(m-1) mod n]
///   oscillating  line angle sweeps 0 -> endpoint -> 0 ... with steps c/m,
///                clamped at the endpoints (so the actual steps are <= c/m)
///   explicit     list[m-1], zero afterwards
///   random       independent uniform line angles from `seed`
struct AngleSequence {
    SequenceKind kind = SequenceKind::harmonic;
    double c = 1.0;
    double p = 1.0;
    double q = 0.5;
    double endpoint = 0.0;
    std::vector<double> list;
    std::uint64_t seed = 0;

    static AngleSequence harmonic(double c) { return checked({SequenceKind::harmonic, c, 1.0, 0.5, 0.0, {}, 0}); }
    static AngleSequence power(double c, double p) { return checked({SequenceKind::power, c, p, 0.5, 0.0, {}, 0}); }
    static AngleSequence geometric(double c, double q) { return checked({SequenceKind::geometric, c, 1.0, q, 0.0, {}, 0}); }
    static AngleSequence periodic(std::vector<double> a) {
        return checked({SequenceKind::periodic, 1.0, 1.0, 0.5, 0.0, std::move(a), 0});
    }
    static AngleSequence oscillating(double endpoint, double c) {
        return checked({SequenceKind::oscillating, c, 1.0, 0.5, endpoint, {}, 0});
    }
    static AngleSequence explicit_list(std::vector<double> a) {
        return checked({SequenceKind::explicit_list, 1.0, 1.0, 0.5, 0.0, std::move(a), 0});
    }
    static AngleSequence random_lines(std::uint64_t seed) { return {SequenceKind::random_lines, 1.0, 1.0, 0.5, 0.0, {}, seed}; }

    /// Sum of alpha_m diverges.
    [[nodiscard]] bool sum_diverges() const {
        switch (kind) {
            case SequenceKind::harmonic: return true;
            case SequenceKind::power: return p <= 1.0;
            case SequenceKind::geometric: return false;
            case SequenceKind::periodic: return true;
            case SequenceKind::oscillating: return true;
            case SequenceKind::explicit_list: return false;
            case SequenceKind::random_lines: return true;
        }
        return false;
    }
    /// Sum of alpha_m^2 converges.
    [[nodiscard]] bool square_summable() const {
        switch (kind) {
            case SequenceKind::harmonic: return true;
            case SequenceKind::power: return p > 0.5;
            case SequenceKind::geometric: return true;
            case SequenceKind::periodic: return false;
            case SequenceKind::oscillating: return true;
            case SequenceKind::explicit_list: return true;
            case SequenceKind::random_lines: return false;
        }
        return false;
    }

    /// Closed-form alpha_m where one exists (not for oscillating or random).
    [[nodiscard]] double alpha(std::int64_t m) const {
        if (m < 1) throw InputError("AngleSequence::alpha: index must be >= 1");
        const double md = static_cast<double>(m);
        switch (kind) {
            case SequenceKind::harmonic: return c / md;
            case SequenceKind::power: return c / std::pow(md, p);
            case SequenceKind::geometric: return c * std::pow(q, md);
            case SequenceKind::periodic: return list[static_cast<std::size_t>((m - 1) % static_cast<std::int64_t>(list.size()))];
            case SequenceKind::explicit_list:
                return m <= static_cast<std::int64_t>(list.size()) ? list[static_cast<std::size_t>(m - 1)] : 0.0;
            default: throw InputError(std::string("AngleSequence::alpha: no closed form for ") + to_string(kind));
        }
    }

    [[nodiscard]] std::string describe() const {
        std::string s = to_string(kind);
        switch (kind) {
            case SequenceKind::harmonic: return s + "(c=" + format_real(c) + ")";
            case SequenceKind::power: return s + "(c=" + format_real(c) + ",p=" + format_real(p) + ")";
            case SequenceKind::geometric: return s + "(c=" + format_real(c) + ",q=" + format_real(q) + ")";
            case SequenceKind::oscillating: return s + "(endpoint=" + format_real(endpoint) + ",c=" + format_real(c) + ")";
            case SequenceKind::random_lines: return s + "(seed=" + std::to_string(seed) + ")";
            default: {
                s += "[";
                for (std::size_t i = 0; i < list.size(); ++i) s += (i ? "," : "") + format_real(list[i]);
                return s + "]";
            }
        }
    }

private:
    static AngleSequence checked(AngleSequence a) {
        constexpr double half_pi = std::numbers::pi / 2;
        auto in_range = [](double x) { return x > 0.0 && x <= half_pi; };
        switch (a.kind) {
            case SequenceKind::harmonic:
            case SequenceKind::power:
                if (!in_range(a.c)) throw InputError("AngleSequence: need 0 < c <= pi/2");
                if (a.kind == SequenceKind::power && !(a.p > 0)) throw InputError("AngleSequence: need p > 0");
                break;
            case SequenceKind::geometric:
                if (!(a.q > 0 && a.q < 1)) throw InputError("AngleSequence: need 0 < q < 1");
                if (!in_range(a.c * a.q)) throw InputError("AngleSequence: need 0 < c q <= pi/2");
                break;
            case SequenceKind::periodic:
            case SequenceKind::explicit_list:
                if (a.list.empty()) throw InputError("AngleSequence: empty angle list");
                for (double x : a.list)
                    if (!in_range(x)) throw InputError("AngleSequence: angle " + format_real(x) + " outside (0, pi/2]");
                break;
            case SequenceKind::oscillating:
                if (!in_range(a.endpoint)) throw InputError("AngleSequence: oscillation endpoint outside (0, pi/2]");
                if (!in_range(a.c)) throw InputError("AngleSequence: need 0 < c <= pi/2");
                break;
            case SequenceKind::random_lines: break;
        }
        return a;
    }
};

/// Which line is attached to u_m.
enum class LineOrientation {
    normal,  // H_m = u_m^perp
    span,    // H_m = span{u_m}
};

/// u_0 = e1, beta_0 = 0. For m >= 1, beta_m = beta_{m-1} + s_m alpha_m with a
/// sign s_m = +1 except for oscillating sequences, and u_m = (cos beta_m, sin beta_m).
/// Entries are indexed 0..M.
struct DirectionSequence {
    std::vector<double> beta;
    std::vector<double> alpha;  // alpha[0] = 0
    std::vector<LineSubspace> lines;  // lines[0] is the line attached to u_0
    LineOrientation orientation = LineOrientation::normal;

    [[nodiscard]] int size() const { return static_cast<int>(beta.size()) - 1; }
    [[nodiscard]] Vec2 u(int m) const { return unit_vec(beta.at(static_cast<std::size_t>(m))); }
    [[nodiscard]] UnitDirection direction(int m) const { return UnitDirection::angle2d(beta.at(static_cast<std::size_t>(m))); }
    [[nodiscard]] const LineSubspace& line(int m) const { return lines.at(static_cast<std::size_t>(m)); }
    /// Direction angle of the line H_m (the sign is irrelevant).
    [[nodiscard]] double line_angle(int m) const {
        return beta.at(static_cast<std::size_t>(m)) + (orientation == LineOrientation::normal ? std::numbers::pi / 2 : 0.0);
    }

    static LineSubspace line_for(double beta, LineOrientation o) {
        return LineSubspace::line2d(beta + (o == LineOrientation::normal ? std::numbers::pi / 2 : 0.0));
    }

    /// Lines given directly by their angles phi_1..phi_M. u_m is the
    /// direction (or normal) of the line with the sign chosen so that
    /// u_m . u_{m-1} >= 0, hence alpha_m in [0, pi/2].
    static DirectionSequence from_line_angles(const std::vector<double>& phi, LineOrientation o = LineOrientation::normal) {
        DirectionSequence d;
        d.orientation = o;
        d.beta.push_back(0.0);
        d.alpha.push_back(0.0);
        d.lines.push_back(line_for(0.0, o));
        const double off = o == LineOrientation::normal ? std::numbers::pi / 2 : 0.0;
        for (double f : phi) {
            if (!std::isfinite(f)) throw InputError("from_line_angles: non-finite angle");
            const double prev = d.beta.back();
            double b = f + off;
            // Bring b to within pi/2 of prev, modulo pi.
            b += std::numbers::pi * std::round((prev - b) / std::numbers::pi);
            d.beta.push_back(b);
            d.alpha.push_back(std::abs(b - prev));
            d.lines.push_back(LineSubspace::line2d(f));
        }
        return d;
    }
};

namespace detail {

/// Oscillating line angles gamma_0 = 0, gamma_1, ..., gamma_M.
inline std::vector<double> oscillation_angles(const AngleSequence& a, int m_count) {
    std::vector<double> g{0.0};
    double target = a.endpoint;
    for (int m = 1; m <= m_count; ++m) {
        const double cur = g.back(), step = a.c / m;
        double next = cur + (target > cur ? step : -step);
        if ((target > cur && next >= target) || (target < cur && next <= target)) {
            next = target;
            target = target == 0.0 ? a.endpoint : 0.0;
        }
        g.push_back(next);
    }
    return g;
}

}  // namespace detail

inline DirectionSequence generate_sequence(const AngleSequence& a, int m_count, LineOrientation o = LineOrientation::normal) {
    if (m_count < 1) throw InputError("generate_sequence: M must be >= 1");
    if (a.kind == SequenceKind::random_lines) {
        Rng rng(a.seed);
        std::vector<double> phi(static_cast<std::size_t>(m_count));
        for (auto& f : phi) f = std::numbers::pi * rng.uniform();
        return DirectionSequence::from_line_angles(phi, o);
    }
    DirectionSequence d;
    d.orientation = o;
    d.beta.push_back(0.0);
    d.alpha.push_back(0.0);
    d.lines.push_back(DirectionSequence::line_for(0.0, o));
    if (a.kind == SequenceKind::oscillating) {
        const auto g = detail::oscillation_angles(a, m_count);
        for (int m = 1; m <= m_count; ++m) {
            d.beta.push_back(g[static_cast<std::size_t>(m)]);
            d.alpha.push_back(std::abs(g[static_cast<std::size_t>(m)] - g[static_cast<std::size_t>(m) - 1]));
            d.lines.push_back(DirectionSequence::line_for(d.beta.back(), o));
        }
        return d;
    }
    if (a.kind == SequenceKind::explicit_list && m_count > static_cast<int>(a.list.size()))
        throw InputError("generate_sequence: explicit list has only " + std::to_string(a.list.size()) + " angles");
    double b = 0.0;
    for (int m = 1; m <= m_count; ++m) {
        const double al = a.alpha(m);
        if (!(al > 0.0 && al <= std::numbers::pi / 2))
            throw InputError("generate_sequence: alpha_" + std::to_string(m) + " = " + format_real(al) + " outside (0, pi/2]");
        b += al;
        d.beta.push_back(b);
        d.alpha.push_back(al);
        d.lines.push_back(DirectionSequence::line_for(b, o));
    }
    return d;
}

// --- gamma -----------------------------------------------------------------------------

struct GammaBound {
    double value = 0.0;        // prod_{m <= M} cos alpha_m
    double lower_bound = 0.0;  // certified lower bound of the infinite product
    double tail_sq = 0.0;      // bound on sum_{m > M} alpha_m^2 (inf if unknown)
};

/// Upper bound for sum_{m > M} alpha_m^2, or +inf when the generator has none.
inline double tail_square_sum(const AngleSequence& a, std::int64_t m_count) {
    const double md = static_cast<double>(m_count);
    switch (a.kind) {
        case SequenceKind::harmonic:
        case SequenceKind::oscillating: return a.c * a.c / md;  // sum_{m>M} 1/m^2 < 1/M
        case SequenceKind::power:
            if (a.p <= 0.5) return std::numeric_limits<double>::infinity();
            return a.c * a.c * std::pow(md, 1.0 - 2.0 * a.p) / (2.0 * a.p - 1.0);
        case SequenceKind::geometric: return a.c * a.c * std::pow(a.q, 2.0 * (md + 1.0)) / (1.0 - a.q * a.q);
        case SequenceKind::explicit_list: {
            double s = 0.0;
            for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(m_count, 0)); i < a.list.size(); ++i)
                s += a.list[i] * a.list[i];
            return s;
        }
        default: return std::numeric_limits<double>::infinity();
    }
}

/// Truncated product of cos alpha_m over m <= M and a lower bound for the
/// whole product, from cos x >= exp(-x^2) on [0, 1] applied to the tail.
/// The head is multiplied exactly; M is raised until alpha_{M+1} < 1.
inline GammaBound gamma_product(const AngleSequence& a, std::int64_t m_count) {
    if (m_count < 1) throw InputError("gamma_product: M must be >= 1");
    GammaBound g;
    if (a.kind == SequenceKind::random_lines) {
        const auto d = generate_sequence(a, static_cast<int>(m_count));
        g.value = 1.0;
        for (int m = 1; m <= d.size(); ++m) g.value *= std::cos(d.alpha[static_cast<std::size_t>(m)]);
        g.tail_sq = std::numeric_limits<double>::infinity();
        return g;
    }
    if (a.kind == SequenceKind::oscillating) {
        const auto gs = detail::oscillation_angles(a, static_cast<int>(m_count));
        g.value = 1.0;
        for (std::size_t m = 1; m < gs.size(); ++m) g.value *= std::cos(gs[m] - gs[m - 1]);
        // Steps never exceed c/m; c <= pi/2 but the tail starts past c.
        std::int64_t head = m_count;
        while (a.c / static_cast<double>(head + 1) >= 1.0) ++head;
        if (head != m_count) return gamma_product(a, head);
        g.tail_sq = tail_square_sum(a, m_count);
        g.lower_bound = g.value * std::exp(-g.tail_sq);
        return g;
    }
    std::int64_t head = m_count;
    if (a.kind != SequenceKind::periodic && a.kind != SequenceKind::explicit_list)
        while (a.alpha(head + 1) >= 1.0) ++head;
    if (a.kind == SequenceKind::explicit_list) head = std::max<std::int64_t>(head, 0);
    g.value = 1.0;
    const std::int64_t stop = a.kind == SequenceKind::explicit_list
                                  ? std::min<std::int64_t>(head, static_cast<std::int64_t>(a.list.size()))
                                  : head;
    for (std::int64_t m = 1; m <= stop; ++m) g.value *= std::cos(a.alpha(m));
    if (a.kind == SequenceKind::explicit_list && head >= static_cast<std::int64_t>(a.list.size())) {
        g.tail_sq = 0.0;
        g.lower_bound = g.value;
        return g;
    }
    g.tail_sq = tail_square_sum(a, head);
    g.lower_bound = std::isfinite(g.tail_sq) ? g.value * std::exp(-g.tail_sq) : 0.0;
    if (a.kind == SequenceKind::explicit_list) {
        // Remaining listed angles may exceed 1 where exp(-x^2) is no bound.
        double rest = 1.0;
        for (std::size_t i = static_cast<std::size_t>(head); i < a.list.size(); ++i) rest *= std::cos(a.list[i]);
        g.lower_bound = g.value * rest;
    }
    return g;
}

// --- wrap-around witness ------------------------------------------------------------------

struct WrapWitness {
    std::int64_t index = 0;   // partial sum up to this index exceeds the target
    double partial_sum = 0;   // the partial sum, or a lower bound for it
    bool analytic = false;    // from a closed-form lower bound rather than summation
};

/// Smallest-known M with sum_{m <= M} alpha_m > target (4 pi by default),
/// i.e. the directions u_m sweep the whole circle at least twice.
inline std::optional<WrapWitness> wrap_witness(const AngleSequence& a, double target = 4 * std::numbers::pi,
                                               std::int64_t enumerate_limit = 10'000'000) {
    switch (a.kind) {
        case SequenceKind::oscillating:
        case SequenceKind::random_lines: return std::nullopt;
        case SequenceKind::explicit_list: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.list.size(); ++i) {
                s += a.list[i];
                if (s > target) return WrapWitness{static_cast<std::int64_t>(i) + 1, s, false};
            }
            return std::nullopt;
        }
        default: break;
    }
    double s = 0.0;
    for (std::int64_t m = 1; m <= enumerate_limit; ++m) {
        s += a.alpha(m);
        if (s > target) return WrapWitness{m, s, false};
    }
    // sum_{m <= M} c/m^p >= c * integral_1^{M+1} x^{-p} dx.
    if (a.kind == SequenceKind::harmonic || (a.kind == SequenceKind::power && a.p == 1.0)) {
        const double m = std::ceil(std::exp(target / a.c));
        if (!std::isfinite(m) || m > 9e18) return std::nullopt;
        return WrapWitness{static_cast<std::int64_t>(m), a.c * std::log(m + 1.0), true};
    }
    if (a.kind == SequenceKind::power && a.p < 1.0) {
        const double m = std::ceil(std::pow(target * (1.0 - a.p) / a.c + 1.0, 1.0 / (1.0 - a.p)));
        if (!std::isfinite(m) || m > 9e18) return std::nullopt;
        return WrapWitness{static_cast<std::int64_t>(m), a.c * (std::pow(m + 1.0, 1.0 - a.p) - 1.0) / (1.0 - a.p), true};
    }
    return std::nullopt;
}

// --- rotation schedule --------------------------------------------------------------------

/// R_0 = I and R_m = A_m R_{m-1}, where A_m = rotation_between(R_{m-1} u_m, e1).
/// In the plane this is the rotation by -beta_m.
inline std::vector<RotationOp> rotation_schedule(const DirectionSequence& d) {
    std::vector<RotationOp> r{RotationOp::identity(2)};
    const auto e1 = UnitDirection::basis(2, 0);
    for (int m = 1; m <= d.size(); ++m) {
        const Vector v = r.back().apply(d.direction(m).coords());
        const auto a = rotation_between(UnitDirection::normalized(v), e1);
        // Re-orthonormalize through the angle so long products do not drift.
        const auto next = a.compose(r.back());
        r.push_back(RotationOp::planar(next.planar_angle()));
    }
    return r;
}

}  // namespace symmkit
