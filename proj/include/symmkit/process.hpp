#pragma once

// Iterated symmetrization K_m = ◇_{H_m} ... ◇_{H_k} K over any body
// representation, with per-step metric traces and a windowed Cauchy test.

#include <cmath>
#include <deque>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "symmkit/config.hpp"
#include "symmkit/polygon.hpp"
#include "symmkit/polygon_io.hpp"
#include "symmkit/raster.hpp"
#include "symmkit/sequences.hpp"
#include "symmkit/support_grid.hpp"

namespace symmkit {

enum class OperatorKind { steiner, minkowski, fiber };
enum class Representation { polygon, grid, raster, cloud };
enum class Verdict { convergent, non_cauchy, divergent, inconclusive };

inline const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::steiner: return "steiner";
        case OperatorKind::minkowski: return "minkowski";
        case OperatorKind::fiber: return "fiber";
    }
    return "?";
}
inline const char* to_string(Representation r) {
    switch (r) {
        case Representation::polygon: return "polygon";
        case Representation::grid: return "grid";
        case Representation::raster: return "raster";
        case Representation::cloud: return "cloud";
    }
    return "?";
}
inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::convergent: return "convergent";
        case Verdict::non_cauchy: return "non-Cauchy";
        case Verdict::divergent: return "divergent";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline OperatorKind parse_operator(const std::string& s) {
    if (s == "steiner") return OperatorKind::steiner;
    if (s == "minkowski") return OperatorKind::minkowski;
    if (s == "fiber") return OperatorKind::fiber;
    throw InputError("unknown operator '" + s + "' (steiner|minkowski|fiber)");
}

using Body = std::variant<ConvexPolygon, SupportGrid, RasterSet, PointCloud>;

inline Representation representation_of(const Body& b) { return static_cast<Representation>(b.index()); }

/// Steiner has no support-function formula, and fiber is only implemented
/// on exact polygons.
inline bool compatible(OperatorKind op, Representation r) {
    switch (op) {
        case OperatorKind::steiner: return r == Representation::polygon || r == Representation::raster;
        case OperatorKind::fiber: return r == Representation::polygon;
        case OperatorKind::minkowski: return r != Representation::raster;
    }
    return false;
}

inline void require_compatible(OperatorKind op, Representation r) {
    if (!compatible(op, r))
        throw IncompatibleError(std::string("operator ") + to_string(op) + " is not available on the " + to_string(r) +
                                " representation");
}

struct BodyStats {
    double area = 0, mean_width = 0, min_support = 0, max_support = 0;
};

inline BodyStats body_stats(const Body& b) {
    auto from_polygon = [](const ConvexPolygon& p, double a) {
        const auto [mn, mx] = support_range(p);
        return BodyStats{a, mean_width(p), mn, mx};
    };
    switch (representation_of(b)) {
        case Representation::polygon: {
            const auto& p = std::get<ConvexPolygon>(b);
            return from_polygon(p, area(p));
        }
        case Representation::grid: {
            const auto& g = std::get<SupportGrid>(b);
            const auto& v = g.values();
            return {g.dim() == 2 ? grid_area(g) : std::nan(""), mean_width_quadrature(g), *std::min_element(v.begin(), v.end()),
                    *std::max_element(v.begin(), v.end())};
        }
        case Representation::raster: {
            const auto& s = std::get<RasterSet>(b);
            return from_polygon(convex_hull_raster(s), raster_area(s));
        }
        case Representation::cloud: {
            const auto h = cloud_hull(std::get<PointCloud>(b));
            return from_polygon(h, area(h));
        }
    }
    return {};
}

inline double body_distance(const Body& a, const Body& b) {
    if (a.index() != b.index()) throw IncompatibleError("body_distance: representations differ");
    switch (representation_of(a)) {
        case Representation::polygon: return hausdorff_distance(std::get<ConvexPolygon>(a), std::get<ConvexPolygon>(b));
        case Representation::grid: return hausdorff_supnorm(std::get<SupportGrid>(a), std::get<SupportGrid>(b));
        case Representation::raster: return hausdorff_raster(std::get<RasterSet>(a), std::get<RasterSet>(b));
        case Representation::cloud: return hausdorff_cloud(std::get<PointCloud>(a), std::get<PointCloud>(b));
    }
    return std::nan("");
}

/// Width of the body's projection onto the line with direction angle `angle`.
inline double projection_width(const Body& b, double angle) {
    const Vec2 d = unit_vec(angle);
    switch (representation_of(b)) {
        case Representation::polygon: return width_along(std::get<ConvexPolygon>(b), d);
        case Representation::grid: {
            const auto& g = std::get<SupportGrid>(b);
            return g.value_at(Dir3{d.x, d.y, 0.0}) + g.value_at(Dir3{-d.x, -d.y, 0.0});
        }
        case Representation::raster: return projection_length(std::get<RasterSet>(b), angle);
        case Representation::cloud: return width_along(cloud_hull(std::get<PointCloud>(b)), d);
    }
    return std::nan("");
}

inline Body rotate_body(const Body& b, const RotationOp& r, const Tolerances& tol = default_tolerances()) {
    switch (representation_of(b)) {
        case Representation::polygon: return rotate_polygon(std::get<ConvexPolygon>(b), r);
        case Representation::grid: return rotate_grid(std::get<SupportGrid>(b), r, tol);
        case Representation::raster:
            throw IncompatibleError("rotation correction is not available on rasters (resampling would compound)");
        case Representation::cloud: {
            PointCloud c = std::get<PointCloud>(b);
            const double t = r.planar_angle(), cs = std::cos(t), sn = std::sin(t);
            for (auto& p : c.points) p = {cs * p.x - sn * p.y, sn * p.x + cs * p.y};
            return c;
        }
    }
    return b;
}

struct ProcessSpec {
    OperatorKind op = OperatorKind::steiner;
    DirectionSequence sequence;
    int start_index = 1;
    bool rotation_correction = false;
    int max_steps = 100;
    Tolerances tol = default_tolerances();
    double cloud_snap = 1e-4;
    int window = 50;          // lag of the dh_window column; <= 1 disables it
    int keep_snapshots = 1;   // trailing recorded iterates kept in the trace
    std::optional<Body> reference;
};

struct StepRecord {
    int step = 0;
    double beta = 0;
    double dh_prev = 0;
    double dh_ref = std::nan("");
    double area = 0;
    double mean_width = 0;
    double min_support = 0;
    double max_support = 0;
    double resample_err = 0;
    double dh_window = std::nan("");  // d_H(K_m, K_{m-window+1}); not written to CSV
};

struct Snapshot {
    int step;
    Body body;
};

struct ProcessTrace {
    OperatorKind op = OperatorKind::steiner;
    Representation representation = Representation::polygon;
    bool rotation_correction = false;
    int window = 50;
    double cell_size = 0.0;  // rasters only
    std::vector<StepRecord> records;  // records[0] is the initial body
    std::vector<Snapshot> snapshots;  // trailing recorded iterates, oldest first
    std::optional<Body> last_uncorrected;

    [[nodiscard]] const Body& last() const { return snapshots.back().body; }
};

/// Called with (m, K_{m-1}, K_m) on uncorrected iterates.
using StepObserver = std::function<void(int, const Body&, const Body&)>;

inline Body apply_operator(const Body& b, OperatorKind op, const LineSubspace& h, const ProcessSpec& spec) {
    switch (representation_of(b)) {
        case Representation::polygon: {
            const auto& p = std::get<ConvexPolygon>(b);
            switch (op) {
                case OperatorKind::steiner: return steiner_symmetrize(p, h);
                case OperatorKind::fiber: return fiber_symmetrize(p, h);
                case OperatorKind::minkowski: return minkowski_symmetrize(p, h);
            }
            break;
        }
        case Representation::grid: return minkowski_symmetrize_grid(std::get<SupportGrid>(b), h, spec.tol);
        case Representation::raster: return steiner_symmetrize_raster(std::get<RasterSet>(b), h, spec.tol);
        case Representation::cloud: return minkowski_symmetrize_cloud(std::get<PointCloud>(b), h, spec.cloud_snap);
    }
    throw IncompatibleError("apply_operator: unsupported pair");
}

/// Runs steps m = k, ..., k + max_steps - 1 (k = start_index). The first
/// record describes the input at step k - 1. With rotation correction the
/// recorded body is R_m K_m while the iteration itself continues on K_m.
inline ProcessTrace run_process(const Body& body, const ProcessSpec& spec, const StepObserver& observer = {}) {
    const auto rep = representation_of(body);
    require_compatible(spec.op, rep);
    if (spec.max_steps < 1) throw InputError("run_process: max_steps must be >= 1");
    if (spec.start_index < 1) throw InputError("run_process: start_index must be >= 1");
    const int last = spec.start_index + spec.max_steps - 1;
    if (last > spec.sequence.size())
        throw InputError("run_process: sequence has " + std::to_string(spec.sequence.size()) + " lines, run needs " +
                         std::to_string(last));
    if (spec.rotation_correction && rep == Representation::raster)
        throw IncompatibleError("run_process: rotation correction is not available on rasters");
    if (spec.reference && spec.reference->index() != body.index())
        throw IncompatibleError("run_process: reference body has a different representation");

    ProcessTrace t;
    t.op = spec.op;
    t.representation = rep;
    t.rotation_correction = spec.rotation_correction;
    t.window = spec.window;
    if (rep == Representation::raster) t.cell_size = std::get<RasterSet>(body).cell_size();

    std::vector<RotationOp> rots;
    if (spec.rotation_correction) rots = rotation_schedule(spec.sequence);

    const int keep = std::max(1, spec.keep_snapshots);
    std::deque<Body> ring;  // last `window` recorded bodies for the lagged distance
    const std::size_t lag = spec.window > 1 ? static_cast<std::size_t>(spec.window - 1) : 0;

    auto record = [&](int m, const Body& shown, const Body* prev_shown, double resample) {
        StepRecord r;
        r.step = m;
        r.beta = spec.sequence.beta.at(static_cast<std::size_t>(m));
        const auto st = body_stats(shown);
        r.area = st.area;
        r.mean_width = st.mean_width;
        r.min_support = st.min_support;
        r.max_support = st.max_support;
        r.resample_err = resample;
        r.dh_prev = prev_shown ? body_distance(*prev_shown, shown) : 0.0;
        if (spec.reference) r.dh_ref = body_distance(shown, *spec.reference);
        if (lag > 0) {
            ring.push_back(shown);
            if (ring.size() > lag + 1) ring.pop_front();
            if (ring.size() == lag + 1) r.dh_window = body_distance(ring.front(), shown);
        }
        t.records.push_back(r);
        t.snapshots.push_back({m, shown});
        if (static_cast<int>(t.snapshots.size()) > keep) t.snapshots.erase(t.snapshots.begin());
    };

    const int k = spec.start_index;
    Body cur = body;
    Body shown = spec.rotation_correction ? rotate_body(cur, rots.at(static_cast<std::size_t>(k - 1)), spec.tol) : cur;
    record(k - 1, shown, nullptr, 0.0);
    double prev_area = t.records.back().area;
    for (int m = k; m <= last; ++m) {
        Body next = [&] {
            try {
                return apply_operator(cur, spec.op, spec.sequence.line(m), spec);
            } catch (const CapacityError& e) {
                throw CapacityError("step " + std::to_string(m) + ": " + e.what());
            }
        }();
        if (observer) observer(m, cur, next);
        Body next_shown = spec.rotation_correction ? rotate_body(next, rots.at(static_cast<std::size_t>(m)), spec.tol) : next;
        double resample = 0.0;
        switch (rep) {
            case Representation::raster: {
                const double a = raster_area(std::get<RasterSet>(next));
                resample = prev_area > 0 ? std::abs(a - prev_area) / prev_area : 0.0;
                break;
            }
            case Representation::grid: resample = std::get<SupportGrid>(next_shown).interpolation_error(); break;
            case Representation::cloud: resample = spec.cloud_snap * std::sqrt(2.0); break;
            case Representation::polygon: break;
        }
        const Body prev_shown = std::move(shown);
        shown = std::move(next_shown);
        record(m, shown, &prev_shown, resample);
        prev_area = t.records.back().area;
        cur = std::move(next);
    }
    if (spec.rotation_correction) t.last_uncorrected = cur;
    return t;
}

// --- post-hoc checks --------------------------------------------------------------------------

struct MonotoneReport {
    bool ok = true;
    int area_violation_step = -1;
    int width_violation_step = -1;
    double worst_area_drop = 0.0;   // relative
    double worst_width_rise = 0.0;  // relative
};

/// Area must not decrease and mean width must not increase from record to
/// record, within `rel_tol` relative. Raster traces also allow the logged
/// per-step resampling error for the area and two cell diagonals for the
/// hull mean width.
inline MonotoneReport check_monotone(const ProcessTrace& t, double rel_tol = 1e-9) {
    MonotoneReport r;
    const bool raster = t.representation == Representation::raster;
    for (std::size_t i = 1; i < t.records.size(); ++i) {
        const auto& a = t.records[i - 1];
        const auto& b = t.records[i];
        const double area_slack = rel_tol * std::abs(a.area) + (raster ? b.resample_err * a.area : 0.0);
        const double width_slack = rel_tol * std::abs(a.mean_width) + (raster ? 2.0 * std::sqrt(2.0) * t.cell_size : 0.0);
        if (std::isfinite(a.area) && std::isfinite(b.area)) {
            const double drop = a.area > 0 ? (a.area - b.area) / a.area : 0.0;
            r.worst_area_drop = std::max(r.worst_area_drop, drop);
            if (b.area < a.area - area_slack && r.area_violation_step < 0) r.area_violation_step = b.step;
        }
        const double rise = a.mean_width > 0 ? (b.mean_width - a.mean_width) / a.mean_width : 0.0;
        r.worst_width_rise = std::max(r.worst_width_rise, rise);
        if (b.mean_width > a.mean_width + width_slack && r.width_violation_step < 0) r.width_violation_step = b.step;
    }
    r.ok = r.area_violation_step < 0 && r.width_violation_step < 0;
    return r;
}

struct ConvergenceReport {
    Verdict verdict = Verdict::inconclusive;
    int window = 0;
    double tol = 0, floor = 0;
    double max_upper = 0;   // largest spread upper bound over the tested windows
    double min_lower = 0;   // smallest spread lower bound over the tested windows
    std::string reason;
};

/// Tests the windows of `window` consecutive records that end within the
/// last `window` records. For each window the spread (max pairwise d_H)
/// is bracketed: above by the sum of the consecutive distances inside it,
/// below by the largest single step inside it and, when recorded, by the
/// distance between its first and last members.
inline ConvergenceReport detect_convergence(const ProcessTrace& t, int window, double tol, double floor = std::nan("")) {
    if (window < 2) throw InputError("detect_convergence: window must be >= 2");
    const int n = static_cast<int>(t.records.size());
    if (n < 2 * window)
        throw InputError("detect_convergence: trace has " + std::to_string(n) + " records, need at least " +
                         std::to_string(2 * window));
    ConvergenceReport r;
    r.window = window;
    r.tol = tol;
    r.floor = std::isnan(floor) ? 10.0 * tol : floor;
    r.min_lower = std::numeric_limits<double>::infinity();
    const bool lag_ok = t.window == window;
    for (int end = n - window; end < n; ++end) {
        const int start = end - window + 1;
        double upper = 0.0, lower = 0.0;
        for (int i = start + 1; i <= end; ++i) {
            upper += t.records[static_cast<std::size_t>(i)].dh_prev;
            lower = std::max(lower, t.records[static_cast<std::size_t>(i)].dh_prev);
        }
        if (lag_ok && std::isfinite(t.records[static_cast<std::size_t>(end)].dh_window))
            lower = std::max(lower, t.records[static_cast<std::size_t>(end)].dh_window);
        r.max_upper = std::max(r.max_upper, upper);
        r.min_lower = std::min(r.min_lower, lower);
    }
    if (r.max_upper < tol) {
        r.verdict = Verdict::convergent;
        r.reason = "every trailing window has spread < " + format_real(tol);
    } else if (r.min_lower > r.floor) {
        r.verdict = Verdict::non_cauchy;
        r.reason = "every trailing window has spread > " + format_real(r.floor);
    } else {
        r.reason = "spread bounds straddle the tolerance";
    }
    return r;
}

/// Exact max pairwise d_H over a set of snapshots.
inline double max_pairwise_distance(const std::vector<Snapshot>& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) m = std::max(m, body_distance(s[i].body, s[j].body));
    return m;
}

// --- CSV ------------------------------------------------------------------------------------------

inline const std::vector<std::string>& trace_columns() {
    static const std::vector<std::string> c{"step",     "beta",       "dh_prev",     "dh_ref",      "area",
                                            "mean_width", "min_support", "max_support", "resample_err"};
    return c;
}

inline void write_trace_csv(std::ostream& out, const ProcessTrace& t) {
    const auto& cols = trace_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : t.records) {
        out << r.step << ',' << format_real(r.beta) << ',' << format_real(r.dh_prev) << ',' << format_real(r.dh_ref) << ','
            << format_real(r.area) << ',' << format_real(r.mean_width) << ',' << format_real(r.min_support) << ','
            << format_real(r.max_support) << ',' << format_real(r.resample_err) << '\n';
    }
}

/// Column name -> values. Every listed column must be present.
using TraceTable = std::map<std::string, std::vector<double>>;

inline TraceTable read_trace_csv(std::istream& in, const std::vector<std::string>& required = trace_columns(),
                                 const std::string& name = "<trace>") {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(name + ": empty file");
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            header.push_back(cell);
        }
    }
    for (const auto& c : required)
        if (std::find(header.begin(), header.end(), c) == header.end()) throw ParseError(name + ": missing column '" + c + "'");
    TraceTable t;
    for (const auto& h : header) t[h];
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ls, cell, ',')) {
            if (col >= header.size()) throw ParseError(name + ":" + std::to_string(lineno) + ": too many fields");
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw ParseError(name + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            t[header[col++]].push_back(v);
        }
        if (col != header.size()) throw ParseError(name + ":" + std::to_string(lineno) + ": expected " +
                                                   std::to_string(header.size()) + " fields");
    }
    return t;
}

}  // namespace symmkit
