#pragma once

// Multi-run checks built on run_process: dependence of the limit on the
// start index, agreement of the three operators, and ball limits.

#include <string>
#include <vector>

#include "symmkit/process.hpp"

namespace symmkit {

struct TruncationResult {
    int k = 1;
    ConvergenceReport convergence;
    Body limit;
};

struct TruncationReport {
    std::vector<TruncationResult> runs;
    std::vector<std::vector<double>> distance;  // pairwise d_H between the limits
};

/// Runs the process from every start index k = 1..k_max with
/// spec.max_steps steps each. Runs too short for the Cauchy test are
/// reported inconclusive.
inline TruncationReport truncation_stability(const Body& body, const ProcessSpec& spec, int k_max, double tol = 1e-6) {
    if (k_max < 1) throw InputError("truncation_stability: k_max must be >= 1");
    TruncationReport rep;
    for (int k = 1; k <= k_max; ++k) {
        ProcessSpec s = spec;
        s.start_index = k;
        const auto t = run_process(body, s);
        ConvergenceReport cr;
        if (static_cast<int>(t.records.size()) >= 2 * spec.window && spec.window >= 2) {
            cr = detect_convergence(t, spec.window, tol);
        } else {
            cr.reason = "trace too short for the Cauchy test";
        }
        rep.runs.push_back({k, cr, t.last()});
    }
    const std::size_t n = rep.runs.size();
    rep.distance.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            rep.distance[i][j] = rep.distance[j][i] = body_distance(rep.runs[i].limit, rep.runs[j].limit);
    return rep;
}

struct CrossCheckEntry {
    OperatorKind op;
    ConvergenceReport convergence;
    ProcessTrace trace;
};

struct CrossCheckReport {
    std::vector<CrossCheckEntry> entries;
    bool agree = false;
    double max_sandwich_violation = 0.0;  // max over steps of h_F - h_M (should be <= 0)
};

/// Steiner, fiber and Minkowski on the same polygon and sequence (and the
/// same rotation schedule, if any). Also checks the inclusion
/// F_H K ⊆ M_H K step by step through the support functions at 720
/// directions.
inline CrossCheckReport cross_symmetrization_check(const ConvexPolygon& body, const ProcessSpec& spec, double tol = 1e-6) {
    CrossCheckReport rep;
    std::vector<ConvexPolygon> fiber_iter, mink_iter;
    for (OperatorKind op : {OperatorKind::steiner, OperatorKind::fiber, OperatorKind::minkowski}) {
        ProcessSpec s = spec;
        s.op = op;
        auto obs = [&](int, const Body&, const Body& after) {
            if (op == OperatorKind::fiber) fiber_iter.push_back(std::get<ConvexPolygon>(after));
            if (op == OperatorKind::minkowski) mink_iter.push_back(std::get<ConvexPolygon>(after));
        };
        auto t = run_process(body, s, obs);
        ConvergenceReport cr;
        if (static_cast<int>(t.records.size()) >= 2 * spec.window) {
            cr = detect_convergence(t, spec.window, tol);
        } else {
            cr.reason = "trace too short for the Cauchy test";
        }
        rep.entries.push_back({op, cr, std::move(t)});
    }
    rep.agree = true;
    for (const auto& e : rep.entries) rep.agree = rep.agree && e.convergence.verdict == rep.entries.front().convergence.verdict;
    // The inclusion holds for one step from a common body; along two
    // processes it persists because both operators are monotone under
    // inclusion and F_H ⊆ M_H.
    for (std::size_t m = 0; m < fiber_iter.size() && m < mink_iter.size(); ++m)
        for (int i = 0; i < 720; ++i) {
            const Vec2 u = unit_vec(2 * std::numbers::pi * i / 720);
            rep.max_sandwich_violation =
                std::max(rep.max_sandwich_violation, support_value(fiber_iter[m], u) - support_value(mink_iter[m], u));
        }
    return rep;
}

struct BallLimitReport {
    double initial_gap = 0.0;
    double final_gap = 0.0;
    std::vector<double> gap;  // ball_gap at each recorded snapshot, sampled every `every` steps
    bool decreasing_overall = false;
};

/// ball_gap along a polygon run, sampled every `every` steps.
inline BallLimitReport ball_limit_check(const ConvexPolygon& body, const ProcessSpec& spec, int every = 50) {
    BallLimitReport rep;
    rep.initial_gap = ball_gap(body);
    rep.gap.push_back(rep.initial_gap);
    int count = 0;
    const auto t = run_process(body, spec, [&](int, const Body&, const Body& after) {
        if (++count % every == 0) rep.gap.push_back(ball_gap(std::get<ConvexPolygon>(after)));
    });
    rep.final_gap = ball_gap(std::get<ConvexPolygon>(t.last()));
    rep.decreasing_overall = rep.final_gap < rep.initial_gap;
    return rep;
}

}  // namespace symmkit
