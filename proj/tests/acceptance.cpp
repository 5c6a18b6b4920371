// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Runtime budgets are checked on the wall clock of this
// process (single core).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "symmkit/certificate.hpp"
#include "symmkit/experiments.hpp"
#include "symmkit/process.hpp"
#include "symmkit/random.hpp"

using namespace symmkit;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& s) {
        if (pass) detail += (detail.empty() ? "" : ", ") + s;
    }
};

std::string num(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

ProcessSpec spec_for(OperatorKind op, DirectionSequence d, int steps) {
    ProcessSpec s;
    s.op = op;
    s.sequence = std::move(d);
    s.max_steps = steps;
    return s;
}

ConvexPolygon diamond() { return ConvexPolygon::from_ccw({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }

ConvexPolygon octagon() {
    const double a = (2 + std::sqrt(2.0)) / 4, b = std::sqrt(2.0) / 4;
    return ConvexPolygon::hull(std::vector<Vec2>{{a, b}, {b, a}, {-b, a}, {-a, b}, {-a, -b}, {-b, -a}, {b, -a}, {a, -b}});
}

// 1. Steiner keeps area, Minkowski keeps mean width and never loses area.
Outcome conservation() {
    Outcome o;
    Rng rng(101);
    double worst_area = 0, worst_width = 0, worst_gain = INFINITY;
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_polygon(rng, 3 + static_cast<int>(rng.bits() % 20));
        const auto h = random_line(rng);
        const double a = area(p), w = mean_width(p);
        worst_area = std::max(worst_area, std::abs(area(steiner_symmetrize(p, h)) - a) / a);
        const auto m = minkowski_symmetrize(p, h);
        worst_width = std::max(worst_width, std::abs(mean_width(m) - w) / w);
        worst_gain = std::min(worst_gain, area(m) - a);
    }
    o.require(worst_area <= 1e-12, "Steiner area drift " + num(worst_area));
    o.require(worst_width <= 1e-12, "Minkowski mean-width drift " + num(worst_width));
    o.require(worst_gain >= -1e-12, "Minkowski area loss " + num(-worst_gain));
    o.note("area drift " + num(worst_area) + ", width drift " + num(worst_width) + ", min area gain " + num(worst_gain));
    return o;
}

// 2. h_F <= h_M at 720 directions.
Outcome inclusion_chain() {
    Outcome o;
    Rng rng(202);
    double worst = -INFINITY;
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_polygon(rng, 3 + static_cast<int>(rng.bits() % 20));
        const auto h = random_line(rng);
        const auto f = fiber_symmetrize(p, h), m = minkowski_symmetrize(p, h);
        for (int i = 0; i < 720; ++i) {
            const Vec2 u = unit_vec(2 * kPi * i / 720);
            worst = std::max(worst, support_value(f, u) - support_value(m, u));
        }
    }
    o.require(worst <= 1e-12, "max h_F - h_M = " + num(worst));
    o.note("max h_F - h_M = " + num(worst));
    return o;
}

// 3. Brunn-Minkowski, with equality for homothets.
Outcome brunn_minkowski() {
    Outcome o;
    Rng rng(303);
    double worst = INFINITY, worst_eq = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_polygon(rng, 3 + static_cast<int>(rng.bits() % 15));
        const auto q = random_polygon(rng, 3 + static_cast<int>(rng.bits() % 15), rng.uniform(0.2, 2.0));
        worst = std::min(worst, std::sqrt(area(minkowski_sum(p, q))) - std::sqrt(area(p)) - std::sqrt(area(q)));
        const double lam = rng.uniform(0.1, 3.0);
        const auto r = translate_polygon(scale_polygon(p, lam), {rng.uniform(-1, 1), rng.uniform(-1, 1)});
        worst_eq = std::max(worst_eq,
                            std::abs(std::sqrt(area(minkowski_sum(p, r))) - std::sqrt(area(p)) - std::sqrt(area(r))));
    }
    o.require(worst >= -1e-10, "inequality slack " + num(worst));
    o.require(worst_eq <= 1e-9, "homothet equality gap " + num(worst_eq));
    o.note("min slack " + num(worst) + ", homothet gap " + num(worst_eq));
    return o;
}

std::vector<double> klain_lines(int n, double first) {
    std::vector<double> v{first};
    for (int m = 2; m <= n; ++m) v.push_back(m % 2 == 0 ? 0.0 : kPi / 2);
    return v;
}

// 4. Octagon from the diamond, and the square again when starting at k = 2.
Outcome octagon_example() {
    Outcome o;
    const auto d = DirectionSequence::from_line_angles(klain_lines(120, kPi / 8));
    auto s = spec_for(OperatorKind::minkowski, d, 110);
    s.reference = Body{octagon()};
    const auto t = run_process(diamond(), s);
    double worst = 0;
    for (std::size_t i = 1; i < t.records.size(); ++i) worst = std::max(worst, t.records[i].dh_ref);
    o.require(worst < 1e-12, "d_H to the octagon reached " + num(worst));

    s.reference.reset();
    const auto tr = truncation_stability(diamond(), s, 2);
    o.require(std::get<ConvexPolygon>(tr.runs[1].limit) == diamond(), "k = 2 limit is not Q exactly");
    o.require(tr.distance[0][1] > 0.1, "limits only " + num(tr.distance[0][1]) + " apart");
    o.note("max d_H to octagon " + num(worst) + ", d_H(limit_1, limit_2) = " + num(tr.distance[0][1]));
    return o;
}

// Steps until the Cauchy test first passes, or -1 within `cap` steps.
int steps_to_convergence(const Body& body, ProcessSpec s, int cap) {
    for (int n = 100; n <= cap; n += 100) {
        s.max_steps = n;
        if (detect_convergence(run_process(body, s), 50, 1e-6).verdict == Verdict::convergent) return n;
    }
    return -1;
}

// 5. Alternating axes.
Outcome klain_periodic() {
    Outcome o;
    Rng rng(505);
    const auto p = random_polygon(rng, 12);
    const auto d = generate_sequence(AngleSequence::periodic({kPi / 2, kPi / 2}), 500);
    for (auto op : {OperatorKind::steiner, OperatorKind::minkowski}) {
        const int n = steps_to_convergence(p, spec_for(op, d, 500), 500);
        o.require(n > 0, std::string(to_string(op)) + " not convergent within 500 steps");
        o.note(std::string(to_string(op)) + " convergent by step " + std::to_string(n));
    }
    auto s = spec_for(OperatorKind::steiner, d, 120);
    const auto rep = cross_symmetrization_check(p, s);
    o.require(rep.agree, "operators disagree");
    for (const auto& e : rep.entries)
        o.require(e.convergence.verdict == Verdict::convergent, std::string(to_string(e.op)) + " cross-check not convergent");
    o.note("cross-check agrees");
    return o;
}

// 6. Summable angles: no rotation correction needed.
Outcome summable() {
    Outcome o;
    Rng rng(606);
    const auto p = random_polygon(rng, 10);
    const auto a = AngleSequence::geometric(0.5, 0.9);
    const int steps = 300;
    const auto d = generate_sequence(a, steps);
    const auto rots = rotation_schedule(d);
    const RotationOp& r = rots.back();
    for (auto op : {OperatorKind::steiner, OperatorKind::minkowski}) {
        auto s = spec_for(op, d, steps);
        const auto plain = run_process(p, s);
        s.rotation_correction = true;
        const auto corr = run_process(p, s);
        const auto v = detect_convergence(plain, 50, 1e-6), vc = detect_convergence(corr, 50, 1e-6);
        o.require(v.verdict == Verdict::convergent, std::string(to_string(op)) + " uncorrected verdict " + to_string(v.verdict));
        o.require(vc.verdict == v.verdict, std::string(to_string(op)) + " corrected verdict differs");
        const auto l = std::get<ConvexPolygon>(corr.last());
        const double dist = hausdorff_distance(std::get<ConvexPolygon>(plain.last()), rotate_polygon(l, r.inverse()));
        o.require(dist < 1e-5, std::string(to_string(op)) + " d_H(K_M, R^-1 L) = " + num(dist));
        o.note(std::string(to_string(op)) + " d_H(K_M, R^-1 L) = " + num(dist));
    }
    // The rotation limit is numerically reached.
    o.require(rotation_distance(rots[steps], rots[steps - 1]) < 1e-12, "rotation schedule not settled");
    double worst = -INFINITY;
    for (int m = 0; m < steps; ++m) {
        double bound = 0.0;
        for (int k = 1; m + k <= steps; ++k) {
            bound += 2 * std::sin(std::abs(d.alpha[static_cast<std::size_t>(m + k)]) / 2);
            worst = std::max(worst, rotation_distance(rots[static_cast<std::size_t>(m + k)], rots[static_cast<std::size_t>(m)]) - bound);
        }
    }
    o.require(worst <= 1e-12, "rotation Cauchy bound exceeded by " + num(worst));
    o.note("largest excess over the rotation bound " + num(worst));
    return o;
}

// 7. Harmonic angles: shape converges, position does not.
Outcome shape_vs_divergence() {
    Outcome o;
    const auto a = AngleSequence::harmonic(1.0);
    const auto d = generate_sequence(a, 200);

    // (a) thin rhombus around a unit segment
    auto s = spec_for(OperatorKind::steiner, d, 200);
    s.rotation_correction = true;
    s.keep_snapshots = 50;
    const auto k = ConvexPolygon::hull(std::vector<Vec2>{{-0.5, 0}, {0.5, 0}, {0, 0.08}, {0, -0.08}});
    const auto corr = run_process(k, s);
    const double spread = max_pairwise_distance(corr.snapshots);
    o.require(spread < 1e-3, "corrected trailing spread " + num(spread));
    o.note("corrected spread " + num(spread));

    // (b) raster at the default resolution
    const auto ras = segment_with_disk(1.0, 0.08, 1.0 / 512, 768);
    const auto g = gamma_product(a, 1'000'000);
    const double thr = kPi * std::pow(g.lower_bound / 2, 2);
    o.require(g.lower_bound > 0, "no positive lower bound for gamma");
    o.require(raster_area(ras) < 0.8 * thr, "input area " + num(raster_area(ras)) + " not below 0.8 threshold");
    auto sr = spec_for(OperatorKind::steiner, d, 200);
    const auto c = divergence_certificate(ras, a, sr);
    o.require(c.verdict == Verdict::divergent, "certificate " + std::string(to_string(c.verdict)) +
                                                   (c.reasons.empty() ? "" : ": " + c.reasons.front()));
    // Lower bound for the spread of each trailing window of 50 iterates.
    double weakest = INFINITY;
    const auto& rec = c.trace.records;
    for (std::size_t end = rec.size() - 50; end < rec.size(); ++end) {
        double lower = rec[end].dh_window;
        for (std::size_t i = end - 48; i <= end; ++i) lower = std::max(lower, rec[i].dh_prev);
        weakest = std::min(weakest, lower);
    }
    o.require(weakest > g.lower_bound / 10, "window spread " + num(weakest) + " not above gamma/10");
    o.note("gamma >= " + num(g.lower_bound) + ", area " + num(c.conserved_value) + " < " + num(thr) +
           ", min window spread " + num(weakest));
    return o;
}

// 8. Minkowski counterexample through mean width.
Outcome minkowski_counterexample() {
    Outcome o;
    const auto a = AngleSequence::harmonic(0.5);
    const auto s = spec_for(OperatorKind::minkowski, generate_sequence(a, 100, LineOrientation::span), 100);
    const auto k = rectangle(-0.5, -0.01, 0.5, 0.01);
    const auto c = divergence_certificate(k, a, s);
    o.require(c.verdict == Verdict::divergent, "certificate " + std::string(to_string(c.verdict)) +
                                                   (c.reasons.empty() ? "" : ": " + c.reasons.front()));
    o.require(c.conserved_name == "mean width", "wrong conserved functional");
    double drift = 0;
    for (const auto& r : c.trace.records) drift = std::max(drift, std::abs(r.mean_width - mean_width(k)));
    o.require(drift <= 1e-9, "mean width drifted " + num(drift));
    o.note("W = " + num(mean_width(k)) + " < gamma >= " + num(c.gamma.lower_bound) + ", drift " + num(drift));
    return o;
}

// 9. Two lines at an irrational angle.
Outcome two_directions() {
    Outcome o;
    const double alpha = kPi * (std::sqrt(5.0) - 1) / 8;
    const auto a = AngleSequence::oscillating(alpha, 0.3);
    const auto s = spec_for(OperatorKind::steiner, generate_sequence(a, 1000, LineOrientation::span), 1000);
    const auto k = ConvexPolygon::from_ccw({{-0.5, 0}, {0, -0.1}, {0.5, 0}, {0, 0.1}});
    const auto c = divergence_certificate(k, a, s);
    o.require(area(k) < c.threshold, "start area not below threshold");
    o.require(c.verdict == Verdict::divergent, "certificate " + std::string(to_string(c.verdict)) +
                                                   (c.reasons.empty() ? "" : ": " + c.reasons.front()));
    o.require(c.oscillation && c.oscillation->low_hits.size() >= 2 && c.oscillation->high_hits.size() >= 2,
              "accumulation points not witnessed");
    if (c.oscillation)
        o.note("endpoints hit " + std::to_string(c.oscillation->low_hits.size()) + " and " +
               std::to_string(c.oscillation->high_hits.size()) + " times, area " + num(area(k)) + " < " + num(c.threshold));
    return o;
}

// 10. A 4-point cloud against its hull.
Outcome cloud_vs_hull() {
    Outcome o;
    PointCloud c;
    c.points = {{0.6, 0.1}, {-0.2, 0.5}, {-0.4, -0.3}, {0.1, -0.45}};
    const double snap = 0.02;
    auto s = spec_for(OperatorKind::minkowski, generate_sequence(AngleSequence::harmonic(1.0), 10), 10);
    s.cloud_snap = snap;
    std::vector<ConvexPolygon> polys{cloud_hull(c)};
    run_process(polys.front(), s, [&](int, const Body&, const Body& after) { polys.push_back(std::get<ConvexPolygon>(after)); });
    std::vector<double> fill{hausdorff_cloud_polygon(c, polys.front(), snap / 4)};
    double worst = 0;
    std::size_t m = 0;
    run_process(c, s, [&](int, const Body&, const Body& after) {
        const auto& cl = std::get<PointCloud>(after);
        ++m;
        worst = std::max(worst, hausdorff_distance(cloud_hull(cl), polys[m]));
        fill.push_back(hausdorff_cloud_polygon(cl, polys[m], snap / 4));
    });
    o.require(worst <= 2 * snap + 1e-6, "hull distance " + num(worst));
    o.require(fill.back() < fill.front(), "cloud-to-polygon distance did not decrease");
    o.note("max hull distance " + num(worst) + ", cloud-to-polygon " + num(fill.front()) + " -> " + num(fill.back()));
    return o;
}

// 11. Random lines make a ball.
Outcome ball_limit() {
    Outcome o;
    Rng rng(1111);
    const auto p = random_polygon(rng, 12);
    const auto t = run_process(p, spec_for(OperatorKind::steiner, generate_sequence(AngleSequence::random_lines(1111), 2000), 2000));
    const double gap = ball_gap(std::get<ConvexPolygon>(t.last()));
    double drift = 0;
    for (const auto& r : t.records) drift = std::max(drift, std::abs(r.area - area(p)) / area(p));
    o.require(gap < 5e-3, "ball_gap " + num(gap));
    o.require(drift <= 1e-9, "area drift " + num(drift));
    o.note("ball_gap " + num(gap) + ", area drift " + num(drift));
    return o;
}

// 12. Grid against polygon on grid-aligned lines.
Outcome grid_vs_polygon() {
    Outcome o;
    const auto dirs = DirectionSet::circle(4096);
    Rng rng(1212);
    const auto p = random_polygon(rng, 12);
    std::vector<double> lines;
    for (int m = 0; m < 10; ++m) lines.push_back(static_cast<double>(rng.bits() % 4096) * dirs->step() / 2);
    const auto s = spec_for(OperatorKind::minkowski, DirectionSequence::from_line_angles(lines), 10);
    const auto tp = run_process(p, s);
    const auto tg = run_process(sample_from_polygon(p, dirs), s);
    const auto& g = std::get<SupportGrid>(tg.last());
    const double err = hausdorff_supnorm(g, sample_from_polygon(std::get<ConvexPolygon>(tp.last()), dirs));
    o.require(err <= 5e-4, "sup-norm gap " + num(err));
    o.require(!g.approximate(), "grid path interpolated");
    o.note("sup-norm gap " + num(err));
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: none stated
    std::function<Outcome()> run;
};

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<Criterion> all = {
        {1, "conservation laws", 5, conservation},
        {2, "inclusion chain", 5, inclusion_chain},
        {3, "Brunn-Minkowski", 5, brunn_minkowski},
        {4, "octagon and truncation", 0, octagon_example},
        {5, "periodic axes converge", 10, klain_periodic},
        {6, "summable angles", 0, summable},
        {7, "shape convergence vs divergence", 120, shape_vs_divergence},
        {8, "Minkowski mean-width counterexample", 10, minkowski_counterexample},
        {9, "two-direction oscillation", 60, two_directions},
        {10, "cloud vs hull", 0, cloud_vs_hull},
        {11, "ball limit from random lines", 0, ball_limit},
        {12, "grid vs polygon", 0, grid_vs_polygon},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) o.require(false, "took " + num(secs) + " s, budget " + num(c.budget_s) + " s");
        failed += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
