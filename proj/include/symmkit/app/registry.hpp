#pragma once

// Named experiments. Each reads its parameters up front (so all config
// problems surface together), runs, and reports a verdict with one key
// metric plus the main trace and a few figures.

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "symmkit/app/build.hpp"
#include "symmkit/certificate.hpp"
#include "symmkit/experiments.hpp"

namespace symmkit::app {

struct ExperimentResult {
    Verdict verdict = Verdict::inconclusive;
    std::string metric;                 // "name=value" shown on the VERDICT line
    std::vector<std::string> notes;     // extra "key: value" lines
    std::optional<ProcessTrace> trace;  // written as trace.csv
    std::vector<std::pair<std::string, Body>> figures;  // name -> body, written as <name>.svg
    bool require_verdict = false;
};

struct Experiment {
    std::string name;
    std::string summary;
    Defaults defaults;
    std::function<ExperimentResult(Params&)> run;
};

namespace detail {

inline std::string kv(const std::string& k, double v) { return k + "=" + format_real(v); }

inline ConvergenceReport cauchy(const ProcessTrace& t, int window, double tol) {
    if (window < 2 || static_cast<int>(t.records.size()) < 2 * window) {
        ConvergenceReport r;
        r.reason = "trace shorter than 2 windows";
        return r;
    }
    return detect_convergence(t, window, tol);
}

inline void add_cauchy_notes(ExperimentResult& r, const ConvergenceReport& c) {
    r.notes.push_back("window: " + std::to_string(c.window) + ", tol: " + format_real(c.tol));
    r.notes.push_back("spread upper bound: " + format_real(c.max_upper));
    r.notes.push_back("spread lower bound: " + format_real(c.min_lower));
    if (!c.reason.empty()) r.notes.push_back("reason: " + c.reason);
}

struct Common {
    BodyRequest body;
    SequenceRequest seq;
    RunRequest run;
};

inline Common read_common(Params& p) { return {BodyRequest::read(p), SequenceRequest::read(p), RunRequest::read(p)}; }

inline Defaults all_keys(const Defaults& over) {
    return merge_defaults({body_keys(), sequence_keys(), representation_keys(), run_keys()}, over);
}

inline void figures(ExperimentResult& r, const Body& start, const ProcessTrace& t) {
    r.figures.emplace_back("start", start);
    r.figures.emplace_back("final", t.last());
}

/// Plain process run with the Cauchy test.
inline ExperimentResult plain_run(const Common& c, const Body& body, ProcessSpec s) {
    ExperimentResult r;
    r.require_verdict = c.run.require_verdict;
    auto t = run_process(body, s);
    const auto conv = cauchy(t, c.run.window, c.run.tol);
    r.verdict = conv.verdict;
    r.metric = kv("spread_upper", conv.max_upper);
    add_cauchy_notes(r, conv);
    figures(r, body, t);
    r.trace = std::move(t);
    return r;
}

inline ExperimentResult certificate_run(const Common& c, const Body& body, const ProcessSpec& s, double eps) {
    ExperimentResult r;
    r.require_verdict = c.run.require_verdict;
    auto cert = divergence_certificate(body, c.seq.angles, s, eps);
    r.verdict = cert.verdict;
    r.metric = kv("gamma_lower", cert.gamma.lower_bound) + " " + cert.conserved_name.substr(0, cert.conserved_name.find(' ')) +
               "=" + format_real(cert.conserved_value) + " threshold=" + format_real(cert.threshold);
    r.notes.push_back("gamma: " + format_real(cert.gamma.value) + " (lower bound " + format_real(cert.gamma.lower_bound) + ")");
    r.notes.push_back("conserved " + cert.conserved_name + ": " + format_real(cert.conserved_value));
    r.notes.push_back("threshold: " + format_real(cert.threshold));
    r.notes.push_back("liminf l_m: " + format_real(cert.ell_liminf));
    if (cert.wrap)
        r.notes.push_back("wrap witness: sum alpha > 4 pi by m = " + std::to_string(cert.wrap->index) +
                          (cert.wrap->analytic ? " (analytic)" : ""));
    if (cert.oscillation)
        r.notes.push_back("endpoint hits: " + std::to_string(cert.oscillation->low_hits.size()) + " at 0, " +
                          std::to_string(cert.oscillation->high_hits.size()) + " at " + format_real(cert.oscillation->high));
    if (s.op == OperatorKind::minkowski)
        r.notes.push_back(std::string("mean width above 2/pi: ") + (cert.lower_gate_ok ? "yes" : "no"));
    for (const auto& why : cert.reasons) r.notes.push_back("reason: " + why);
    figures(r, body, cert.trace);
    r.trace = std::move(cert.trace);
    return r;
}

inline std::vector<double> klain_line_angles(int n, double first) {
    std::vector<double> v{first};
    for (int m = 2; m <= n; ++m) v.push_back(m % 2 == 0 ? 0.0 : std::numbers::pi / 2);
    return v;
}

constexpr const char* kHalfPi = "1.5707963267948966";

}  // namespace detail

inline const std::vector<Experiment>& experiments() {
    using namespace detail;
    static const std::vector<Experiment> list = {
        {"klain", "alternating orthogonal axes on a random polygon; Cauchy test",
         all_keys({{"sequence", "periodic"}, {"angles", std::string(kHalfPi) + "," + kHalfPi}, {"steps", "200"}}),
         [](Params& p) {
             auto c = read_common(p);
             p.check();
             const Body body = c.body.build();
             return plain_run(c, body, c.run.spec(c.seq.generate(c.run.last_index()), c.body));
         }},

        {"octagon", "square Q, H_1 at 22.5 degrees then alternating axes, Minkowski; limit M_{H_1} Q (Q from k >= 2)",
         all_keys({{"body", "diamond"}, {"operator", "minkowski"}, {"steps", "120"}, {"first_line_deg", "22.5"}}),
         [](Params& p) {
             auto c = read_common(p);
             const double first = p.real("first_line_deg", -360, 360) * std::numbers::pi / 180;
             p.check();
             const Body body = c.body.build();
             auto d = DirectionSequence::from_line_angles(klain_line_angles(c.run.last_index(), first));
             auto s = c.run.spec(std::move(d), c.body);
             // The claimed limit: M_{H_1} Q from k = 1, Q itself from k >= 2.
             Body expected = body;
             if (c.run.start_index == 1) {
                 if (c.body.shape == "diamond" && c.body.rep == Representation::polygon && first == std::numbers::pi / 8) {
                     const double r = c.body.radius, a = r * (2 + std::sqrt(2.0)) / 4, b = r * std::sqrt(2.0) / 4;
                     expected = ConvexPolygon::hull(
                         std::vector<Vec2>{{a, b}, {b, a}, {-b, a}, {-a, b}, {-a, -b}, {-b, -a}, {b, -a}, {a, -b}});
                 } else {
                     expected = apply_operator(body, c.run.op, s.sequence.line(1), s);
                 }
             }
             s.reference = expected;
             auto r = plain_run(c, body, s);
             double worst = 0;
             for (std::size_t i = 1; i < r.trace->records.size(); ++i) worst = std::max(worst, r.trace->records[i].dh_ref);
             r.metric = kv("dh_limit", body_distance(r.trace->last(), expected)) + " " + kv("max_dh_ref_from_step_1", worst);
             return r;
         }},

        {"ellipse", "Steiner along the line that turns the ellipse into a disc, then random lines",
         all_keys({{"body", "ellipse"}, {"sequence", "random"}, {"steps", "40"}, {"window", "10"}, {"tol", "1e-5"}}),
         [](Params& p) {
             auto c = read_common(p);
             p.check();
             const ConvexPolygon e = c.body.polygon();
             // x^2/a^2 + y^2/b^2 <= 1 symmetrized along the line at angle phi is a
             // disc when cos^2 phi = b / (a + b).
             const double a = c.body.a, b = c.body.b;
             std::vector<double> lines{std::acos(std::sqrt(b / (a + b)))};
             Rng rng(c.body.seed ^ 0x5eedULL);
             for (int m = 1; m < c.run.last_index(); ++m) lines.push_back(std::numbers::pi * rng.uniform());
             auto s = c.run.spec(DirectionSequence::from_line_angles(lines), c.body);
             const Body body = c.body.convert(e);
             double gap1 = NAN;
             auto t = run_process(body, s, [&](int m, const Body&, const Body& after) {
                 if (m == 1 && std::holds_alternative<ConvexPolygon>(after)) gap1 = ball_gap(std::get<ConvexPolygon>(after));
             });
             ExperimentResult r;
             r.require_verdict = c.run.require_verdict;
             const auto conv = cauchy(t, c.run.window, c.run.tol);
             r.verdict = conv.verdict;
             r.metric = kv("ball_gap_step_1", gap1);
             add_cauchy_notes(r, conv);
             if (std::holds_alternative<ConvexPolygon>(t.last()))
                 r.notes.push_back("final ball_gap: " + format_real(ball_gap(std::get<ConvexPolygon>(t.last()))));
             figures(r, body, t);
             r.trace = std::move(t);
             return r;
         }},

        {"summable", "summable angles 0.5 q^m: uncorrected process against the rotation-corrected one",
         all_keys({{"sequence", "geometric"}, {"c", "0.5"}, {"q", "0.9"}, {"steps", "300"}}),
         [](Params& p) {
             auto c = read_common(p);
             p.check();
             const Body body = c.body.build();
             auto s = c.run.spec(c.seq.generate(c.run.last_index()), c.body);
             s.rotation_correction = false;
             auto plain = run_process(body, s);
             s.rotation_correction = true;
             const auto corr = run_process(body, s);
             const auto rots = rotation_schedule(s.sequence);
             const auto v = cauchy(plain, c.run.window, c.run.tol), vc = cauchy(corr, c.run.window, c.run.tol);
             ExperimentResult r;
             r.require_verdict = c.run.require_verdict;
             r.verdict = v.verdict;
             const Body back = rotate_body(corr.last(), rots.back().inverse());
             r.metric = kv("dh_K_vs_Rinv_L", body_distance(plain.last(), back));
             add_cauchy_notes(r, v);
             r.notes.push_back(std::string("corrected verdict: ") + to_string(vc.verdict));
             r.notes.push_back("beta_M: " + format_real(s.sequence.beta.back()));
             figures(r, body, plain);
             r.trace = std::move(plain);
             return r;
         }},

        {"shape", "harmonic angles, rotation-corrected Steiner process: the shape settles",
         all_keys({{"body", "segment-disk"}, {"steps", "200"}, {"rotation_correction", "true"}, {"tol", "1e-3"}}),
         [](Params& p) {
             auto c = read_common(p);
             p.check();
             const Body body = c.body.build();
             auto s = c.run.spec(c.seq.generate(c.run.last_index()), c.body);
             s.keep_snapshots = std::max(2, c.run.window);
             auto r = plain_run(c, body, s);
             const double spread = max_pairwise_distance(r.trace->snapshots);
             r.metric = kv("trailing_spread", spread);
             r.notes.push_back("trailing window spread (exact, " + std::to_string(r.trace->snapshots.size()) +
                               " iterates): " + format_real(spread));
             return r;
         }},

        {"counterexample-steiner", "unit segment with a small disc, harmonic angles, Steiner on a raster: divergence certificate",
         all_keys({{"body", "segment-disk"}, {"representation", "raster"}, {"steps", "200"}, {"eps", "0.05"}}),
         [](Params& p) {
             auto c = read_common(p);
             const double eps = p.real("eps", 0, 1);
             p.check();
             const Body body = c.body.build();
             return certificate_run(c, body, c.run.spec(c.seq.generate(c.run.last_index()), c.body), eps);
         }},

        {"counterexample-two-directions", "lines oscillating between two directions at an irrational angle: divergence certificate",
         all_keys({{"body", "rhombus"}, {"width", "1"}, {"height", "0.2"}, {"sequence", "oscillating"}, {"c", "0.3"},
                   {"orientation", "span"}, {"steps", "1000"}, {"eps", "0.05"}}),
         [](Params& p) {
             auto c = read_common(p);
             const double eps = p.real("eps", 0, 1);
             p.check();
             const Body body = c.body.build();
             return certificate_run(c, body, c.run.spec(c.seq.generate(c.run.last_index()), c.body), eps);
         }},

        {"counterexample-minkowski", "thin rectangle around a unit segment, Minkowski: mean-width certificate",
         all_keys({{"body", "rectangle"}, {"operator", "minkowski"}, {"c", "0.5"}, {"orientation", "span"}, {"steps", "100"},
                   {"eps", "0.05"}}),
         [](Params& p) {
             auto c = read_common(p);
             const double eps = p.real("eps", 0, 1);
             p.check();
             const Body body = c.body.build();
             return certificate_run(c, body, c.run.spec(c.seq.generate(c.run.last_index()), c.body), eps);
         }},

        {"universal-random", "uniformly random lines, Steiner: the limit is a ball",
         all_keys({{"sequence", "random"}, {"steps", "2000"}, {"sample_every", "100"}}),
         [](Params& p) {
             auto c = read_common(p);
             const int every = p.integer("sample_every", 1, 1'000'000);
             p.check();
             const Body body = c.body.build();
             auto s = c.run.spec(c.seq.generate(c.run.last_index()), c.body);
             std::vector<std::pair<int, double>> gaps;
             auto t = run_process(body, s, [&](int m, const Body&, const Body& after) {
                 if (m % every == 0 && std::holds_alternative<ConvexPolygon>(after))
                     gaps.emplace_back(m, ball_gap(std::get<ConvexPolygon>(after)));
             });
             ExperimentResult r;
             r.require_verdict = c.run.require_verdict;
             const auto conv = cauchy(t, c.run.window, c.run.tol);
             r.verdict = conv.verdict;
             const double gap = std::holds_alternative<ConvexPolygon>(t.last()) ? ball_gap(std::get<ConvexPolygon>(t.last())) : NAN;
             r.metric = kv("ball_gap", gap);
             add_cauchy_notes(r, conv);
             for (auto [m, g] : gaps) r.notes.push_back("ball_gap at step " + std::to_string(m) + ": " + format_real(g));
             figures(r, body, t);
             r.trace = std::move(t);
             return r;
         }},

        {"cloud-vs-hull", "four-point cloud against its hull polygon under the same Minkowski lines",
         all_keys({{"body", "quad"}, {"representation", "cloud"}, {"operator", "minkowski"}, {"steps", "10"}, {"snap", "0.02"},
                   {"window", "5"}, {"fill_pitch", "0.005"}}),
         [](Params& p) {
             auto c = read_common(p);
             const double pitch = p.real("fill_pitch", 1e-9, 1e3);
             p.check();
             if (c.body.rep != Representation::cloud) throw InputError("cloud-vs-hull: representation must be cloud");
             const auto cloud = std::get<PointCloud>(c.body.build());
             auto s = c.run.spec(c.seq.generate(c.run.last_index()), c.body);
             std::vector<ConvexPolygon> polys{cloud_hull(cloud)};
             run_process(polys.front(), s, [&](int, const Body&, const Body& after) { polys.push_back(std::get<ConvexPolygon>(after)); });
             double hull_worst = 0;
             std::vector<double> fill{hausdorff_cloud_polygon(cloud, polys.front(), pitch)};
             std::size_t m = 0;
             auto t = run_process(cloud, s, [&](int, const Body&, const Body& after) {
                 const auto& cl = std::get<PointCloud>(after);
                 ++m;
                 hull_worst = std::max(hull_worst, hausdorff_distance(cloud_hull(cl), polys[m]));
                 fill.push_back(hausdorff_cloud_polygon(cl, polys[m], pitch));
             });
             ExperimentResult r;
             r.require_verdict = c.run.require_verdict;
             const auto conv = cauchy(t, c.run.window, c.run.tol);
             r.verdict = conv.verdict;
             r.metric = kv("max_hull_dh", hull_worst) + " " + kv("bound", 2 * c.body.snap);
             add_cauchy_notes(r, conv);
             for (std::size_t i = 0; i < fill.size(); ++i)
                 r.notes.push_back("cloud-to-polygon d_H at step " + std::to_string(i) + ": " + format_real(fill[i]));
             r.figures.emplace_back("start", Body{cloud});
             r.figures.emplace_back("final", t.last());
             r.figures.emplace_back("final_polygon", Body{polys.back()});
             r.trace = std::move(t);
             return r;
         }},

        {"cross-check", "Steiner, fiber and Minkowski on one polygon and sequence; verdicts must agree",
         all_keys({{"sequence", "periodic"}, {"angles", std::string(kHalfPi) + "," + kHalfPi}, {"steps", "120"}}),
         [](Params& p) {
             auto c = read_common(p);
             p.check();
             if (c.body.rep != Representation::polygon) throw IncompatibleError("cross-check: needs the polygon representation");
             const auto poly = c.body.polygon();
             auto s = c.run.spec(c.seq.generate(c.run.last_index()), c.body);
             auto rep = cross_symmetrization_check(poly, s, c.run.tol);
             ExperimentResult r;
             r.require_verdict = c.run.require_verdict;
             r.verdict = rep.agree ? rep.entries.front().convergence.verdict : Verdict::inconclusive;
             r.metric = std::string("agree=") + (rep.agree ? "true" : "false") + " " + kv("sandwich_violation", rep.max_sandwich_violation);
             for (const auto& e : rep.entries) r.notes.push_back(std::string(to_string(e.op)) + ": " + to_string(e.convergence.verdict));
             r.figures.emplace_back("start", Body{poly});
             for (const auto& e : rep.entries) r.figures.emplace_back(std::string("final_") + to_string(e.op), e.trace.last());
             r.trace = std::move(rep.entries.front().trace);
             return r;
         }},
    };
    return list;
}

inline const Experiment* find_experiment(const std::string& name) {
    for (const auto& e : experiments())
        if (e.name == name) return &e;
    return nullptr;
}

/// Defaults for the generic runner (`symmkit run`).
inline Defaults run_defaults() { return detail::all_keys({{"certificate", "false"}, {"eps", "0.05"}}); }

inline ExperimentResult run_generic(Params& p) {
    auto c = detail::read_common(p);
    const bool cert = p.flag("certificate");
    const double eps = p.real("eps", 0, 1);
    p.check();
    const Body body = c.body.build();
    auto s = c.run.spec(c.seq.generate(c.run.last_index()), c.body);
    return cert ? detail::certificate_run(c, body, s, eps) : detail::plain_run(c, body, s);
}

}  // namespace symmkit::app
