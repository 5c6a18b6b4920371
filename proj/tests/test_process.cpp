#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "symmkit/certificate.hpp"
#include "symmkit/experiments.hpp"
#include "symmkit/process.hpp"
#include "symmkit/random.hpp"

using namespace symmkit;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexPolygon diamond() { return ConvexPolygon::from_ccw({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }

// Octagon from the vertex-sum formula for (Q + R_H Q)/2, H at 22.5 degrees.
ConvexPolygon octagon() {
    const double a = (2 + std::sqrt(2.0)) / 4, b = std::sqrt(2.0) / 4;
    return ConvexPolygon::hull(std::vector<Vec2>{{a, b}, {b, a}, {-b, a}, {-a, b}, {-a, -b}, {-b, -a}, {b, -a}, {a, -b}});
}

std::vector<double> klain_lines(int n, double first) {
    std::vector<double> v{first};
    for (int m = 2; m <= n; ++m) v.push_back(m % 2 == 0 ? 0.0 : kPi / 2);
    return v;
}

ProcessSpec spec_for(OperatorKind op, DirectionSequence d, int steps) {
    ProcessSpec s;
    s.op = op;
    s.sequence = std::move(d);
    s.max_steps = steps;
    return s;
}

ProcessTrace synthetic(const std::vector<double>& dh) {
    ProcessTrace t;
    t.window = 0;
    for (std::size_t i = 0; i < dh.size(); ++i) {
        StepRecord r;
        r.step = static_cast<int>(i);
        r.dh_prev = dh[i];
        t.records.push_back(r);
    }
    return t;
}

}  // namespace

TEST(RunProcess, SymmetricStartConstantSequenceIsConstant) {
    const auto sq = rectangle(-1, -0.5, 1, 0.5);
    const auto d = DirectionSequence::from_line_angles(std::vector<double>(20, 0.0));
    for (auto op : {OperatorKind::steiner, OperatorKind::fiber, OperatorKind::minkowski}) {
        auto s = spec_for(op, d, 20);
        s.reference = Body{sq};
        const auto t = run_process(sq, s);
        ASSERT_EQ(t.records.size(), 21u);
        for (const auto& r : t.records) {
            EXPECT_LT(r.dh_prev, 1e-15);
            EXPECT_LT(r.dh_ref, 1e-15);
            EXPECT_NEAR(r.area, 2.0, 1e-14);
        }
    }
}

TEST(RunProcess, OctagonExampleAndTruncation) {
    const auto d = DirectionSequence::from_line_angles(klain_lines(120, kPi / 8));
    auto s = spec_for(OperatorKind::minkowski, d, 119);
    s.reference = Body{octagon()};
    const auto t = run_process(diamond(), s);
    for (std::size_t i = 1; i < t.records.size(); ++i) EXPECT_LT(t.records[i].dh_ref, 1e-12) << "step " << i;
    EXPECT_EQ(detect_convergence(t, 50, 1e-6).verdict, Verdict::convergent);

    s.reference = Body{diamond()};
    s.start_index = 2;
    const auto t2 = run_process(diamond(), s);
    for (const auto& r : t2.records) EXPECT_LT(r.dh_ref, 1e-15);

    s.start_index = 1;
    s.max_steps = 110;
    const auto tr = truncation_stability(diamond(), s, 2);
    ASSERT_EQ(tr.runs.size(), 2u);
    EXPECT_LT(hausdorff_distance(std::get<ConvexPolygon>(tr.runs[0].limit), octagon()), 1e-12);
    EXPECT_EQ(std::get<ConvexPolygon>(tr.runs[1].limit), diamond());
    EXPECT_GT(tr.distance[0][1], 0.1);
    for (const auto& r : tr.runs) EXPECT_EQ(r.convergence.verdict, Verdict::convergent);
}

TEST(RunProcess, EllipseBallLine) {
    const double a = 2.0, b = 0.5;
    const double phi = std::acos(std::sqrt(b / (a + b)));
    std::vector<double> lines{phi};
    Rng rng(4);
    for (int m = 0; m < 5; ++m) lines.push_back(kPi * rng.uniform());
    const auto t = run_process(ellipse_polygon(a, b, 512), spec_for(OperatorKind::steiner, DirectionSequence::from_line_angles(lines), 6),
                               [&](int m, const Body&, const Body& after) {
                                   EXPECT_LT(ball_gap(std::get<ConvexPolygon>(after)), 2e-3) << "step " << m;
                               });
    EXPECT_EQ(t.records.size(), 7u);
}

TEST(RunProcess, ValidatesInputs) {
    const auto d = generate_sequence(AngleSequence::harmonic(1.0), 5);
    const auto grid = sample_from_polygon(diamond(), DirectionSet::circle(64));
    EXPECT_THROW(run_process(grid, spec_for(OperatorKind::steiner, d, 3)), IncompatibleError);
    EXPECT_THROW(run_process(grid, spec_for(OperatorKind::fiber, d, 3)), IncompatibleError);
    const auto ras = segment_with_disk(1.0, 0.1, 1.0 / 64, 96);
    EXPECT_THROW(run_process(ras, spec_for(OperatorKind::minkowski, d, 3)), IncompatibleError);
    EXPECT_THROW(run_process(ras, spec_for(OperatorKind::fiber, d, 3)), IncompatibleError);
    auto corr = spec_for(OperatorKind::steiner, d, 3);
    corr.rotation_correction = true;
    EXPECT_THROW(run_process(ras, corr), IncompatibleError);
    EXPECT_THROW(run_process(diamond(), spec_for(OperatorKind::steiner, d, 6)), InputError);
    EXPECT_THROW(run_process(diamond(), spec_for(OperatorKind::steiner, d, 0)), InputError);
    PointCloud c;
    EXPECT_THROW(run_process(c, spec_for(OperatorKind::steiner, d, 3)), IncompatibleError);
}

TEST(RunProcess, CloudCapacityErrorNamesStep) {
    PointCloud c;
    c.max_size = 60;
    c.points = {{0.6, 0.1}, {-0.2, 0.5}, {-0.4, -0.3}, {0.1, -0.45}};
    auto s = spec_for(OperatorKind::minkowski, generate_sequence(AngleSequence::harmonic(1.0), 10), 10);
    s.cloud_snap = 1e-6;
    try {
        run_process(c, s);
        FAIL() << "expected a capacity error";
    } catch (const CapacityError& e) {
        EXPECT_NE(std::string(e.what()).find("step "), std::string::npos);
    }
}

TEST(RunProcess, MonotoneAlongRandomRuns) {
    Rng rng(12);
    for (int t = 0; t < 5; ++t) {
        const auto p = random_polygon(rng, 10);
        const auto d = generate_sequence(AngleSequence::random_lines(rng.bits()), 15);
        for (auto op : {OperatorKind::steiner, OperatorKind::fiber, OperatorKind::minkowski}) {
            const auto tr = run_process(p, spec_for(op, d, 15));
            const auto rep = check_monotone(tr);
            EXPECT_TRUE(rep.ok) << to_string(op) << " trial " << t << " area step " << rep.area_violation_step
                                << " width step " << rep.width_violation_step;
        }
    }
}

TEST(RunProcess, RasterTraceLogsResampling) {
    // default resolution; the 0.5% bound does not hold on coarse grids
    const auto ras = segment_with_disk(1.0, 0.1, 1.0 / 512, 768);
    auto s = spec_for(OperatorKind::steiner, generate_sequence(AngleSequence::harmonic(1.0), 10), 10);
    const auto tr = run_process(ras, s);
    EXPECT_EQ(tr.cell_size, 1.0 / 512);
    for (std::size_t i = 1; i < tr.records.size(); ++i) {
        const double a0 = tr.records[i - 1].area, a1 = tr.records[i].area;
        EXPECT_NEAR(tr.records[i].resample_err, std::abs(a1 - a0) / a0, 1e-15);
        EXPECT_LE(tr.records[i].resample_err, 5e-3);
    }
    EXPECT_TRUE(check_monotone(tr).ok);
}

TEST(RunProcess, SandwichAlongProcesses) {
    Rng rng(8);
    for (int t = 0; t < 3; ++t) {
        auto s = spec_for(OperatorKind::steiner, generate_sequence(AngleSequence::random_lines(rng.bits()), 15), 15);
        s.window = 5;
        const auto rep = cross_symmetrization_check(random_polygon(rng, 9), s);
        EXPECT_LE(rep.max_sandwich_violation, 1e-9);
    }
}

TEST(RunProcess, RotationCorrectionRotatesRecordedIterates) {
    Rng rng(19);
    const auto p = random_polygon(rng, 8);
    const auto d = generate_sequence(AngleSequence::geometric(0.5, 0.9), 30);
    auto s = spec_for(OperatorKind::minkowski, d, 30);
    s.keep_snapshots = 31;
    const auto plain = run_process(p, s);
    s.rotation_correction = true;
    const auto corr = run_process(p, s);
    ASSERT_EQ(plain.snapshots.size(), corr.snapshots.size());
    for (std::size_t i = 0; i < plain.snapshots.size(); ++i) {
        const int m = plain.snapshots[i].step;
        const auto want = rotate_polygon(std::get<ConvexPolygon>(plain.snapshots[i].body), -d.beta[static_cast<std::size_t>(m)]);
        EXPECT_LT(hausdorff_distance(want, std::get<ConvexPolygon>(corr.snapshots[i].body)), 1e-12);
    }
    EXPECT_LT(hausdorff_distance(std::get<ConvexPolygon>(*corr.last_uncorrected), std::get<ConvexPolygon>(plain.last())),
              1e-15);
}

TEST(RunProcess, SummableCorrectedAndUncorrectedAgree) {
    Rng rng(27);
    const auto p = random_polygon(rng, 10);
    const auto a = AngleSequence::geometric(0.5, 0.7);
    auto s = spec_for(OperatorKind::steiner, generate_sequence(a, 160), 160);
    const auto plain = run_process(p, s);
    s.rotation_correction = true;
    const auto corr = run_process(p, s);
    const auto v1 = detect_convergence(plain, 50, 1e-6), v2 = detect_convergence(corr, 50, 1e-6);
    EXPECT_EQ(v1.verdict, Verdict::convergent) << v1.reason << " " << v1.max_upper << " " << v1.min_lower;
    EXPECT_EQ(v1.verdict, v2.verdict);
    const double beta_inf = 0.5 * 0.7 / (1 - 0.7);
    const auto l = std::get<ConvexPolygon>(corr.last());
    EXPECT_LT(hausdorff_distance(std::get<ConvexPolygon>(plain.last()), rotate_polygon(l, beta_inf)), 1e-5);
}

TEST(RunProcess, DeterministicCsv) {
    Rng rng(2);
    const auto p = random_polygon(rng, 10);
    const auto s = spec_for(OperatorKind::steiner, generate_sequence(AngleSequence::random_lines(42), 40), 40);
    std::ostringstream a, b;
    write_trace_csv(a, run_process(p, s));
    write_trace_csv(b, run_process(p, s));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
              "step,beta,dh_prev,dh_ref,area,mean_width,min_support,max_support,resample_err");
}

TEST(TraceCsv, RoundTripAndMissingColumn) {
    Rng rng(6);
    const auto s = spec_for(OperatorKind::minkowski, generate_sequence(AngleSequence::harmonic(1.0), 10), 10);
    const auto tr = run_process(random_polygon(rng, 7), s);
    std::stringstream ss;
    write_trace_csv(ss, tr);
    const auto table = read_trace_csv(ss);
    ASSERT_EQ(table.at("area").size(), tr.records.size());
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
        EXPECT_EQ(table.at("area")[i], tr.records[i].area);
        EXPECT_EQ(table.at("beta")[i], tr.records[i].beta);
    }
    std::istringstream bad("step,beta,dh_prev\n0,0,0\n");
    try {
        read_trace_csv(bad);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("'dh_ref'"), std::string::npos);
    }
    std::istringstream ragged("step,beta,dh_prev,dh_ref,area,mean_width,min_support,max_support,resample_err\n0,1\n");
    EXPECT_THROW(read_trace_csv(ragged), ParseError);
}

TEST(DetectConvergence, SyntheticTraces) {
    const auto flat = synthetic(std::vector<double>(100, 0.0));
    EXPECT_EQ(detect_convergence(flat, 50, 1e-12).verdict, Verdict::convergent);
    EXPECT_EQ(detect_convergence(flat, 50, 1e-300).verdict, Verdict::convergent);

    std::vector<double> two(100, 0.3);
    two[0] = 0.0;
    EXPECT_EQ(detect_convergence(synthetic(two), 50, 1e-6, 0.1).verdict, Verdict::non_cauchy);

    // Large steps once, then quiet: straddles.
    std::vector<double> once(100, 0.0);
    once[70] = 0.5;
    EXPECT_EQ(detect_convergence(synthetic(once), 50, 1e-6, 0.1).verdict, Verdict::inconclusive);
    EXPECT_THROW(detect_convergence(synthetic(std::vector<double>(99, 0.0)), 50, 1e-6), InputError);
}

TEST(DetectConvergence, KlainPeriodicOnRandomPolygon) {
    Rng rng(15);
    const auto p = random_polygon(rng, 12);
    const auto d = generate_sequence(AngleSequence::periodic({kPi / 2, kPi / 2}), 500);
    for (auto op : {OperatorKind::steiner, OperatorKind::minkowski}) {
        const auto t = run_process(p, spec_for(op, d, 120));
        EXPECT_EQ(detect_convergence(t, 50, 1e-6).verdict, Verdict::convergent) << to_string(op);
    }
    auto s = spec_for(OperatorKind::steiner, d, 120);
    const auto rep = cross_symmetrization_check(p, s);
    EXPECT_TRUE(rep.agree);
}

TEST(DivergenceCertificate, SummableIsInconclusive) {
    const auto a = AngleSequence::geometric(0.5, 0.9);
    auto s = spec_for(OperatorKind::steiner, generate_sequence(a, 50), 50);
    const auto c = divergence_certificate(ConvexPolygon::from_ccw({{0, -0.5}, {0.05, 0}, {0, 0.5}, {-0.05, 0}}), a, s);
    EXPECT_EQ(c.verdict, Verdict::inconclusive);
    ASSERT_FALSE(c.reasons.empty());
    EXPECT_NE(c.reasons.front().find("precondition"), std::string::npos);
}

TEST(DivergenceCertificate, SteinerPolygonHarmonic) {
    // Thin rhombus around a vertical unit segment.
    const auto k = ConvexPolygon::from_ccw({{0, -0.5}, {0.05, 0}, {0, 0.5}, {-0.05, 0}});
    const auto a = AngleSequence::harmonic(1.0);
    const auto s = spec_for(OperatorKind::steiner, generate_sequence(a, 200), 200);
    const auto c = divergence_certificate(k, a, s);
    EXPECT_EQ(c.verdict, Verdict::divergent) << (c.reasons.empty() ? "" : c.reasons.front());
    EXPECT_LT(c.conserved_value, c.threshold);
    ASSERT_TRUE(c.wrap.has_value());
    for (std::size_t i = 0; i < c.ell.size(); ++i) EXPECT_GE(c.ell[i], c.ell_bound[i] * (1 - 1e-12));
    EXPECT_NEAR(c.ell.front(), std::cos(1.0), 1e-12);
}

TEST(DivergenceCertificate, FatBodyIsInconclusive) {
    const auto a = AngleSequence::harmonic(1.0);
    const auto s = spec_for(OperatorKind::steiner, generate_sequence(a, 60), 60);
    const auto c = divergence_certificate(regular_polygon(64, 0.5), a, s);
    EXPECT_EQ(c.verdict, Verdict::inconclusive);
}

TEST(DivergenceCertificate, MinkowskiMeanWidthGate) {
    const auto a = AngleSequence::harmonic(0.5);
    auto s = spec_for(OperatorKind::minkowski, generate_sequence(a, 100, LineOrientation::span), 100);
    const auto k = rectangle(-0.5, -0.01, 0.5, 0.01);
    const auto c = divergence_certificate(k, a, s);
    EXPECT_EQ(c.verdict, Verdict::divergent) << (c.reasons.empty() ? "" : c.reasons.front());
    EXPECT_EQ(c.conserved_name, "mean width");
    EXPECT_TRUE(c.lower_gate_ok);
    ASSERT_TRUE(c.wrap.has_value());
    EXPECT_TRUE(c.wrap->analytic);
    for (const auto& r : c.trace.records) EXPECT_NEAR(r.mean_width, mean_width(k), 1e-9);
}

TEST(DivergenceCertificate, TwoDirectionOscillation) {
    const double alpha = kPi * (std::sqrt(5.0) - 1) / 8;
    const auto a = AngleSequence::oscillating(alpha, 0.3);
    auto s = spec_for(OperatorKind::steiner, generate_sequence(a, 1000, LineOrientation::span), 1000);
    const auto k = ConvexPolygon::from_ccw({{-0.5, 0}, {0, -0.1}, {0.5, 0}, {0, 0.1}});
    const auto c = divergence_certificate(k, a, s);
    EXPECT_EQ(c.verdict, Verdict::divergent) << (c.reasons.empty() ? "" : c.reasons.front());
    ASSERT_TRUE(c.oscillation.has_value());
    EXPECT_GE(c.oscillation->low_hits.size(), 2u);
    EXPECT_GE(c.oscillation->high_hits.size(), 2u);
}

TEST(BallLimit, KlainSquareIsNotABall) {
    const auto sq = rectangle(-1, -1, 1, 1);
    const auto d = generate_sequence(AngleSequence::periodic({kPi / 2, kPi / 2}), 20);
    const auto rep = ball_limit_check(sq, spec_for(OperatorKind::steiner, d, 20), 5);
    EXPECT_NEAR(rep.final_gap, std::sqrt(2.0) - 1, 1e-12);
    const auto disc = regular_polygon(4096, 1.0);
    const auto r2 = ball_limit_check(disc, spec_for(OperatorKind::steiner, d, 4), 2);
    EXPECT_LT(r2.final_gap, 1e-6);
}
