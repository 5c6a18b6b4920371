#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "symmkit/random.hpp"
#include "symmkit/sequences.hpp"

using namespace symmkit;

namespace {

constexpr double kPi = std::numbers::pi;

AngleSequence random_kind(Rng& rng) {
    switch (static_cast<int>(rng.uniform() * 5)) {
        case 0: return AngleSequence::harmonic(rng.uniform(0.1, 1.5));
        case 1: return AngleSequence::power(rng.uniform(0.1, 1.5), rng.uniform(0.6, 2.0));
        case 2: return AngleSequence::geometric(rng.uniform(0.1, 1.5), rng.uniform(0.3, 0.95));
        case 3: return AngleSequence::periodic({rng.uniform(0.01, kPi / 2), rng.uniform(0.01, kPi / 2)});
        default: return AngleSequence::oscillating(rng.uniform(0.1, 1.2), rng.uniform(0.05, 0.5));
    }
}

}  // namespace

TEST(GenerateSequence, ExplicitRightAngle) {
    const auto d = generate_sequence(AngleSequence::explicit_list({kPi / 2}), 1);
    EXPECT_NEAR(d.u(0).x, 1.0, 0);
    EXPECT_NEAR(d.u(1).x, 0.0, 1e-15);
    EXPECT_NEAR(d.u(1).y, 1.0, 1e-15);
    // H_1 = u_1^perp is the horizontal axis.
    EXPECT_NEAR(d.line(1).angle(), 0.0, 1e-15);
}

TEST(GenerateSequence, HarmonicPartialSums) {
    const auto d = generate_sequence(AngleSequence::harmonic(1.0), 3);
    ASSERT_EQ(d.size(), 3);
    EXPECT_DOUBLE_EQ(d.beta[1], 1.0);
    EXPECT_DOUBLE_EQ(d.beta[2], 1.5);
    EXPECT_NEAR(d.beta[3], 11.0 / 6.0, 1e-15);
}

TEST(GenerateSequence, PeriodicRightAnglesAlternateAxes) {
    const auto d = generate_sequence(AngleSequence::periodic({kPi / 2, kPi / 2}), 6);
    for (int m = 1; m <= 6; ++m) {
        const double a = d.line(m).angle();
        const double expect = m % 2 == 1 ? 0.0 : kPi / 2;
        EXPECT_NEAR(std::min(std::abs(a - expect), std::abs(a - expect - kPi)), 0.0, 1e-12) << "m=" << m;
    }
}

TEST(GenerateSequence, ConsecutiveDirectionsMeetAtAlpha) {
    Rng rng(101);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_kind(rng);
        const auto d = generate_sequence(a, 200);
        for (int m = 1; m <= d.size(); ++m) {
            const double al = d.alpha[static_cast<std::size_t>(m)];
            EXPECT_GT(al, 0.0);
            EXPECT_LE(al, kPi / 2);
            EXPECT_NEAR(dot(d.u(m), d.u(m - 1)), std::cos(al), 1e-12);
            if (a.kind != SequenceKind::oscillating) EXPECT_DOUBLE_EQ(al, a.alpha(m));
        }
    }
}

TEST(GenerateSequence, LineOrientation) {
    const auto a = AngleSequence::harmonic(1.0);
    const auto n = generate_sequence(a, 5, LineOrientation::normal);
    const auto s = generate_sequence(a, 5, LineOrientation::span);
    for (int m = 0; m <= 5; ++m) {
        const Vec2 dn = unit_vec(n.line(m).angle()), ds = unit_vec(s.line(m).angle());
        EXPECT_NEAR(dot(dn, n.u(m)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(dot(ds, s.u(m))), 1.0, 1e-12);
    }
}

TEST(GenerateSequence, RejectsOutOfRange) {
    EXPECT_THROW(AngleSequence::harmonic(2.0), InputError);
    EXPECT_THROW(AngleSequence::explicit_list({0.0}), InputError);
    EXPECT_THROW(AngleSequence::explicit_list({1.7}), InputError);
    EXPECT_THROW(AngleSequence::periodic({}), InputError);
    EXPECT_THROW(AngleSequence::geometric(1.0, 1.0), InputError);
    EXPECT_THROW(AngleSequence::oscillating(2.0, 0.1), InputError);
    EXPECT_THROW(generate_sequence(AngleSequence::harmonic(1.0), 0), InputError);
    EXPECT_THROW(generate_sequence(AngleSequence::explicit_list({0.1, 0.2}), 3), InputError);
}

TEST(GenerateSequence, OscillationVisitsBothEndpoints) {
    const double alpha = kPi * (std::sqrt(5.0) - 1) / 8;
    const auto a = AngleSequence::oscillating(alpha, 0.3);
    const auto d = generate_sequence(a, 1000, LineOrientation::span);
    int low = 0, high = 0;
    for (int m = 1; m <= d.size(); ++m) {
        const double b = d.beta[static_cast<std::size_t>(m)];
        EXPECT_GE(b, 0.0);
        EXPECT_LE(b, alpha);
        EXPECT_LE(d.alpha[static_cast<std::size_t>(m)], 0.3 / m + 1e-15);
        low += b == 0.0;
        high += b == alpha;
    }
    EXPECT_GE(low, 2);
    EXPECT_GE(high, 2);
}

TEST(GenerateSequence, FromLineAngles) {
    const auto d = DirectionSequence::from_line_angles({kPi / 8, 0.0, kPi / 2, 3.0});
    ASSERT_EQ(d.size(), 4);
    EXPECT_NEAR(d.line(1).angle(), kPi / 8, 1e-15);
    EXPECT_NEAR(d.line(4).angle(), 3.0, 1e-15);
    for (int m = 1; m <= 4; ++m) {
        EXPECT_LE(d.alpha[static_cast<std::size_t>(m)], kPi / 2 + 1e-15);
        EXPECT_GE(dot(d.u(m), d.u(m - 1)), -1e-15);
        EXPECT_NEAR(dot(d.u(m), unit_vec(d.line(m).angle())), 0.0, 1e-15);
    }
}

TEST(GenerateSequence, RandomLinesAreSeeded) {
    const auto a = generate_sequence(AngleSequence::random_lines(9), 50);
    const auto b = generate_sequence(AngleSequence::random_lines(9), 50);
    const auto c = generate_sequence(AngleSequence::random_lines(10), 50);
    EXPECT_EQ(a.beta, b.beta);
    EXPECT_NE(a.beta, c.beta);
}

TEST(GammaProduct, ExplicitLists) {
    const auto g = gamma_product(AngleSequence::explicit_list({kPi / 4}), 10);
    EXPECT_NEAR(g.value, std::sqrt(0.5), 1e-15);
    EXPECT_EQ(g.lower_bound, g.value);
    const std::vector<double> l{0.3, 0.2, 0.9};
    const auto h = gamma_product(AngleSequence::explicit_list(l), 5);
    EXPECT_EQ(h.value, std::cos(0.3) * std::cos(0.2) * std::cos(0.9));
    EXPECT_EQ(h.lower_bound, h.value);
    EXPECT_EQ(h.tail_sq, 0.0);
}

TEST(GammaProduct, HarmonicMatchesExtendedPrecision) {
    const std::int64_t m = 1'000'000;
    long double p = 1.0L;
    for (std::int64_t k = 1; k <= m; ++k) p *= std::cos(1.0L / static_cast<long double>(k));
    const auto g = gamma_product(AngleSequence::harmonic(1.0), m);
    EXPECT_GT(g.value, 0.0);
    EXPECT_LT(g.value, 1.0);
    EXPECT_NEAR(g.value, static_cast<double>(p), 1e-9);
    EXPECT_LE(g.lower_bound, g.value);
    EXPECT_NEAR(g.lower_bound, g.value, 2e-6);
}

TEST(GammaProduct, LowerBoundsHoldAgainstLongProducts) {
    Rng rng(77);
    for (int t = 0; t < 30; ++t) {
        AngleSequence a = AngleSequence::harmonic(1.0);
        switch (t % 3) {
            case 0: a = AngleSequence::harmonic(rng.uniform(0.2, 1.5)); break;
            case 1: a = AngleSequence::power(rng.uniform(0.2, 1.5), rng.uniform(0.6, 1.5)); break;
            default: a = AngleSequence::geometric(rng.uniform(0.2, 1.5), rng.uniform(0.3, 0.95)); break;
        }
        const auto lb = gamma_product(a, 20).lower_bound;
        long double p = 1.0L;
        for (std::int64_t k = 1; k <= 200000; ++k) p *= std::cos(static_cast<long double>(a.alpha(k)));
        // The infinite product is at most the long one; allow for the two
        // products being rounded in different precisions.
        EXPECT_LE(lb, static_cast<double>(p) * (1 + 1e-14)) << a.describe();
        EXPECT_GT(lb, 0.0) << a.describe();
    }
}

TEST(GammaProduct, HeadExtendsPastLargeAngles) {
    // alpha_m = (1.5/0.9) 0.9^m: 1.5, 1.35, 1.215, 1.0935, 0.98...
    const auto a = AngleSequence::geometric(1.5 / 0.9, 0.9);
    const auto g = gamma_product(a, 1);
    double want = 1.0;
    for (int m = 1; m <= 4; ++m) want *= std::cos(a.alpha(m));
    EXPECT_EQ(g.value, want);
    EXPECT_GT(g.lower_bound, 0.0);
    EXPECT_LE(g.lower_bound, want);
}

TEST(GammaProduct, PeriodicHasNoBound) {
    const auto g = gamma_product(AngleSequence::periodic({kPi / 2, kPi / 2}), 4);
    EXPECT_NEAR(g.value, 0.0, 1e-30);
    EXPECT_EQ(g.lower_bound, 0.0);
}

TEST(WrapWitness, EnumeratedHarmonic) {
    const auto a = AngleSequence::harmonic(1.0);
    const auto w = wrap_witness(a);
    ASSERT_TRUE(w.has_value());
    EXPECT_FALSE(w->analytic);
    double s = 0.0;
    for (std::int64_t m = 1; m < w->index; ++m) s += 1.0 / static_cast<double>(m);
    EXPECT_LE(s, 4 * kPi);
    EXPECT_GT(s + 1.0 / static_cast<double>(w->index), 4 * kPi);
}

TEST(WrapWitness, AnalyticForSlowHarmonic) {
    const auto w = wrap_witness(AngleSequence::harmonic(0.5));
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(w->analytic);
    EXPECT_GT(w->partial_sum, 4 * kPi);
    // The bound c ln(N+1) <= c H_N holds; spot-check it where summation is cheap.
    double h = 0.0;
    for (int n = 1; n <= 100000; ++n) {
        h += 1.0 / n;
        if (n % 9973 == 0) EXPECT_LE(std::log(n + 1.0), h);
    }
    EXPECT_FALSE(wrap_witness(AngleSequence::geometric(0.5, 0.9)).has_value());
    EXPECT_FALSE(wrap_witness(AngleSequence::oscillating(0.5, 0.1)).has_value());
}

TEST(RotationSchedule, PlanarScheduleIsMinusBeta) {
    const auto d = generate_sequence(AngleSequence::harmonic(1.0), 100);
    const auto r = rotation_schedule(d);
    ASSERT_EQ(r.size(), 101u);
    for (int m = 0; m <= 100; ++m) {
        const auto want = RotationOp::planar(-d.beta[static_cast<std::size_t>(m)]);
        EXPECT_LT(rotation_distance(r[static_cast<std::size_t>(m)], want), 1e-12) << m;
        const Vector e = r[static_cast<std::size_t>(m)].apply(d.direction(m).coords());
        EXPECT_NEAR(e[0], 1.0, 1e-12);
        EXPECT_NEAR(e[1], 0.0, 1e-12);
    }
}

TEST(RotationSchedule, ConstantDirections) {
    const auto d = DirectionSequence::from_line_angles(std::vector<double>(10, 0.4));
    const auto r = rotation_schedule(d);
    for (std::size_t m = 2; m < r.size(); ++m) EXPECT_LT(rotation_distance(r[m], r[1]), 1e-15);
}

TEST(RotationSchedule, CauchyBound) {
    Rng rng(55);
    for (int t = 0; t < 20; ++t) {
        const auto a = AngleSequence::geometric(rng.uniform(0.1, 1.5), rng.uniform(0.3, 0.95));
        const auto d = generate_sequence(a, 60);
        const auto r = rotation_schedule(d);
        for (int m = 0; m < 60; ++m) {
            double bound = 0.0;
            for (int k = 1; m + k <= 60; ++k) {
                bound += 2 * std::sin(d.alpha[static_cast<std::size_t>(m + k)] / 2);
                const double dist = rotation_distance(r[static_cast<std::size_t>(m + k)], r[static_cast<std::size_t>(m)]);
                EXPECT_LE(dist, bound + 1e-12);
                if (k == 1) EXPECT_NEAR(dist, bound, 1e-12);
            }
        }
    }
}
