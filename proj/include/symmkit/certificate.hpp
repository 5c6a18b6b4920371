#pragma once

// Divergence certificates for processes driven by angles with
// sum alpha = inf and sum alpha^2 < inf (or by an oscillation between two
// lines). The run itself never proves divergence: the verdict rests on a
// conserved functional that is too small for any ball containing the
// segments the process is forced to keep.
//
// Steiner/fiber: K_{m-1} projects onto H_m in a segment of length l_m and
// l_{m+1} >= l_m cos alpha_{m+1}, so every K_m holds a segment of length
// >= gamma. A limit would be a ball (directions are dense, or the two
// limit lines meet at an irrational angle), of area >= pi (gamma/2)^2,
// but area is preserved.
// Minkowski: the same segments, with mean width (preserved) in place of
// area and threshold gamma.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "symmkit/process.hpp"
#include "symmkit/sequences.hpp"

namespace symmkit {

struct OscillationWitness {
    double low = 0.0, high = 0.0;   // the two line angles
    std::vector<int> low_hits, high_hits;  // steps at which each is hit exactly
};

struct DivergenceCertificate {
    GammaBound gamma;
    std::vector<double> ell;        // l_m = width of K_{m-1} along H_m, m = k..
    std::vector<double> ell_bound;  // L_m = L_{m-1} cos alpha_m, seeded with l_k
    double ell_liminf = 0.0;        // min of l_m over the trailing half
    std::string conserved_name;
    double conserved_value = 0.0;   // max over the trace
    double threshold = 0.0;
    bool dense_directions = false;
    std::optional<WrapWitness> wrap;
    std::optional<OscillationWitness> oscillation;
    double lower_gate = 2.0 / std::numbers::pi;  // mean width of a unit segment
    bool lower_gate_ok = true;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> reasons;  // why the verdict is not divergent
    ProcessTrace trace;
};

/// `a` must generate spec.sequence (checked against the run's steps).
/// `eps` is the relative slack on liminf l_m >= gamma (1 - eps).
inline DivergenceCertificate divergence_certificate(const Body& body, const AngleSequence& a, const ProcessSpec& spec,
                                                    double eps = 0.05, std::int64_t gamma_terms = 1'000'000) {
    DivergenceCertificate c;
    const bool osc = a.kind == SequenceKind::oscillating;
    if (!osc && !(a.sum_diverges() && a.square_summable()))
        c.reasons.push_back("precondition: needs sum alpha = inf and sum alpha^2 < inf, or an oscillating sequence (" +
                            a.describe() + ")");

    // The supplied sequence must be the one generated by `a`.
    const int last = spec.start_index + spec.max_steps - 1;
    if (a.kind != SequenceKind::random_lines) {
        const auto ref = generate_sequence(a, std::min(last, spec.sequence.size()), spec.sequence.orientation);
        for (int m = 1; m <= ref.size(); ++m)
            if (std::abs(ref.alpha[static_cast<std::size_t>(m)] - spec.sequence.alpha[static_cast<std::size_t>(m)]) > 1e-12) {
                c.reasons.push_back("sequence mismatch at step " + std::to_string(m));
                break;
            }
    }

    c.gamma = gamma_product(a, std::max<std::int64_t>(gamma_terms, last));
    if (!(c.gamma.lower_bound > 0)) c.reasons.push_back("no positive lower bound for gamma");

    double bound = std::nan("");
    c.trace = run_process(body, spec, [&](int m, const Body& before, const Body&) {
        const double l = projection_width(before, spec.sequence.line_angle(m));
        c.ell.push_back(l);
        bound = std::isnan(bound) ? l : bound * std::cos(spec.sequence.alpha[static_cast<std::size_t>(m)]);
        c.ell_bound.push_back(bound);
    });

    const std::size_t half = c.ell.size() / 2;
    c.ell_liminf = INFINITY;
    for (std::size_t i = half; i < c.ell.size(); ++i) c.ell_liminf = std::min(c.ell_liminf, c.ell[i]);
    if (!(c.ell_liminf >= c.gamma.lower_bound * (1 - eps)))
        c.reasons.push_back("liminf l_m = " + format_real(c.ell_liminf) + " below gamma (1 - eps) = " +
                            format_real(c.gamma.lower_bound * (1 - eps)));
    for (std::size_t i = 0; i < c.ell.size(); ++i)
        if (c.ell[i] < c.ell_bound[i] * (1 - eps)) {
            c.reasons.push_back("l_m fell below the analytic bound at step " + std::to_string(spec.start_index + static_cast<int>(i)));
            break;
        }

    c.conserved_value = 0.0;
    if (spec.op == OperatorKind::minkowski) {
        c.conserved_name = "mean width";
        for (const auto& r : c.trace.records) c.conserved_value = std::max(c.conserved_value, r.mean_width);
        c.threshold = c.gamma.lower_bound;
        c.lower_gate_ok = c.trace.records.front().mean_width > c.lower_gate;
    } else {
        c.conserved_name = "area";
        for (const auto& r : c.trace.records) c.conserved_value = std::max(c.conserved_value, r.area);
        c.threshold = std::numbers::pi * std::pow(c.gamma.lower_bound / 2, 2);
    }
    if (!(c.conserved_value < c.threshold))
        c.reasons.push_back(c.conserved_name + " " + format_real(c.conserved_value) + " not below threshold " +
                            format_real(c.threshold));

    if (osc) {
        OscillationWitness w{0.0, a.endpoint, {}, {}};
        for (int m = spec.start_index; m <= last; ++m) {
            const double b = spec.sequence.beta[static_cast<std::size_t>(m)];
            if (b == w.low) w.low_hits.push_back(m);
            if (b == w.high) w.high_hits.push_back(m);
        }
        if (w.low_hits.size() < 2 || w.high_hits.size() < 2)
            c.reasons.push_back("oscillation: each endpoint must be reached at least twice within the run");
        c.dense_directions = false;
        c.oscillation = w;
    } else {
        c.wrap = wrap_witness(a);
        c.dense_directions = c.wrap.has_value();
        if (!c.wrap) c.reasons.push_back("no witness that the partial sums of alpha exceed 4 pi");
    }

    c.verdict = c.reasons.empty() ? Verdict::divergent : Verdict::inconclusive;
    return c;
}

}  // namespace symmkit
