#include "ffinv/multipinch.hpp"

#include <cmath>
#include <string>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

struct SegmentData {
    RegularValue local;
    JointTime time;   // segment traverse time in local units, t2 in [0, 2*pi)
    MapSlope chart;   // base -> segment Jacobian at the base value
};

std::vector<SegmentData> analytic_segments(const ModelFoliation& m, const RegularValue& c)
{
    std::vector<SegmentData> out;
    out.reserve(m.pinch_count());
    for (int i = 0; i < m.pinch_count(); ++i) {
        SegmentData d;
        d.local = m.local_value(i, c);
        if (d.local.modulus() == 0.0)
            throw ValidationError("multipinch: c maps to a critical value in segment " +
                                  std::to_string(i));
        auto [s1, s2] = m.segment_gradient(i, d.local);
        d.time = {s1 - std::log(d.local.modulus()), wrap_angle(s2 + d.local.argument())};
        d.chart = m.chart_slope(i, c);
        out.push_back(d);
    }
    return out;
}

SigmaSum assemble(const std::vector<SegmentData>& segs, SigmaThreadState& state)
{
    SigmaSum sum;
    double tau2 = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& d = segs[i];
        const double seg_sigma1 = d.time.t1 + std::log(d.local.modulus());
        const double seg_sigma2 = state.per_segment[i].pick(d.time.t2 - d.local.argument());
        sum.sigma1 += d.chart.p * seg_sigma1;
        sum.sigma2 += d.chart.q * seg_sigma1 + seg_sigma2;
        sum.tau.t1 += d.chart.p * d.time.t1;
        tau2 += d.chart.q * d.time.t1 + d.time.t2;
    }
    sum.tau.t2 = wrap_angle(tau2);
    return sum;
}

} // namespace

SigmaSum sigma_sum_at(const SystemView& view, const RegularValue& c, SigmaThreadState& state)
{
    const ModelFoliation& m = *view.model;
    if (m.pinch_count() < 2)
        throw ValidationError("multipinch: model has a single pinch; use the plain pipeline");
    if (view.flip != ChartFlip::none)
        throw ValidationError("multipinch: cocycle sum does not support chart flips");
    if (state.per_segment.size() != static_cast<std::size_t>(m.pinch_count()))
        state.per_segment.resize(m.pinch_count());
    if (c.modulus() == 0.0 || c.modulus() >= m.epsilon())
        throw ValidationError("multipinch: need 0 < |c| < epsilon");

    if (view.backend == Backend::analytic)
        return assemble(analytic_segments(m, c), state);

    const NumericReturn nr = numeric_walk(m, c, view.integrator, view.min_abs_c);
    std::vector<SegmentData> segs;
    segs.reserve(nr.segments.size());
    for (const auto& sp : nr.segments) {
        SegmentData d;
        d.local = m.local_value(sp.segment, c);
        d.time = sp.local; // real-valued path times; no wrap applied
        d.chart = m.chart_slope(sp.segment, c);
        segs.push_back(d);
    }
    SigmaSum sum = assemble(segs, state);
    sum.err_estimate = nr.err_estimate;
    return sum;
}

SigmaSum sigma_sum_with_offsets(const SystemView& view, const RegularValue& c,
                                const std::vector<JointTime>& offsets, SigmaThreadState& state)
{
    const ModelFoliation& m = *view.model;
    if (m.pinch_count() < 2)
        throw ValidationError("multipinch: model has a single pinch");
    if (view.backend != Backend::analytic)
        throw ValidationError("multipinch: section offsets are evaluated in closed form; "
                              "use the analytic backend");
    if (offsets.size() != static_cast<std::size_t>(m.pinch_count()))
        throw ValidationError("multipinch: need one section offset per pinch");
    if (state.per_segment.size() != static_cast<std::size_t>(m.pinch_count()))
        state.per_segment.resize(m.pinch_count());

    std::vector<SegmentData> segs = analytic_segments(m, c);
    const int k = m.pinch_count();
    for (int i = 0; i < k; ++i) {
        const double height = segs[i].time.t1;
        if (offsets[i].t1 < -m.collar_margin() || offsets[i].t1 >= height)
            throw ValidationError("multipinch: section offset pushes A_" + std::to_string(i) +
                                  " out of its segment domain");
    }
    for (int i = 0; i < k; ++i) {
        // entering later by offsets[i], leaving later by the next section's
        // offset converted into this chart's time units
        const MapSlope g = m.gluing_slope(i, segs[i].local);
        const JointTime next = offsets[(i + 1) % k];
        const JointTime next_here{g.p * next.t1, g.q * next.t1 + next.t2};
        segs[i].time = segs[i].time - offsets[i] + next_here;
    }
    return assemble(segs, state);
}

MultipinchResult multipinch_sigma_sum(const SystemView& view,
                                      const std::vector<JointTime>& offsets, const GridSpec& grid)
{
    if (view.pinch_count() < 2)
        throw ValidationError("multipinch: model has a single pinch");
    if (!(grid.r_min > 0.0) || !(grid.r_min < grid.r_max) || !(grid.r_max < view.epsilon()))
        throw ValidationError("grid: need 0 < r_min < r_max < epsilon");

    MultipinchResult res;
    SigmaThreadState plain, shifted;
    plain.per_segment.resize(view.pinch_count());
    shifted.per_segment.resize(view.pinch_count());
    SigmaThreadState plain_anchor = plain, shifted_anchor = shifted;

    for (int ir = 0; ir < grid.n_r; ++ir) {
        const double r = grid.r_min + (grid.r_max - grid.r_min) * ir / (grid.n_r - 1);
        for (int it = 0; it < grid.n_theta; ++it) {
            if (it == 0 && ir > 0) {
                plain = plain_anchor;
                shifted = shifted_anchor;
            }
            const double th = kTwoPi * it / grid.n_theta;
            const RegularValue c(r * std::cos(th), r * std::sin(th));

            const SigmaSum base = sigma_sum_at(view, c, plain);
            PeriodSample s;
            s.c = c;
            s.tau = base.tau;
            s.sigma1 = base.sigma1;
            s.sigma2 = base.sigma2;
            s.source = view.backend == Backend::analytic ? SampleSource::analytic
                                                         : SampleSource::numeric;
            s.err_estimate = base.err_estimate;
            res.samples.push_back(s);

            if (view.backend == Backend::analytic) {
                const SigmaSum moved = sigma_sum_with_offsets(view, c, offsets, shifted);
                const double d1 = std::abs(moved.sigma1 - base.sigma1);
                const double d2 = std::abs(std::remainder(moved.sigma2 - base.sigma2, kTwoPi));
                res.max_offset_shift = std::max({res.max_offset_shift, d1, d2});
            }

            if (it == 0) {
                plain_anchor = plain;
                shifted_anchor = shifted;
            }
        }
    }
    return res;
}

} // namespace ffinv
