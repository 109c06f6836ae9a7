#include "ffinv/return_times.hpp"

#include <cmath>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

/// Section modulus for the focus-chart transit in one segment: around
/// sqrt(|c|) when possible, always safely below the exit boundary e^{S1} and
/// the entry orbit. The closed-form transit between the |z2| = r_u and
/// |z1| = r_u orbits is exact for either sign of the transit time, so no
/// lower bound on r_u^2 / |c| is needed.
double section_radius(double abs_local, double top)
{
    return std::min({1.4 * std::sqrt(abs_local), 0.9 * std::exp(top), 0.95});
}

} // namespace

NumericReturn numeric_walk(const ModelFoliation& m, const RegularValue& c,
                           const IntegratorOptions& opts, double min_abs_c)
{
    const double r = c.modulus();
    if (r == 0.0)
        throw ValidationError("numeric_return_times: c = 0 is not a regular value");
    if (r >= m.epsilon())
        throw ValidationError("numeric_return_times: |c| must be smaller than epsilon");
    if (r < min_abs_c)
        throw ValidationError("numeric_return_times: |c| below integrator.min_abs_c");

    const int k = m.pinch_count();
    NumericReturn out;
    out.segments.reserve(k);

    // enter segment 0 exactly on its entry edge
    PhasePoint p(std::complex<double>(c.c1, -c.c2), std::complex<double>(1.0, 0.0));
    int seg = 0;
    double base_t1 = 0.0;
    double err = 0.0;

    for (int pass = 0; pass < k; ++pass) {
        const RegularValue local = m.local_value(seg, c);
        const MapSlope j = m.chart_slope(seg, c);
        const LinearField field{1.0 / j.p, -j.q / j.p}; // base H1 flow in this chart
        auto [top, sg2] = m.segment_gradient(seg, local);
        (void)sg2;
        const double r_u = section_radius(local.modulus(), top);

        JointTime seg_local{0.0, 0.0};
        auto advance_leg = [&](const EventSpec& ev, double horizon) {
            EventHit hit = locate_event(field, p, ev, horizon, opts);
            // conservation drift along the leg
            const RegularValue q_end = momentum_map(hit.p);
            err = std::max(err, std::hypot(q_end.c1 - local.c1, q_end.c2 - local.c2));
            base_t1 += hit.t;
            seg_local.t1 += hit.t / j.p;
            seg_local.t2 += -(j.q / j.p) * hit.t;
            p = hit.p;
        };

        // outer leg down to the |z2| = r_u orbit (z2 shrinks along the flow)
        const double into = -std::log(r_u); // local-time estimate of the leg
        advance_leg({[r_u](const PhasePoint& q) { return std::log(std::abs(q.z2())) - std::log(r_u); },
                     -1},
                    j.p * (2.5 * into + 2.0));

        // closed-form transit through the focus chart to the |z1| = r_u orbit
        const double delta = std::log(r_u * r_u / local.modulus());
        p = normal_form_flow(p, {delta, -j.q * delta});
        base_t1 += j.p * delta;
        seg_local.t1 += delta;
        seg_local.t2 += -j.q * delta;

        // outer leg up to the exit boundary ln|z1| = S1(c_seg)
        const ModelFoliation* mp = &m;
        const int seg_now = seg;
        advance_leg({[mp, seg_now](const PhasePoint& q) {
                         const RegularValue lv = momentum_map(q);
                         return std::log(std::abs(q.z1())) - mp->segment_gradient(seg_now, lv).first;
                     },
                     +1},
                    j.p * (2.5 * (top - std::log(r_u) + 1.0) + 2.0));

        auto [nseg, pn] = glue_forward(m, seg, p, false);
        out.segments.push_back({seg, seg_local});
        seg = nseg;
        p = pn;
    }

    // close along the S^1 orbit back to the entry point's phase
    const double phase_entry = std::atan2(-c.c2, c.c1); // arg of conj(c)
    const double closing = wrap_angle(phase_entry - std::arg(p.z1()));
    out.segments.back().local.t2 += closing;

    double tau2 = 0.0;
    for (const auto& sp : out.segments) {
        const MapSlope j = m.chart_slope(sp.segment, c);
        tau2 += j.q * sp.local.t1 + sp.local.t2;
    }
    out.tau = {base_t1, wrap_angle(tau2)};
    out.err_estimate = err;
    return out;
}

JointTime numeric_return_times(const ModelFoliation& m, const RegularValue& c,
                               const IntegratorOptions& opts, double min_abs_c)
{
    return numeric_walk(m, c, opts, min_abs_c).tau;
}

JointTime numeric_inner_transit(double eps_section, const RegularValue& c,
                                const IntegratorOptions& opts)
{
    if (!(eps_section > 0.0))
        throw ValidationError("numeric_inner_transit: section modulus must be positive");
    const double r = c.modulus();
    if (r == 0.0 || r >= eps_section * eps_section)
        throw ValidationError("numeric_inner_transit: need 0 < |c| < eps^2");

    const PhasePoint b(std::complex<double>(c.c1, -c.c2) / eps_section,
                       std::complex<double>(eps_section, 0.0));
    const LinearField field{1.0, 0.0};
    const double expect = std::log(eps_section * eps_section / r);
    if (expect == 0.0)
        return {0.0, wrap_angle(-std::arg(b.z1()))}; // already on the far orbit

    EventHit hit = locate_event(
        field, b,
        {[eps_section](const PhasePoint& q) {
             return std::log(std::abs(q.z1())) - std::log(eps_section);
         },
         +1},
        2.5 * expect + 2.0, opts);
    return {hit.t, wrap_angle(-std::arg(hit.p.z1()))};
}

} // namespace ffinv
