#include "ffinv/model.hpp"

#include <cmath>
#include <string>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

double principal_angle(double a)
{
    return std::remainder(a, kTwoPi); // (-pi, pi]
}

JointTime convert_forward(const MapSlope& s, const JointTime& t)
{
    // chart-i joint time -> chart-(i+1) joint time across a gluing whose
    // value map has Jacobian [[p, q], [0, 1]]
    return {t.t1 / s.p, -(s.q / s.p) * t.t1 + t.t2};
}

JointTime convert_backward(const MapSlope& s, const JointTime& t)
{
    return {s.p * t.t1, s.q * t.t1 + t.t2};
}

double newton_first_component(const Poly2& f, const Poly2& f_du1, double target, double c2,
                              const char* what)
{
    double u = target; // the maps are near the identity on the base disc
    for (int it = 0; it < 100; ++it) {
        const double r = f.eval({u, c2}) - target;
        if (std::abs(r) <= 1e-14 * std::max(1.0, std::abs(target)))
            return u;
        const double d = f_du1.eval({u, c2});
        if (d <= 0.0 || !std::isfinite(d))
            throw NumericError(std::string(what) + ": value-map inversion lost monotonicity");
        u -= r / d;
    }
    throw NumericError(std::string(what) + ": value-map inversion did not converge");
}

} // namespace

std::pair<double, double> ModelFoliation::segment_gradient(int segment, const RegularValue& local) const
{
    if (segment == pinch_count_ - 1)
        return {s_dx_.eval(local), s_dy_.eval(local)};
    return {0.0, 0.0};
}

RegularValue ModelFoliation::local_value(int segment, const RegularValue& base) const
{
    if (segment == 0)
        return base;
    return {chart_[segment].eval(base), base.c2};
}

RegularValue ModelFoliation::base_value(int segment, const RegularValue& local) const
{
    if (segment == 0)
        return local;
    const double u1 = newton_first_component(chart_[segment], chart_du1_[segment], local.c1,
                                             local.c2, "base_value");
    return {u1, local.c2};
}

MapSlope ModelFoliation::chart_slope(int segment, const RegularValue& base) const
{
    if (segment == 0)
        return {1.0, 0.0};
    return {chart_du1_[segment].eval(base), chart_du2_[segment].eval(base)};
}

MapSlope ModelFoliation::gluing_slope(int segment, const RegularValue& local) const
{
    if (segment < pinch_count_ - 1) {
        auto [hx, hy] = transitions_[segment].h.partials();
        return {1.0 + hx.eval(local), hy.eval(local)};
    }
    // closing gluing: the value map is the inverse of the full composition
    if (pinch_count_ == 1)
        return {1.0, 0.0};
    const RegularValue base = base_value(segment, local);
    const MapSlope j = chart_slope(segment, base);
    return {1.0 / j.p, -j.q / j.p};
}

RegularValue ModelFoliation::next_local_value(int segment, const RegularValue& local) const
{
    if (segment < pinch_count_ - 1)
        return {local.c1 + transitions_[segment].h.eval(local), local.c2};
    return base_value(segment, local);
}

RegularValue ModelFoliation::prev_local_value(int segment, const RegularValue& next_local) const
{
    if (segment < pinch_count_ - 1) {
        const Poly2 g = poly_X().plus(transitions_[segment].h.to_poly());
        const double c1 = newton_first_component(g, g.dx(), next_local.c1, next_local.c2,
                                                 "prev_local_value");
        return {c1, next_local.c2};
    }
    return local_value(segment, next_local);
}

TruncatedSeries2 ModelFoliation::composed_total_series() const
{
    const Poly2 composed = invariant_.to_poly().compose(chart_[pinch_count_ - 1], poly_Y());
    return drop_constant(composed);
}

ModelFoliation build_model(const TruncatedSeries2& invariant, double epsilon, int pinch_count,
                           const std::vector<TransitionSeries>& transitions, double collar_margin,
                           Backend backend)
{
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw ValidationError("model.epsilon: must lie in (0, 1)");
    if (pinch_count < 1)
        throw ValidationError("model.k: must be >= 1");
    if (static_cast<int>(transitions.size()) != pinch_count - 1)
        throw ValidationError("model.transitions: expected k - 1 = " +
                              std::to_string(pinch_count - 1) + " entries, got " +
                              std::to_string(transitions.size()));
    if (!(collar_margin > 0.0))
        throw ValidationError("model.collar_margin: must be positive");

    // Positivity of dG1/dc1 on (a slight enlargement of) the base disc,
    // bounded through the coefficient sums.
    const double r = 1.2 * epsilon;
    for (std::size_t n = 0; n < transitions.size(); ++n) {
        const auto& h = transitions[n].h;
        double lo = 1.0 + h.at(1, 0);
        if (!(lo > 0.0))
            throw ValidationError("model.transitions[" + std::to_string(n) +
                                  "]: 1 + s10 must be positive");
        for (auto [i, j] : TruncatedSeries2::exponents(h.degree())) {
            if (i == 1 && j == 0)
                continue;
            if (i >= 1)
                lo -= static_cast<double>(i) * std::abs(h.at(i, j)) * std::pow(r, i + j - 1);
        }
        if (!(lo > 0.0))
            throw ValidationError("model.transitions[" + std::to_string(n) +
                                  "]: dG1/dc1 may vanish on the base disc");
    }

    ModelFoliation m;
    m.invariant_ = invariant;
    m.epsilon_ = epsilon;
    m.pinch_count_ = pinch_count;
    m.transitions_ = transitions;
    m.collar_margin_ = collar_margin;
    m.default_backend_ = backend;

    auto [sdx, sdy] = invariant.partials();
    m.s_dx_ = sdx;
    m.s_dy_ = sdy;

    m.chart_.resize(pinch_count);
    m.chart_du1_.resize(pinch_count);
    m.chart_du2_.resize(pinch_count);
    m.chart_[0] = poly_X();
    for (int i = 1; i < pinch_count; ++i) {
        const Poly2& prev = m.chart_[i - 1];
        m.chart_[i] = prev.plus(transitions[i - 1].h.to_poly().compose(prev, poly_Y())).trimmed();
    }
    for (int i = 0; i < pinch_count; ++i) {
        m.chart_du1_[i] = m.chart_[i].dx();
        m.chart_du2_[i] = m.chart_[i].dy();
    }
    return m;
}

std::pair<PhasePoint, PhasePoint> section_points(const ModelFoliation& m, const RegularValue& c,
                                                 int segment)
{
    if (segment < 0 || segment >= m.pinch_count())
        throw ValidationError("section_points: segment index out of range");
    const double r = c.modulus();
    if (r == 0.0)
        throw ValidationError("section_points: c = 0 (sections live over regular values)");
    if (r >= m.epsilon())
        throw ValidationError("section_points: |c| must be smaller than epsilon");

    const PhasePoint entry(std::complex<double>(c.c1, -c.c2), std::complex<double>(1.0, 0.0));
    auto [s1, s2] = m.segment_gradient(segment, c);
    const std::complex<double> rot(std::cos(s2), std::sin(s2));
    const PhasePoint exit(std::exp(s1) * rot, c.as_complex() * rot / std::exp(s1));
    return {entry, exit};
}

std::pair<int, PhasePoint> glue_forward(const ModelFoliation& m, int segment, const PhasePoint& p,
                                        bool validate_collar)
{
    const int next = (segment + 1) % m.pinch_count();
    const RegularValue local = momentum_map(p);

    if (local.modulus() == 0.0) {
        // singular leaf: exit along the unstable branch (z2 = 0)
        if (std::abs(p.z1()) == 0.0)
            throw ValidationError("glue_forward: stable-branch point cannot exit");
        auto [s1, s2] = m.segment_gradient(segment, {0.0, 0.0});
        const JointTime t(std::log(std::abs(p.z1())) - s1, principal_angle(std::arg(p.z1()) - s2));
        if (validate_collar && std::abs(t.t1) > m.collar_margin())
            throw ValidationError("glue_forward: point outside the gluing collar");
        const JointTime tn = convert_forward(m.gluing_slope(segment, {0.0, 0.0}), t);
        const std::complex<double> z2 =
            std::exp(-tn.t1) * std::complex<double>(std::cos(tn.t2), std::sin(tn.t2));
        return {next, PhasePoint(std::complex<double>(0.0, 0.0), z2)};
    }

    auto [s1, s2] = m.segment_gradient(segment, local);
    const std::complex<double> exit_z1 =
        std::exp(s1) * std::complex<double>(std::cos(s2), std::sin(s2));
    const std::complex<double> w = p.z1() / exit_z1;
    const JointTime t(std::log(std::abs(w)), std::arg(w));
    if (validate_collar && std::abs(t.t1) > m.collar_margin())
        throw ValidationError("glue_forward: point outside the gluing collar");

    const RegularValue next_local = m.next_local_value(segment, local);
    const JointTime tn = convert_forward(m.gluing_slope(segment, local), t);
    const PhasePoint entry(std::complex<double>(next_local.c1, -next_local.c2),
                           std::complex<double>(1.0, 0.0));
    return {next, normal_form_flow(entry, tn)};
}

PhasePoint glue_map(const ModelFoliation& m, int segment, const PhasePoint& p)
{
    if (segment < 0 || segment >= m.pinch_count())
        throw ValidationError("glue_map: segment index out of range");
    const RegularValue next_local = momentum_map(p);

    if (next_local.modulus() == 0.0) {
        // singular leaf: entry-side points live on the stable branch (z1 = 0)
        if (std::abs(p.z2()) == 0.0)
            throw ValidationError("glue_map: unstable-branch point is not an entry representation");
        const JointTime tn(-std::log(std::abs(p.z2())), principal_angle(std::arg(p.z2())));
        if (std::abs(tn.t1) > m.collar_margin())
            throw ValidationError("glue_map: point outside the gluing collar");
        const JointTime t = convert_backward(m.gluing_slope(segment, {0.0, 0.0}), tn);
        auto [s1, s2] = m.segment_gradient(segment, {0.0, 0.0});
        const std::complex<double> z1 =
            std::exp(s1 + t.t1) *
            std::complex<double>(std::cos(s2 + t.t2), std::sin(s2 + t.t2));
        return {z1, std::complex<double>(0.0, 0.0)};
    }

    const std::complex<double> entry_z1(next_local.c1, -next_local.c2);
    const std::complex<double> w = p.z1() / entry_z1;
    const JointTime tn(std::log(std::abs(w)), std::arg(w));
    if (std::abs(tn.t1) > m.collar_margin())
        throw ValidationError("glue_map: point outside the gluing collar");

    const RegularValue local = m.prev_local_value(segment, next_local);
    const JointTime t = convert_backward(m.gluing_slope(segment, local), tn);
    auto [s1, s2] = m.segment_gradient(segment, local);
    const std::complex<double> rot(std::cos(s2), std::sin(s2));
    const PhasePoint exit(std::exp(s1) * rot, local.as_complex() * rot / std::exp(s1));
    return normal_form_flow(exit, t);
}

JointTime analytic_return_times(const ModelFoliation& m, const RegularValue& c)
{
    const double r = c.modulus();
    if (r == 0.0)
        throw ValidationError("analytic_return_times: c = 0 is not a regular value");
    if (r >= m.epsilon())
        throw ValidationError("analytic_return_times: |c| must be smaller than epsilon");

    double tau1 = 0.0, tau2 = 0.0;
    for (int i = 0; i < m.pinch_count(); ++i) {
        const RegularValue local = m.local_value(i, c);
        auto [s1, s2] = m.segment_gradient(i, local);
        const JointTime seg(s1 - std::log(local.modulus()), s2 + local.argument());
        const MapSlope j = m.chart_slope(i, c);
        tau1 += j.p * seg.t1;
        tau2 += j.q * seg.t1 + seg.t2;
    }
    return {tau1, wrap_angle(tau2)};
}

JointTime inner_transit_time(double eps_section, const RegularValue& c)
{
    if (!(eps_section > 0.0))
        throw ValidationError("inner_transit_time: section modulus must be positive");
    const double r = c.modulus();
    if (r == 0.0)
        throw ValidationError("inner_transit_time: c = 0 never reaches the far section");
    return {2.0 * std::log(eps_section) - std::log(r), c.argument()};
}

bool in_fundamental_domain(const ModelFoliation& m, const ModelPoint& mp, double slack)
{
    if (mp.segment < 0 || mp.segment >= m.pinch_count())
        return false;
    const PhasePoint& p = mp.point;
    const RegularValue local = momentum_map(p);
    if (local.modulus() >= m.epsilon())
        return false;
    if (local.modulus() == 0.0) {
        const double a1 = std::abs(p.z1()), a2 = std::abs(p.z2());
        if (a1 == 0.0 && a2 == 0.0)
            return true; // the pinch point itself
        if (a1 == 0.0)
            return a2 <= 1.0 + slack; // stable branch, entered at |z2| = 1
        if (a2 == 0.0) {
            auto [s1, s2] = m.segment_gradient(mp.segment, {0.0, 0.0});
            (void)s2;
            return std::log(a1) < s1 + slack;
        }
        return false;
    }
    const double lz1 = std::log(std::abs(p.z1()));
    auto [s1, s2] = m.segment_gradient(mp.segment, local);
    (void)s2;
    return lz1 >= std::log(local.modulus()) - slack && lz1 < s1 + slack;
}

ModelPoint model_flow(const ModelFoliation& m, const ModelPoint& start, const JointTime& t)
{
    if (!in_fundamental_domain(m, start, 1e-9))
        throw ValidationError("model_flow: start point outside its fundamental domain");
    const RegularValue base0 = momentum_map(start.point).modulus() == 0.0
                                   ? RegularValue{0.0, 0.0}
                                   : m.base_value(start.segment, momentum_map(start.point));
    if (base0.modulus() >= m.epsilon())
        throw ValidationError("model_flow: leaf lies outside the base disc");

    ModelPoint cur = start;
    JointTime rem = t;
    const int k = m.pinch_count();

    for (int iter = 0; iter < 100000; ++iter) {
        const PhasePoint& p = cur.point;
        const RegularValue local = momentum_map(p);
        const bool singular = local.modulus() == 0.0;
        const RegularValue base = singular ? RegularValue{0.0, 0.0}
                                           : m.base_value(cur.segment, local);
        const MapSlope j = m.chart_slope(cur.segment, base);
        const JointTime s(rem.t1 / j.p, -(j.q / j.p) * rem.t1 + rem.t2);

        if (singular) {
            const double a1 = std::abs(p.z1()), a2 = std::abs(p.z2());
            if (a1 == 0.0 && a2 == 0.0)
                return cur; // fixed point
            if (a2 == 0.0) { // unstable branch, may exit upward
                auto [top, g2] = m.segment_gradient(cur.segment, {0.0, 0.0});
                (void)g2;
                const double lz1 = std::log(a1);
                if (s.t1 > 0.0 && lz1 + s.t1 >= top) {
                    const double lam = (top - lz1) / s.t1;
                    const PhasePoint pb = normal_form_flow(p, s * lam);
                    auto [nseg, pn] = glue_forward(m, cur.segment, pb, false);
                    cur = {nseg, pn};
                    rem = rem * (1.0 - lam);
                    continue;
                }
            } else if (a1 == 0.0) { // stable branch, may exit downward
                const double lz2 = std::log(a2);
                if (s.t1 < 0.0 && lz2 - s.t1 > 0.0) {
                    const double lam = lz2 / s.t1; // both nonpositive
                    const PhasePoint pb = normal_form_flow(p, s * lam);
                    const int jseg = (cur.segment - 1 + k) % k;
                    cur = {jseg, glue_map(m, jseg, pb)};
                    rem = rem * (1.0 - lam);
                    continue;
                }
            }
            cur.point = normal_form_flow(p, s);
            return cur;
        }

        const double lz1 = std::log(std::abs(p.z1()));
        const double bottom = std::log(local.modulus());
        auto [top, g2] = m.segment_gradient(cur.segment, local);
        (void)g2;
        if (s.t1 > 0.0 && lz1 + s.t1 >= top) {
            const double lam = (top - lz1) / s.t1;
            const PhasePoint pb = normal_form_flow(p, s * lam);
            auto [nseg, pn] = glue_forward(m, cur.segment, pb, false);
            cur = {nseg, pn};
            rem = rem * (1.0 - lam);
            continue;
        }
        if (s.t1 < 0.0 && lz1 + s.t1 < bottom) {
            const double lam = (bottom - lz1) / s.t1;
            const PhasePoint pb = normal_form_flow(p, s * lam);
            const int jseg = (cur.segment - 1 + k) % k;
            cur = {jseg, glue_map(m, jseg, pb)};
            rem = rem * (1.0 - lam);
            continue;
        }
        cur.point = normal_form_flow(p, s);
        return cur;
    }
    throw NumericError("model_flow: gluing wrap budget exceeded");
}

} // namespace ffinv
