#include "ffinv/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

using Vec4 = std::array<double, 4>;

Vec4 to_vec(const PhasePoint& p) { return {p.x, p.y, p.xi, p.eta}; }
PhasePoint to_point(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

Vec4 field_at(const LinearField& f, const Vec4& y)
{
    return to_vec(f(to_point(y)));
}

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// b(5th) - b(4th), used for the embedded error estimate
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

double error_norm(const Vec4& y0, const Vec4& f0, const Vec4& y1, double h, double tol,
                  const Vec4& k3, const Vec4& k4, const Vec4& k5, const Vec4& k6, const Vec4& k7)
{
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double e = h * (E1 * f0[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                              E7 * k7[i]);
        const double sc = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        acc += (e / sc) * (e / sc);
    }
    return std::sqrt(acc / 4.0);
}

} // namespace

void Trajectory::append(double t, const PhasePoint& y, const PhasePoint& f)
{
    nodes_.push_back({t, y});
    derivs_.push_back(f);
}

PhasePoint Trajectory::eval(double t) const
{
    if (nodes_.size() == 1)
        return nodes_.front().y;
    const bool fwd = nodes_.back().t >= nodes_.front().t;
    std::size_t lo = 0;
    for (std::size_t n = 0; n + 1 < nodes_.size(); ++n) {
        lo = n;
        const double b = nodes_[n + 1].t;
        if (fwd ? (t <= b) : (t >= b))
            break;
    }
    const double t0 = nodes_[lo].t, t1 = nodes_[lo + 1].t;
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    const auto& y0 = nodes_[lo].y;
    const auto& y1 = nodes_[lo + 1].y;
    const auto& f0 = derivs_[lo];
    const auto& f1 = derivs_[lo + 1];
    auto mix = [&](double a0, double d0, double a1, double d1) {
        return h00 * a0 + h10 * h * d0 + h01 * a1 + h11 * h * d1;
    };
    return {mix(y0.x, f0.x, y1.x, f1.x), mix(y0.y, f0.y, y1.y, f1.y),
            mix(y0.xi, f0.xi, y1.xi, f1.xi), mix(y0.eta, f0.eta, y1.eta, f1.eta)};
}

Trajectory integrate_adaptive(const LinearField& field, const PhasePoint& p0, double T,
                              const IntegratorOptions& opts)
{
    if (!(opts.tol >= 1e-13 && opts.tol <= 1e-3))
        throw ValidationError("integrator.tol: must lie in [1e-13, 1e-3]");

    Trajectory traj;
    Vec4 y = to_vec(p0);
    Vec4 f = field_at(field, y);
    traj.append(0.0, p0, to_point(f));
    if (T == 0.0)
        return traj;

    const double dir = T > 0.0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = dir * std::min(std::abs(T), opts.initial_step);
    double err_old = 1.0;
    long steps = 0;

    while (dir * (T - t) > 0.0) {
        if (++steps > opts.max_steps)
            throw NumericError("integrate_adaptive: step budget exceeded");
        if (dir * (t + h) > dir * T)
            h = T - t;

        // stages (recomputed here so the error norm sees them)
        auto stage = [&](std::initializer_list<std::pair<const Vec4*, double>> terms) {
            Vec4 out = y;
            for (auto& [k, w] : terms)
                for (int i = 0; i < 4; ++i)
                    out[i] += h * w * (*k)[i];
            return out;
        };
        const Vec4 k1 = f;
        const Vec4 k2 = field_at(field, stage({{&k1, A21}}));
        const Vec4 k3 = field_at(field, stage({{&k1, A31}, {&k2, A32}}));
        const Vec4 k4 = field_at(field, stage({{&k1, A41}, {&k2, A42}, {&k3, A43}}));
        const Vec4 k5 =
            field_at(field, stage({{&k1, A51}, {&k2, A52}, {&k3, A53}, {&k4, A54}}));
        const Vec4 k6 = field_at(
            field, stage({{&k1, A61}, {&k2, A62}, {&k3, A63}, {&k4, A64}, {&k5, A65}}));
        Vec4 y1;
        for (int i = 0; i < 4; ++i) {
            y1[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            if (!std::isfinite(y1[i]))
                throw NumericError("integrate_adaptive: non-finite state");
        }
        const Vec4 k7 = field_at(field, y1);
        const double err = error_norm(y, k1, y1, h, opts.tol, k3, k4, k5, k6, k7);

        if (err <= 1.0) {
            t += h;
            y = y1;
            f = k7; // FSAL
            traj.append(t, to_point(y), to_point(f));
            const double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.14) *
                               std::pow(err_old, 0.08);
            h *= std::clamp(fac, 0.2, 5.0);
            err_old = std::max(err, 1e-4);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return traj;
}

namespace {

bool directional_crossing(double ga, double gb, int direction)
{
    if (direction > 0)
        return ga < 0.0 && gb >= 0.0;
    return ga > 0.0 && gb <= 0.0;
}

} // namespace

EventHit locate_event(const LinearField& field, const PhasePoint& p0, const EventSpec& event,
                      double horizon, const IntegratorOptions& opts)
{
    if (!(horizon > 0.0))
        throw ValidationError("locate_event: horizon must be positive");
    if (!event.g)
        throw ValidationError("locate_event: empty event function");

    IntegratorOptions tight = opts;
    tight.tol = std::max(1e-13, std::min(opts.tol, 1e-12));

    PhasePoint yp = p0;
    const PhasePoint fp = field(yp);
    double t = 0.0;
    double h = std::min(horizon, opts.initial_step);
    long steps = 0;

    Trajectory traj;
    traj.append(0.0, yp, fp);

    while (t < horizon) {
        if (++steps > opts.max_steps)
            throw NumericError("locate_event: no crossing (step budget exceeded)");
        if (t + h > horizon)
            h = horizon - t;

        Trajectory one = integrate_adaptive(field, yp, h, opts);
        // single adaptive sweep over [t, t+h]; scan its nodes densely
        const auto& nodes = one.nodes();
        for (std::size_t n = 0; n + 1 < nodes.size(); ++n) {
            const double ta = nodes[n].t, tb = nodes[n + 1].t;
            constexpr int kSub = 8;
            double prev_t = ta;
            double prev_g = event.g(one.eval(ta));
            for (int s = 1; s <= kSub; ++s) {
                const double ts = ta + (tb - ta) * s / kSub;
                const double gs = event.g(one.eval(ts));
                if (directional_crossing(prev_g, gs, event.direction)) {
                    // refine on [prev_t, ts] against the true flow from the
                    // accepted node at ta
                    const PhasePoint base = nodes[n].y;
                    auto G = [&](double theta) {
                        Trajectory seg = integrate_adaptive(field, base, theta - ta, tight);
                        return std::pair<double, PhasePoint>(event.g(seg.endpoint()),
                                                             seg.endpoint());
                    };
                    double lo = prev_t, hi = ts;
                    auto [glo, plo] = G(lo);
                    auto [ghi, phi_] = G(hi);
                    (void)plo;
                    // the dense scan can be slightly off; widen to the step
                    // bounds, whose states are exact
                    if (!directional_crossing(glo, ghi, event.direction)) {
                        hi = tb;
                        std::tie(ghi, phi_) = G(hi);
                        if (!directional_crossing(glo, ghi, event.direction)) {
                            lo = ta;
                            std::tie(glo, plo) = G(lo);
                            if (!directional_crossing(glo, ghi, event.direction))
                                continue;
                        }
                    }
                    double best_t = hi;
                    PhasePoint best_p = phi_;
                    double best_g = ghi;
                    for (int it = 0; it < 90; ++it) {
                        double cand;
                        if (std::abs(ghi - glo) > 0.0) {
                            cand = hi - ghi * (hi - lo) / (ghi - glo);
                            if (!(cand > lo && cand < hi))
                                cand = 0.5 * (lo + hi);
                        } else {
                            cand = 0.5 * (lo + hi);
                        }
                        auto [gc, pc] = G(cand);
                        if (std::abs(gc) < std::abs(best_g)) {
                            best_g = gc;
                            best_p = pc;
                            best_t = cand;
                        }
                        const bool left = directional_crossing(glo, gc, event.direction);
                        if (left) {
                            hi = cand;
                            ghi = gc;
                        } else {
                            lo = cand;
                            glo = gc;
                        }
                        if (hi - lo <= 1e-13 * std::max(1.0, std::abs(hi)) &&
                            std::abs(best_g) <= 1e-10)
                            break;
                    }
                    if (std::abs(best_g) > 1e-10)
                        throw NumericError("locate_event: refinement stalled above tolerance");
                    // assemble the path up to the crossing
                    EventHit hit;
                    hit.t = t + best_t;
                    hit.p = best_p;
                    hit.path = traj;
                    for (std::size_t mth = 1; mth < nodes.size() && nodes[mth].t <= best_t; ++mth)
                        hit.path.append(t + nodes[mth].t, nodes[mth].y, field(nodes[mth].y));
                    hit.path.append(hit.t, best_p, field(best_p));
                    return hit;
                }
                prev_t = ts;
                prev_g = gs;
            }
        }
        for (std::size_t n = 1; n < nodes.size(); ++n)
            traj.append(t + nodes[n].t, nodes[n].y, field(nodes[n].y));
        t += h;
        yp = one.endpoint();
        // widen the sweep window as long as nothing fires
        if (t >= horizon)
            break;
        h = std::min(horizon - t, h * 4.0);
    }
    throw NumericError("locate_event: no crossing within the horizon");
}

} // namespace ffinv
