#ifndef FFINV_INTEGRATE_HPP
#define FFINV_INTEGRATE_HPP

#include <functional>
#include <vector>

#include "ffinv/phase.hpp"

namespace ffinv {

/// Fixed linear combination a*X_{q1} + b*X_{q2} of the chart Hamiltonian
/// fields. The coefficients are constant along a leaf, so every flow the
/// backend integrates is of this form.
struct LinearField {
    double a = 1.0;
    double b = 0.0;

    PhasePoint operator()(const PhasePoint& p) const
    {
        return {a * p.x - b * p.y, a * p.y + b * p.x,
                -a * p.xi - b * p.eta, -a * p.eta + b * p.xi};
    }
};

struct IntegratorOptions {
    double tol = 1e-10;        // both absolute and relative weight
    long max_steps = 200000;   // accepted + rejected steps per call
    double initial_step = 1e-3;
};

/// Adaptive trajectory: accepted nodes plus cubic Hermite data per step.
class Trajectory {
public:
    struct Node {
        double t;
        PhasePoint y;
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }
    const PhasePoint& endpoint() const { return nodes_.back().y; }

    /// Dense evaluation by cubic Hermite interpolation on the covering step.
    PhasePoint eval(double t) const;

    void append(double t, const PhasePoint& y, const PhasePoint& f);

private:
    std::vector<Node> nodes_;
    std::vector<PhasePoint> derivs_; // field value at each node
};

/// Embedded Dormand-Prince 5(4) pair with PI step-size control.
/// Integrates the field from p0 over a span of T (either sign).
Trajectory integrate_adaptive(const LinearField& field, const PhasePoint& p0, double T,
                              const IntegratorOptions& opts);

/// Scalar event function over phase points with a required crossing
/// direction (+1: increasing through zero, -1: decreasing).
struct EventSpec {
    std::function<double(const PhasePoint&)> g;
    int direction = +1;
};

struct EventHit {
    double t;
    PhasePoint p;
    Trajectory path; // trajectory up to the located crossing
};

/// First directional zero crossing of the event function along the flow of
/// the field from p0, within time horizon (forward). The crossing is
/// bracketed on dense output, then refined by hybrid secant/bisection with
/// re-integration, to |g| <= 1e-10 and time resolution 1e-12.
EventHit locate_event(const LinearField& field, const PhasePoint& p0, const EventSpec& event,
                      double horizon, const IntegratorOptions& opts);

} // namespace ffinv

#endif
