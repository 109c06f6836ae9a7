#ifndef FFINV_SYSTEM_HPP
#define FFINV_SYSTEM_HPP

#include "ffinv/integrate.hpp"
#include "ffinv/model.hpp"
#include "ffinv/return_times.hpp"

namespace ffinv {

/// Chart symplectomorphisms used by the invariance checks:
/// flip_q2 is (x, xi) -> (-x, -xi), sending (q1, q2) to (q1, -q2);
/// flip_q1 is (z1, z2) -> (-z2, z1), sending (q1, q2) to (-q1, q2).
enum class ChartFlip { none, flip_q1, flip_q2 };

/// A model plus the measurement configuration: which back end produces
/// return times, the integrator settings, and an optional chart flip.
struct SystemView {
    const ModelFoliation* model = nullptr;
    Backend backend = Backend::analytic;
    IntegratorOptions integrator;
    double min_abs_c = 0.0;
    ChartFlip flip = ChartFlip::none;

    /// Base value of the underlying (unflipped) chart for a value seen
    /// through the flipped chart; both flips are involutions.
    RegularValue unflipped_value(const RegularValue& c) const;

    /// First-return time at base value c, as measured through the chart.
    /// Composing the chart with either flip reverses the orientation of one
    /// flow, which turns the measured pair (t1, t2) into (t1, -t2 mod 2*pi)
    /// at the correspondingly flipped base value; this identity is exact for
    /// the model class and is applied here.
    JointTime return_times(const RegularValue& c) const;

    double epsilon() const { return model->epsilon(); }
    int pinch_count() const { return model->pinch_count(); }
};

} // namespace ffinv

#endif
