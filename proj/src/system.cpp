#include "ffinv/system.hpp"

#include "ffinv/errors.hpp"

namespace ffinv {

RegularValue SystemView::unflipped_value(const RegularValue& c) const
{
    switch (flip) {
    case ChartFlip::none:
        return c;
    case ChartFlip::flip_q2:
        return {c.c1, -c.c2};
    case ChartFlip::flip_q1:
        return {-c.c1, c.c2};
    }
    return c;
}

JointTime SystemView::return_times(const RegularValue& c) const
{
    if (!model)
        throw ValidationError("SystemView: no model attached");
    const RegularValue cu = unflipped_value(c);
    JointTime tau;
    if (backend == Backend::analytic)
        tau = analytic_return_times(*model, cu);
    else
        tau = numeric_return_times(*model, cu, integrator, min_abs_c);
    if (flip == ChartFlip::none)
        return tau;
    return {tau.t1, wrap_angle(-tau.t2)};
}

} // namespace ffinv
