#include "ffinv/monodromy.hpp"

#include <cmath>

#include "ffinv/errors.hpp"

namespace ffinv {

PeriodLatticeBasis period_lattice_basis(const SystemView& view, const RegularValue& c)
{
    PeriodLatticeBasis b;
    b.c = c;
    b.transversal = view.return_times(c);
    if (!(b.transversal.t1 > 0.0))
        throw NumericError("period_lattice_basis: transversal generator must have tau1 > 0");
    return b;
}

MonodromyResult monodromy_matrix(const SystemView& view, const MonodromyOptions& opts)
{
    if (!(opts.radius > 0.0))
        throw ValidationError("monodromy.radius: must be positive");
    if (opts.radius >= view.epsilon())
        throw ValidationError("monodromy.radius: loop must stay inside the base disc");
    if (opts.n_theta < 16)
        throw ValidationError("monodromy.n_theta: need at least 16 loop samples");
    const double rc = opts.center.modulus();
    if (rc + opts.radius >= view.epsilon())
        throw ValidationError("monodromy: loop leaves the base disc");
    if (rc > 0.0 && std::abs(rc - opts.radius) < 1e-6)
        throw ValidationError("monodromy: loop passes through the critical value");

    auto loop_value = [&](int i) {
        const double th = kTwoPi * i / opts.n_theta;
        return RegularValue(opts.center.c1 + opts.radius * std::cos(th),
                            opts.center.c2 + opts.radius * std::sin(th));
    };

    const JointTime start = view.return_times(loop_value(0));
    double prev = start.t2;
    JointTime end = start;
    for (int i = 1; i <= opts.n_theta; ++i) {
        const JointTime t = view.return_times(loop_value(i));
        // continuous unwrapping of the angular component along the loop
        const double unwrapped = t.t2 + kTwoPi * std::round((prev - t.t2) / kTwoPi);
        prev = unwrapped;
        end = {t.t1, unwrapped};
    }

    const double a = end.t1 / start.t1;
    const double b = (end.t2 - a * start.t2) / kTwoPi;
    const double dev = std::max(std::abs(a - std::round(a)), std::abs(b - std::round(b)));
    if (dev > 1e-6)
        throw NumericError("monodromy: non-integer holonomy (unwrapping failure)");

    MonodromyResult res;
    res.matrix = {{{static_cast<long>(std::llround(a)), static_cast<long>(std::llround(b))},
                   {0, 1}}};
    res.max_integer_deviation = dev;
    return res;
}

} // namespace ffinv
