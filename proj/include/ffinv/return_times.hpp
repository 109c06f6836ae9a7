#ifndef FFINV_RETURN_TIMES_HPP
#define FFINV_RETURN_TIMES_HPP

#include <vector>

#include "ffinv/integrate.hpp"
#include "ffinv/model.hpp"

namespace ffinv {

/// One chart passage of the numeric walker: the joint time spent in that
/// segment's chart, in local units, between consecutive gluing circles.
struct SegmentPass {
    int segment = 0;
    JointTime local;
};

struct NumericReturn {
    JointTime tau;                     // base first-return time, tau2 in [0, 2*pi)
    std::vector<SegmentPass> segments; // in traversal order, starting at segment 0
    double err_estimate = 0.0;         // conservation drift + event residuals
};

/// First-return time over base value c measured by event-located
/// integration: each chart passage is the numerically integrated outer part
/// plus the closed-form transit (ln eps^2 - ln conj(c), in local units)
/// through the focus chart between the |z2| and |z1| section orbits.
NumericReturn numeric_walk(const ModelFoliation& m, const RegularValue& c,
                           const IntegratorOptions& opts, double min_abs_c);

JointTime numeric_return_times(const ModelFoliation& m, const RegularValue& c,
                               const IntegratorOptions& opts, double min_abs_c);

/// Numeric counterpart of inner_transit_time: integrate the q1 flow from
/// (conj(c)/eps, eps) to the |z1| = eps orbit and close the phase.
JointTime numeric_inner_transit(double eps_section, const RegularValue& c,
                                const IntegratorOptions& opts);

} // namespace ffinv

#endif
