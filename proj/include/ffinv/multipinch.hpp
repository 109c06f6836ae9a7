#ifndef FFINV_MULTIPINCH_HPP
#define FFINV_MULTIPINCH_HPP

#include <vector>

#include "ffinv/invariant.hpp"
#include "ffinv/system.hpp"

namespace ffinv {

/// Per-segment regularized contribution, transported to base coordinates:
/// sigma = sum_i J_i^T (tau^{i,i+1} + (ln|c_i|, -arg c_i)), with c_i the
/// segment-local value and J_i the base-to-segment chart Jacobian. The
/// branch of each segment's angular part threads through state.per_segment.
struct SigmaSum {
    JointTime tau;    // transported total return time, tau2 in [0, 2*pi)
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double err_estimate = 0.0;
};

SigmaSum sigma_sum_at(const SystemView& view, const RegularValue& c, SigmaThreadState& state);

/// Same sum with every section point A_i shifted by a joint-time offset in
/// its own chart units (offsets.size() == k). The sum telescopes, so it must
/// not move; the residual motion is the invariance diagnostic.
SigmaSum sigma_sum_with_offsets(const SystemView& view, const RegularValue& c,
                                const std::vector<JointTime>& offsets, SigmaThreadState& state);

struct MultipinchResult {
    std::vector<PeriodSample> samples; // cocycle-sum samples over the grid
    double max_offset_shift = 0.0;     // largest change of the sum under the offsets
};

/// Sample the summed 1-form over the grid and measure its invariance under
/// the supplied section offsets.
MultipinchResult multipinch_sigma_sum(const SystemView& view,
                                      const std::vector<JointTime>& offsets,
                                      const GridSpec& grid);

} // namespace ffinv

#endif
