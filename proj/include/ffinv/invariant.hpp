#ifndef FFINV_INVARIANT_HPP
#define FFINV_INVARIANT_HPP

#include <vector>

#include "ffinv/series.hpp"
#include "ffinv/system.hpp"

namespace ffinv {

enum class SampleSource { analytic, numeric };

/// One measured regular value: raw return times plus the regularized pair
/// (sigma1, sigma2). For a single pinch, sigma1 = tau1 + ln|c| and sigma2
/// lies in the coset tau2 - arg c + 2*pi*Z picked by the unwrap state; for
/// several pinches the pair is the transported per-segment sum.
struct PeriodSample {
    RegularValue c;
    JointTime tau;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    SampleSource source = SampleSource::analytic;
    double err_estimate = 0.0;
};

/// Branch-threading state for sigma2: the first sample anchors the
/// representative in [0, 2*pi), later samples stay continuous.
struct UnwrapState {
    bool has_prev = false;
    double prev = 0.0;

    double pick(double raw)
    {
        double v;
        if (!has_prev)
            v = wrap_angle(raw);
        else
            v = raw + kTwoPi * std::round((prev - raw) / kTwoPi);
        has_prev = true;
        prev = v;
        return v;
    }
};

PeriodSample regularize_sample(const RegularValue& c, const JointTime& tau, UnwrapState& state,
                               SampleSource source = SampleSource::analytic,
                               double err_estimate = 0.0);

/// Unwrap bookkeeping for a full sigma evaluation: the total for the
/// single-pinch path, one state per segment for the cocycle sum.
struct SigmaThreadState {
    UnwrapState total;
    std::vector<UnwrapState> per_segment;
};

/// Regularized sample at c through the view's backend; dispatches to the
/// per-segment cocycle sum when the model has several pinches.
PeriodSample sigma_sample_at(const SystemView& view, const RegularValue& c,
                             SigmaThreadState& state);

struct GridSpec {
    double r_min = 0.0;
    double r_max = 0.0;
    int n_r = 16;
    int n_theta = 32;
};

/// Deterministic polar grid, radius-major: rings of ascending radius, each
/// swept in ascending angle. The unwrap state threads along each ring; each
/// ring's first sample is anchored to the first sample of the ring below.
std::vector<PeriodSample> sample_grid(const SystemView& view, const GridSpec& grid);

struct FitResult {
    TruncatedSeries2 series{1};
    int degree = 0;
    std::size_t sample_count = 0;
    double rms_residual = 0.0;
    double condition = 0.0;
    double sigma2_zero = 0.0; // constant of the sigma2 fit, reduced to [0, 2*pi)
};

/// Joint linear least squares of both sigma components against the gradient
/// of one unknown series (closedness is built into the parametrization).
/// Columns are scaled by powers of the outer sampling radius to keep the
/// problem well conditioned on small annuli.
FitResult fit_invariant(const std::vector<PeriodSample>& samples, int degree);

/// S(c) as the line integral of the fitted 1-form sigma along the straight
/// segment from 0 to c, by Gauss-Legendre quadrature.
double eval_S_along_ray(const TruncatedSeries2& fitted, const RegularValue& c, int quad_order = 32);

/// Max central-difference residual |d(sigma1)/dc2 - d(sigma2)/dc1| over a
/// Cartesian lattice of the given step inside [r_lo, r_hi]. The stencil is
/// branch-anchored at each centre. max_centers limits the lattice scan for
/// expensive backends (0 keeps every point).
double closedness_residual(const SystemView& view, double step, double r_lo, double r_hi,
                           std::size_t max_centers = 0);

} // namespace ffinv

#endif
