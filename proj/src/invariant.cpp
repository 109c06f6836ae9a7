#include "ffinv/invariant.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ffinv/errors.hpp"
#include "ffinv/multipinch.hpp"

namespace ffinv {

PeriodSample regularize_sample(const RegularValue& c, const JointTime& tau, UnwrapState& state,
                               SampleSource source, double err_estimate)
{
    if (c.modulus() == 0.0)
        throw ValidationError("regularize_sample: c = 0 is not a regular value");
    PeriodSample s;
    s.c = c;
    s.tau = tau;
    s.sigma1 = tau.t1 + std::log(c.modulus());
    s.sigma2 = state.pick(tau.t2 - c.argument());
    s.source = source;
    s.err_estimate = err_estimate;
    return s;
}

PeriodSample sigma_sample_at(const SystemView& view, const RegularValue& c,
                             SigmaThreadState& state)
{
    const SampleSource src =
        view.backend == Backend::analytic ? SampleSource::analytic : SampleSource::numeric;
    if (view.pinch_count() == 1) {
        double err = 0.0;
        JointTime tau;
        if (view.backend == Backend::analytic) {
            tau = view.return_times(c);
        } else {
            const RegularValue cu = view.unflipped_value(c);
            NumericReturn nr = numeric_walk(*view.model, cu, view.integrator, view.min_abs_c);
            err = nr.err_estimate;
            tau = view.flip == ChartFlip::none ? nr.tau
                                               : JointTime{nr.tau.t1, wrap_angle(-nr.tau.t2)};
        }
        return regularize_sample(c, tau, state.total, src, err);
    }
    const SigmaSum sum = sigma_sum_at(view, c, state);
    PeriodSample s;
    s.c = c;
    s.tau = sum.tau;
    s.sigma1 = sum.sigma1;
    s.sigma2 = sum.sigma2;
    s.source = src;
    s.err_estimate = sum.err_estimate;
    return s;
}

std::vector<PeriodSample> sample_grid(const SystemView& view, const GridSpec& grid)
{
    if (!(grid.r_min > 0.0) || !(grid.r_min < grid.r_max) || !(grid.r_max < view.epsilon()))
        throw ValidationError("grid: need 0 < r_min < r_max < epsilon");
    if (grid.n_r < 2)
        throw ValidationError("grid.n_r: need at least 2 radii");
    if (grid.n_theta < 4)
        throw ValidationError("grid.n_theta: need at least 4 angles");

    std::vector<PeriodSample> out;
    out.reserve(static_cast<std::size_t>(grid.n_r) * grid.n_theta);

    SigmaThreadState state;
    state.per_segment.resize(view.pinch_count());
    SigmaThreadState ring_anchor; // state as of the current ring's first sample

    for (int ir = 0; ir < grid.n_r; ++ir) {
        const double r = grid.r_min + (grid.r_max - grid.r_min) * ir / (grid.n_r - 1);
        for (int it = 0; it < grid.n_theta; ++it) {
            const double th = kTwoPi * it / grid.n_theta;
            if (it == 0 && ir > 0)
                state = ring_anchor; // continue radially from the ring below
            const RegularValue c(r * std::cos(th), r * std::sin(th));
            out.push_back(sigma_sample_at(view, c, state));
            if (it == 0)
                ring_anchor = state;
        }
    }
    return out;
}

FitResult fit_invariant(const std::vector<PeriodSample>& samples, int degree)
{
    if (degree < 1)
        throw ValidationError("fit.degree: must be >= 1");
    const std::size_t unknowns = TruncatedSeries2::coefficient_count(degree);
    if (samples.size() < 2 * unknowns)
        throw ValidationError("fit_invariant: need at least twice as many samples as unknowns");

    double scale = 0.0;
    for (const auto& s : samples)
        scale = std::max(scale, s.c.modulus());
    if (scale == 0.0)
        throw ValidationError("fit_invariant: degenerate sample set");

    const auto expo = TruncatedSeries2::exponents(degree);
    const std::size_t n = samples.size();
    Eigen::MatrixXd A(2 * n, unknowns);
    Eigen::VectorXd rhs(2 * n);

    for (std::size_t s = 0; s < n; ++s) {
        const double u = samples[s].c.c1 / scale;
        const double v = samples[s].c.c2 / scale;
        std::vector<double> pu(degree + 1, 1.0), pv(degree + 1, 1.0);
        for (int m = 1; m <= degree; ++m) {
            pu[m] = pu[m - 1] * u;
            pv[m] = pv[m - 1] * v;
        }
        for (std::size_t col = 0; col < unknowns; ++col) {
            const auto [i, j] = expo[col];
            A(2 * s, col) = i > 0 ? i * pu[i - 1] * pv[j] / scale : 0.0;
            A(2 * s + 1, col) = j > 0 ? j * pu[i] * pv[j - 1] / scale : 0.0;
        }
        rhs(2 * s) = samples[s].sigma1;
        rhs(2 * s + 1) = samples[s].sigma2;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    if (svd.rank() < static_cast<Eigen::Index>(unknowns))
        throw ValidationError("fit_invariant: rank-deficient design matrix (grid too degenerate)");
    const Eigen::VectorXd x = svd.solve(rhs);

    FitResult res;
    res.series = TruncatedSeries2(degree);
    for (std::size_t col = 0; col < unknowns; ++col) {
        const auto [i, j] = expo[col];
        res.series.at(i, j) = x(col) / std::pow(scale, i + j);
    }
    res.degree = degree;
    res.sample_count = n;
    res.rms_residual = (A * x - rhs).norm() / std::sqrt(static_cast<double>(2 * n));
    res.condition = svd.singularValues()(0) /
                    svd.singularValues()(svd.singularValues().size() - 1);
    res.sigma2_zero = wrap_angle(res.series.at(0, 1));
    return res;
}

namespace {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    // Golub-Welsch on the Jacobi matrix for [-1, 1], then shifted to [0, 1]
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);
        const double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 0.5 * w;
    }
}

} // namespace

double eval_S_along_ray(const TruncatedSeries2& fitted, const RegularValue& c, int quad_order)
{
    if (quad_order < 2)
        throw ValidationError("eval_S_along_ray: quadrature order too small");
    if (c.c1 == 0.0 && c.c2 == 0.0)
        return 0.0; // S(0) = 0 by definition
    auto [sx, sy] = fitted.partials();
    std::vector<double> t, w;
    gauss_legendre_01(quad_order, t, w);
    double acc = 0.0;
    for (int i = 0; i < quad_order; ++i) {
        const RegularValue p(t[i] * c.c1, t[i] * c.c2);
        acc += w[i] * (sx.eval(p) * c.c1 + sy.eval(p) * c.c2);
    }
    return acc;
}

double closedness_residual(const SystemView& view, double step, double r_lo, double r_hi,
                           std::size_t max_centers)
{
    if (!(step > 0.0) || !(r_lo > 0.0) || !(r_lo < r_hi))
        throw ValidationError("closedness_residual: bad stencil parameters");

    std::vector<RegularValue> centers;
    const int n_max = static_cast<int>(std::floor(r_hi / step));
    for (int a = -n_max; a <= n_max; ++a) {
        for (int b = -n_max; b <= n_max; ++b) {
            const RegularValue c(a * step, b * step);
            const double r = c.modulus();
            if (r - step * 1.5 < r_lo || r + step * 1.5 > r_hi)
                continue;
            centers.push_back(c);
        }
    }
    if (centers.empty())
        throw ValidationError("closedness_residual: annulus too thin for the stencil step");
    if (max_centers > 0 && centers.size() > max_centers) {
        std::vector<RegularValue> pick;
        const double stride = static_cast<double>(centers.size()) / max_centers;
        for (std::size_t i = 0; i < max_centers; ++i)
            pick.push_back(centers[static_cast<std::size_t>(i * stride)]);
        centers.swap(pick);
    }

    double worst = 0.0;
    for (const auto& c : centers) {
        SigmaThreadState anchor;
        anchor.per_segment.resize(view.pinch_count());
        (void)sigma_sample_at(view, c, anchor); // anchors every branch at the centre

        auto probe = [&](double dc1, double dc2) {
            SigmaThreadState st = anchor;
            return sigma_sample_at(view, {c.c1 + dc1, c.c2 + dc2}, st);
        };
        const PeriodSample up = probe(0.0, step), down = probe(0.0, -step);
        const PeriodSample right = probe(step, 0.0), left = probe(-step, 0.0);
        const double d_sigma1_dc2 = (up.sigma1 - down.sigma1) / (2.0 * step);
        const double d_sigma2_dc1 = (right.sigma2 - left.sigma2) / (2.0 * step);
        worst = std::max(worst, std::abs(d_sigma1_dc2 - d_sigma2_dc1));
    }
    return worst;
}

} // namespace ffinv
