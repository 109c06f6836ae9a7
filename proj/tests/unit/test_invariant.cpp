#include <doctest.h>

#include <cmath>
#include <random>

#include "ffinv/errors.hpp"
#include "ffinv/invariant.hpp"

using namespace ffinv;

namespace {

std::mt19937_64 rng(314);

TruncatedSeries2 random_series(int degree, double bound = 0.5)
{
    std::uniform_real_distribution<double> u(-bound, bound);
    TruncatedSeries2 s(degree);
    for (auto& c : s.coefficients())
        c = u(rng);
    return s;
}

SystemView analytic_view(const ModelFoliation& m)
{
    SystemView v;
    v.model = &m;
    v.backend = Backend::analytic;
    return v;
}

const GridSpec kGrid{0.02, 0.2, 16, 32};

} // namespace

TEST_CASE("regularization cancels the log exactly on the model")
{
    // S == 0: sigma = 0
    {
        const ModelFoliation m = build_model(TruncatedSeries2(1), 0.5, 1, {});
        UnwrapState st;
        const PeriodSample s =
            regularize_sample({0.1, 0.0}, analytic_return_times(m, {0.1, 0.0}), st);
        CHECK(std::abs(s.sigma1) <= 1e-12);
        CHECK(std::abs(s.sigma2) <= 1e-12);
    }
    // S = X: sigma1 = 1
    {
        const ModelFoliation m = build_model(TruncatedSeries2(1, {{1, 0, 1.0}}), 0.5, 1, {});
        UnwrapState st;
        const PeriodSample s =
            regularize_sample({0.1, 0.0}, analytic_return_times(m, {0.1, 0.0}), st);
        CHECK(s.sigma1 == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(s.sigma2) <= 1e-12);
    }
    // S = 0.2 Y: sigma2(0) representative is 0.2
    {
        const ModelFoliation m = build_model(TruncatedSeries2(1, {{0, 1, 0.2}}), 0.5, 1, {});
        UnwrapState st;
        const PeriodSample s =
            regularize_sample({0.1, 0.0}, analytic_return_times(m, {0.1, 0.0}), st);
        CHECK(s.sigma2 == doctest::Approx(0.2).epsilon(1e-13));
        CHECK(s.sigma2 >= 0.0);
        CHECK(s.sigma2 < kTwoPi);
    }
}

TEST_CASE("sigma equals the prescribed gradient over the annulus")
{
    const TruncatedSeries2 s = random_series(4);
    const ModelFoliation m = build_model(s, 0.4, 1, {});
    const auto [sx, sy] = s.partials();
    const auto samples = sample_grid(analytic_view(m), kGrid);
    for (const auto& smp : samples) {
        CHECK(std::abs(smp.sigma1 - sx.eval(smp.c)) <= 1e-12);
        // the threaded representative may sit a lattice step away only if
        // the prescription itself is that large; here it never is
        CHECK(std::abs(std::remainder(smp.sigma2 - sy.eval(smp.c), kTwoPi)) <= 1e-12);
    }
}

TEST_CASE("sample grid is deterministic, radius-major, complete")
{
    const ModelFoliation m = build_model(TruncatedSeries2(1), 0.5, 1, {});
    const auto samples = sample_grid(analytic_view(m), kGrid);
    REQUIRE(samples.size() == 16 * 32);
    for (int ir = 0; ir < 16; ++ir) {
        const double r = 0.02 + (0.2 - 0.02) * ir / 15.0;
        for (int it = 0; it < 32; ++it) {
            const auto& s = samples[ir * 32 + it];
            CHECK(s.c.modulus() == doctest::Approx(r).epsilon(1e-12));
            CHECK(s.c.argument() == doctest::Approx(kTwoPi * it / 32).epsilon(1e-9));
        }
    }
    const auto again = sample_grid(analytic_view(m), kGrid);
    for (std::size_t n = 0; n < samples.size(); ++n) {
        CHECK(again[n].sigma1 == samples[n].sigma1);
        CHECK(again[n].sigma2 == samples[n].sigma2);
    }
}

TEST_CASE("unwrap threading survives a negative s01 prescription")
{
    // sigma2 sits near 2*pi - 0.3; threading must not tear the band
    const ModelFoliation m = build_model(TruncatedSeries2(1, {{0, 1, -0.3}}), 0.5, 1, {});
    const auto samples = sample_grid(analytic_view(m), kGrid);
    for (const auto& s : samples)
        CHECK(s.sigma2 == doctest::Approx(kTwoPi - 0.3).epsilon(1e-10));
}

TEST_CASE("fit recovers prescribed polynomials exactly")
{
    {
        const TruncatedSeries2 s(3, {{1, 0, 0.3}, {2, 0, 0.05}, {1, 1, -0.02}});
        const ModelFoliation m = build_model(s, 0.4, 1, {});
        const FitResult f = fit_invariant(sample_grid(analytic_view(m), kGrid), 3);
        CHECK(coefficient_distance(f.series, s) <= 1e-8);
        CHECK(f.rms_residual <= 1e-10);
    }
    {
        // all-zero samples give the zero series with zero residual
        const ModelFoliation m = build_model(TruncatedSeries2(1), 0.5, 1, {});
        const FitResult f = fit_invariant(sample_grid(analytic_view(m), kGrid), 4);
        CHECK(f.series.max_abs_coeff() <= 1e-12);
        CHECK(f.rms_residual <= 1e-12);
    }
    {
        // S = XY: the closedness identity d(sigma1)/dc2 = d(sigma2)/dc1 = 1
        const TruncatedSeries2 s(2, {{1, 1, 1.0}});
        const ModelFoliation m = build_model(s, 0.4, 1, {});
        const FitResult f = fit_invariant(sample_grid(analytic_view(m), kGrid), 2);
        CHECK(coefficient_distance(f.series, s) <= 1e-10);
        CHECK(f.rms_residual <= 1e-10);
    }
}

TEST_CASE("round-trip recovers random series at the fitted degree")
{
    for (int n = 0; n < 5; ++n) {
        const TruncatedSeries2 s = random_series(4);
        const ModelFoliation m = build_model(s, 0.4, 1, {});
        const FitResult f = fit_invariant(sample_grid(analytic_view(m), kGrid), 4);
        CHECK(coefficient_distance(f.series, s) <= 1e-8);
        CHECK(f.sigma2_zero >= 0.0);
        CHECK(f.sigma2_zero < kTwoPi);
    }
}

TEST_CASE("fit preconditions and failure modes")
{
    const ModelFoliation m = build_model(TruncatedSeries2(1), 0.5, 1, {});
    auto samples = sample_grid(analytic_view(m), kGrid);
    samples.resize(10); // not enough for degree 4
    CHECK_THROWS_AS(fit_invariant(samples, 4), ValidationError);

    // a grid collapsed onto one ray cannot separate the basis
    std::vector<PeriodSample> ray;
    UnwrapState st;
    for (int i = 0; i < 80; ++i) {
        const double r = 0.02 + 0.002 * i;
        ray.push_back(regularize_sample({r, 0.0}, {1.0 - std::log(r), 0.0}, st));
    }
    CHECK_THROWS_AS(fit_invariant(ray, 3), ValidationError);
}

TEST_CASE("ray quadrature agrees with direct evaluation")
{
    const TruncatedSeries2 fitted(3, {{1, 0, 0.3}, {0, 1, 0.1}, {2, 0, 0.05}, {1, 2, -0.04}});
    CHECK(eval_S_along_ray(fitted, {0.0, 0.0}) == 0.0);
    CHECK(std::abs(eval_S_along_ray(fitted, {0.1, 0.0}) - 0.03 - 0.0005 /*0.05*0.01*/) <= 2e-10);
    const TruncatedSeries2 sq(2, {{2, 0, 0.05}});
    CHECK(std::abs(eval_S_along_ray(sq, {0.2, 0.0}) - 0.002) <= 1e-10);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int n = 0; n < 20; ++n) {
        const RegularValue c{u(rng), u(rng)};
        CHECK(std::abs(eval_S_along_ray(fitted, c) - fitted.eval(c)) <= 1e-9);
    }
}

TEST_CASE("numeric and analytic backends agree at the sigma level")
{
    const TruncatedSeries2 s = random_series(3);
    const ModelFoliation m = build_model(s, 0.4, 1, {});
    SystemView num = analytic_view(m);
    num.backend = Backend::numeric;
    num.integrator.tol = 1e-10;
    const GridSpec small{0.02, 0.2, 6, 8};
    const auto a = sample_grid(analytic_view(m), small);
    const auto b = sample_grid(num, small);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(std::abs(a[n].sigma1 - b[n].sigma1) <= 1e-7);
        CHECK(std::abs(std::remainder(a[n].sigma2 - b[n].sigma2, kTwoPi)) <= 1e-7);
        CHECK(b[n].source == SampleSource::numeric);
        CHECK(b[n].err_estimate >= 0.0);
    }
}

TEST_CASE("closedness residual is tiny for polynomial models")
{
    // degree <= 3 prescription: sigma is quadratic, so the central
    // difference is exact and the residual is pure roundoff
    const TruncatedSeries2 s = random_series(3);
    const ModelFoliation m = build_model(s, 0.4, 1, {});
    CHECK(closedness_residual(analytic_view(m), 0.01, 0.02, 0.2) <= 1e-6);

    // at degree 4 the stencil picks up the h^2 (s13 - s31) truncation term
    const TruncatedSeries2 s4 = random_series(4);
    const ModelFoliation m4 = build_model(s4, 0.4, 1, {});
    const double h = 0.01;
    const double truncation = h * h * std::abs(s4.at(1, 3) - s4.at(3, 1));
    CHECK(closedness_residual(analytic_view(m4), h, 0.02, 0.2) <= truncation + 1e-6);
}
