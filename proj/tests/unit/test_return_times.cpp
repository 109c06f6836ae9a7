#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ffinv/errors.hpp"
#include "ffinv/return_times.hpp"

using namespace ffinv;

namespace {

std::mt19937_64 rng(2026);

TruncatedSeries2 random_series(int degree, double bound = 0.5)
{
    std::uniform_real_distribution<double> u(-bound, bound);
    TruncatedSeries2 s(degree);
    for (auto& c : s.coefficients())
        c = u(rng);
    return s;
}

std::vector<RegularValue> polar_grid(double r_lo, double r_hi, int n)
{
    std::vector<RegularValue> out;
    for (int i = 0; i < n; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / (n - 1);
        const double th = kTwoPi * (i * 7 % n) / n;
        out.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return out;
}

double tau_error(const JointTime& a, const JointTime& b)
{
    return std::max(std::abs(a.t1 - b.t1), std::abs(std::remainder(a.t2 - b.t2, kTwoPi)));
}

} // namespace

TEST_CASE("numeric return times: frozen example on the trivial model")
{
    const ModelFoliation m = build_model(TruncatedSeries2(1), 0.5, 1, {});
    IntegratorOptions opts;
    opts.tol = 1e-10;
    const JointTime t = numeric_return_times(m, {0.1, 0.0}, opts, 0.0);
    CHECK(std::abs(t.t1 - 2.302585092994046) <= 1e-8);
    CHECK(std::abs(std::remainder(t.t2, kTwoPi)) <= 1e-8);
}

TEST_CASE("oracle agreement on a 32-point grid")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    const std::vector<TruncatedSeries2> corpus = {
        TruncatedSeries2(1),
        TruncatedSeries2(1, {{1, 0, 0.3}, {0, 1, 0.1}}),
        random_series(3),
        random_series(4),
    };
    for (const auto& s : corpus) {
        const ModelFoliation m = build_model(s, 0.4, 1, {});
        for (const auto& c : polar_grid(0.02, 0.2, 32)) {
            const JointTime ana = analytic_return_times(m, c);
            const JointTime num = numeric_return_times(m, c, opts, 0.0);
            CHECK(tau_error(ana, num) <= 1e-7);
        }
    }
}

TEST_CASE("oracle agreement across gluing chains (k = 3)")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    const TruncatedSeries2 s(2, {{1, 0, 0.3}, {0, 1, 0.15}, {2, 0, 0.05}});
    const std::vector<TransitionSeries> transitions = {
        TransitionSeries{TruncatedSeries2(1, {{1, 0, 0.1}})},
        TransitionSeries{TruncatedSeries2(2, {{1, 0, -0.05}, {0, 2, 0.04}})},
    };
    const ModelFoliation m = build_model(s, 0.4, 3, transitions);
    for (const auto& c : polar_grid(0.02, 0.2, 16)) {
        const JointTime ana = analytic_return_times(m, c);
        const JointTime num = numeric_return_times(m, c, opts, 0.0);
        CHECK(tau_error(ana, num) <= 1e-7);
    }
}

TEST_CASE("tolerance monotonicity")
{
    const ModelFoliation m = build_model(random_series(3), 0.4, 1, {});
    const auto grid = polar_grid(0.02, 0.2, 32);
    auto median_err = [&](double tol) {
        IntegratorOptions opts;
        opts.tol = tol;
        std::vector<double> errs;
        for (const auto& c : grid)
            errs.push_back(tau_error(analytic_return_times(m, c),
                                     numeric_return_times(m, c, opts, 0.0)));
        std::sort(errs.begin(), errs.end());
        return errs[errs.size() / 2];
    };
    const double e1 = median_err(1e-6);
    const double e2 = median_err(5e-7);
    CHECK(e2 <= 2.0 * e1 + 1e-15);
}

TEST_CASE("numeric inner transit agrees with the closed form")
{
    IntegratorOptions opts;
    opts.tol = 1e-12;
    std::uniform_real_distribution<double> ur(1e-3, 5e-3), ut(0.0, kTwoPi);
    for (int n = 0; n < 20; ++n) {
        const double r = ur(rng), th = ut(rng);
        const RegularValue c{r * std::cos(th), r * std::sin(th)};
        const JointTime closed = inner_transit_time(0.1, c);
        const JointTime num = numeric_inner_transit(0.1, c, opts);
        CHECK(tau_error(closed, num) <= 1e-9);
    }
}

TEST_CASE("oracle agreement persists when the exit boundary sits low")
{
    // strongly negative S1 pushes the section orbit below sqrt(|c|), which
    // turns the focus-chart transit into a short backward hop
    const TruncatedSeries2 s(1, {{1, 0, -0.9}, {0, 1, 0.2}});
    const ModelFoliation m = build_model(s, 0.4, 1, {});
    IntegratorOptions opts;
    opts.tol = 1e-10;
    for (const auto& c : polar_grid(0.15, 0.2, 8)) {
        const JointTime ana = analytic_return_times(m, c);
        const JointTime num = numeric_return_times(m, c, opts, 0.0);
        CHECK(tau_error(ana, num) <= 1e-7);
    }
}

TEST_CASE("guards")
{
    const ModelFoliation m = build_model(TruncatedSeries2(1), 0.5, 1, {});
    IntegratorOptions opts;
    CHECK_THROWS_AS(numeric_return_times(m, {0.0, 0.0}, opts, 0.0), ValidationError);
    CHECK_THROWS_AS(numeric_return_times(m, {0.6, 0.0}, opts, 0.0), ValidationError);
    CHECK_THROWS_AS(numeric_return_times(m, {0.001, 0.0}, opts, 0.01), ValidationError);
    CHECK_THROWS_AS(numeric_inner_transit(0.1, {0.02, 0.0}, opts), ValidationError);
}
