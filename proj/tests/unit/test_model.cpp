#include <doctest.h>

#include <cmath>
#include <random>

#include "ffinv/errors.hpp"
#include "ffinv/model.hpp"

using namespace ffinv;

namespace {

std::mt19937_64 rng(123);

TruncatedSeries2 random_series(int degree, double bound = 0.5)
{
    std::uniform_real_distribution<double> u(-bound, bound);
    TruncatedSeries2 s(degree);
    for (auto& c : s.coefficients())
        c = u(rng);
    return s;
}

RegularValue random_value(double r_lo, double r_hi)
{
    std::uniform_real_distribution<double> ur(r_lo, r_hi), ut(0.0, kTwoPi);
    const double r = ur(rng), th = ut(rng);
    return {r * std::cos(th), r * std::sin(th)};
}

double dist4(const PhasePoint& a, const PhasePoint& b)
{
    return PhasePoint{a.x - b.x, a.y - b.y, a.xi - b.xi, a.eta - b.eta}.norm();
}

const TruncatedSeries2 kZero{1};
const TruncatedSeries2 kLinX{1, {{1, 0, 1.0}}};

} // namespace

TEST_CASE("build_model validation")
{
    CHECK_THROWS_AS(build_model(kZero, 1.0, 1, {}), ValidationError);
    CHECK_THROWS_AS(build_model(kZero, 0.0, 1, {}), ValidationError);
    CHECK_THROWS_AS(build_model(kZero, 0.5, 2, {}), ValidationError);
    CHECK_THROWS_AS(build_model(kZero, 0.5, 1, {TransitionSeries{}}), ValidationError);
    // transition with 1 + s10 <= 0
    TransitionSeries bad{TruncatedSeries2(1, {{1, 0, -1.0}})};
    CHECK_THROWS_AS(build_model(kZero, 0.5, 2, {bad}), ValidationError);
    CHECK_NOTHROW(build_model(kZero, 0.5, 1, {}));
}

TEST_CASE("section points satisfy the momentum constraint")
{
    const ModelFoliation trivial = build_model(kZero, 0.5, 1, {});
    {
        auto [p1, p2] = section_points(trivial, {0.1, 0.0});
        CHECK(dist4(p1, PhasePoint(std::complex<double>(0.1, 0), std::complex<double>(1, 0))) == 0.0);
        CHECK(dist4(p2, PhasePoint(std::complex<double>(1, 0), std::complex<double>(0.1, 0))) <
              1e-15);
    }
    const ModelFoliation mx = build_model(kLinX, 0.5, 1, {});
    {
        auto [p1, p2] = section_points(mx, {0.1, 0.0});
        (void)p1;
        CHECK(p2.z1().real() == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
        CHECK(p2.z2().real() == doctest::Approx(0.1 / std::exp(1.0)).epsilon(1e-14));
    }
    // momentum_map(P2) = c for random series and values
    for (int n = 0; n < 30; ++n) {
        const ModelFoliation m = build_model(random_series(4), 0.4, 1, {});
        const RegularValue c = random_value(0.01, 0.2);
        auto [p1, p2] = section_points(m, c);
        for (const PhasePoint& p : {p1, p2}) {
            const RegularValue q = momentum_map(p);
            CHECK(std::hypot(q.c1 - c.c1, q.c2 - c.c2) <= 1e-12 * (1.0 + c.modulus()));
        }
    }
    CHECK_THROWS_AS(section_points(trivial, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(section_points(trivial, {0.6, 0.0}), ValidationError);
}

TEST_CASE("sections are joined by the flow at the analytic return time")
{
    for (int n = 0; n < 30; ++n) {
        const ModelFoliation m = build_model(random_series(4), 0.4, 1, {});
        const RegularValue c = random_value(0.01, 0.2);
        auto [p1, p2] = section_points(m, c);
        const JointTime tau = analytic_return_times(m, c);
        CHECK(dist4(normal_form_flow(p1, tau), p2) < 1e-12);
    }
}

TEST_CASE("analytic return times, frozen values")
{
    const ModelFoliation trivial = build_model(kZero, 0.5, 1, {});
    const JointTime t0 = analytic_return_times(trivial, {0.1, 0.0});
    CHECK(t0.t1 == doctest::Approx(2.302585092994046).epsilon(1e-14));
    CHECK(t0.t2 == doctest::Approx(0.0));

    const ModelFoliation mx = build_model(kLinX, 0.5, 1, {});
    const JointTime tx = analytic_return_times(mx, {0.1, 0.0});
    CHECK(tx.t1 == doctest::Approx(3.302585092994046).epsilon(1e-14));
    CHECK(tx.t2 == doctest::Approx(0.0));

    const JointTime ti = analytic_return_times(trivial, {0.0, 0.1});
    CHECK(ti.t2 == doctest::Approx(kTwoPi / 4).epsilon(1e-14));

    CHECK_THROWS_AS(analytic_return_times(trivial, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(analytic_return_times(trivial, {0.5, 0.0}), ValidationError);
}

TEST_CASE("glue map on the sections")
{
    const ModelFoliation trivial = build_model(kZero, 0.5, 1, {});
    {
        auto [p1, p2] = section_points(trivial, {0.1, 0.0});
        CHECK(dist4(glue_map(trivial, p1), p2) < 1e-14);
    }
    const ModelFoliation mx = build_model(kLinX, 0.5, 1, {});
    {
        auto [p1, p2] = section_points(mx, {0.1, 0.0});
        const PhasePoint image = glue_map(mx, p1);
        CHECK(image.z1().real() == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
        CHECK(image.z2().real() == doctest::Approx(0.1 / std::exp(1.0)).epsilon(1e-13));
        CHECK(dist4(image, p2) < 1e-13);
    }
}

TEST_CASE("glue map commutes with the joint flow")
{
    std::uniform_real_distribution<double> smalltime(-0.1, 0.1);
    for (int n = 0; n < 40; ++n) {
        const ModelFoliation m = build_model(random_series(3), 0.4, 1, {});
        const RegularValue c = random_value(0.02, 0.2);
        auto [p1, p2] = section_points(m, c);
        const JointTime t{smalltime(rng), smalltime(rng)};
        const PhasePoint lhs = glue_map(m, normal_form_flow(p1, t));
        const PhasePoint rhs = normal_form_flow(glue_map(m, p1), t);
        CHECK(dist4(lhs, rhs) <= 1e-12 * (1.0 + rhs.norm()));
        (void)p2;
    }
}

TEST_CASE("glue map rejects points far from the collar")
{
    const ModelFoliation m = build_model(kZero, 0.5, 1, {});
    auto [p1, p2] = section_points(m, {0.1, 0.0});
    (void)p2;
    const PhasePoint away = normal_form_flow(p1, {1.0, 0.0});
    CHECK_THROWS_AS(glue_map(m, away), ValidationError);
}

TEST_CASE("glue forward inverts glue map")
{
    for (int n = 0; n < 20; ++n) {
        const ModelFoliation m = build_model(random_series(3), 0.4, 1, {});
        const RegularValue c = random_value(0.02, 0.2);
        std::uniform_real_distribution<double> smalltime(-0.15, 0.15);
        const JointTime t{smalltime(rng), smalltime(rng)};
        auto [p1, p2] = section_points(m, c);
        (void)p2;
        const PhasePoint entry = normal_form_flow(p1, t);
        const PhasePoint exit = glue_map(m, entry);
        auto [seg, back] = glue_forward(m, 0, exit);
        CHECK(seg == 0);
        CHECK(dist4(back, entry) < 1e-12);
    }
}

TEST_CASE("glue round-trips across transition and closing gluings")
{
    TransitionSeries lin{TruncatedSeries2(2, {{1, 0, 0.12}, {0, 2, -0.04}})};
    const TruncatedSeries2 s(2, {{1, 0, 0.3}, {0, 1, 0.15}});
    const ModelFoliation m = build_model(s, 0.4, 2, {lin});
    std::uniform_real_distribution<double> smalltime(-0.12, 0.12);
    for (int n = 0; n < 20; ++n) {
        const RegularValue c = random_value(0.03, 0.18);
        for (int gluing = 0; gluing < 2; ++gluing) {
            // entry-side representation lives in the chart after the gluing
            const int entry_chart = (gluing + 1) % 2;
            const RegularValue local = m.local_value(entry_chart, c);
            auto [p1, p2] = section_points(m, local, entry_chart);
            (void)p2;
            const PhasePoint entry =
                normal_form_flow(p1, {smalltime(rng), smalltime(rng)});
            const PhasePoint exit = glue_map(m, gluing, entry);
            // the exit representation sits on the other side's local leaf
            const RegularValue exit_local = momentum_map(exit);
            const RegularValue expect = m.local_value(gluing, c);
            CHECK(std::hypot(exit_local.c1 - expect.c1, exit_local.c2 - expect.c2) <= 1e-12);
            auto [seg, back] = glue_forward(m, gluing, exit);
            CHECK(seg == entry_chart);
            CHECK(dist4(back, entry) < 1e-11);
        }
    }
}

TEST_CASE("glue handles the singular leaf through the two branches")
{
    const TruncatedSeries2 s(2, {{1, 0, 0.3}, {0, 1, 0.2}, {2, 0, 0.05}});
    const ModelFoliation m = build_model(s, 0.4, 1, {});
    // stable-branch entry representation (0, z2), |z2| near 1
    const PhasePoint entry(std::complex<double>(0.0, 0.0), std::complex<double>(0.98, 0.1));
    const PhasePoint exit = glue_map(m, entry);
    CHECK(std::abs(exit.z2()) == 0.0);
    CHECK(momentum_map(exit).modulus() == 0.0);
    auto [seg, back] = glue_forward(m, 0, exit);
    CHECK(seg == 0);
    CHECK(dist4(back, entry) < 1e-13);
}

TEST_CASE("inner transit closed form")
{
    const JointTime a = inner_transit_time(0.1, {0.01, 0.0});
    CHECK(a.t1 == doctest::Approx(0.0));
    CHECK(a.t2 == doctest::Approx(0.0));
    const JointTime b = inner_transit_time(1.0, {std::exp(-2.0), 0.0});
    CHECK(b.t1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b.t2 == doctest::Approx(0.0));
}

TEST_CASE("model_flow: S1 periodicity and period-lattice closure")
{
    for (int n = 0; n < 15; ++n) {
        const ModelFoliation m = build_model(random_series(4), 0.4, 1, {});
        const RegularValue c = random_value(0.01, 0.2);
        auto [p1, p2] = section_points(m, c);
        (void)p2;
        // interior start point
        const JointTime tau = analytic_return_times(m, c);
        const ModelPoint start{0, normal_form_flow(p1, {0.37 * tau.t1, 1.1})};
        REQUIRE(in_fundamental_domain(m, start));

        const ModelPoint full_circle = model_flow(m, start, {0.0, kTwoPi});
        CHECK(dist4(full_circle.point, start.point) < 1e-12);

        const ModelPoint ret = model_flow(m, start, tau);
        CHECK(ret.segment == start.segment);
        CHECK(dist4(ret.point, start.point) < 1e-9);

        const ModelPoint back = model_flow(m, start, {-tau.t1, -tau.t2});
        CHECK(dist4(back.point, start.point) < 1e-9);
    }
}

TEST_CASE("model_flow rejects leaves outside the base disc")
{
    const ModelFoliation m = build_model(kZero, 0.3, 1, {});
    // a well-formed chart point whose leaf value exceeds epsilon
    const ModelPoint outside{0, PhasePoint(std::complex<double>(0.4, 0.0),
                                           std::complex<double>(1.0, 0.0))};
    CHECK_FALSE(in_fundamental_domain(m, outside));
    CHECK_THROWS_AS(model_flow(m, outside, {0.1, 0.0}), ValidationError);
    // and points below their own entry circle are not model points either
    const ModelPoint below{0, PhasePoint(std::complex<double>(0.01, 0.0),
                                         std::complex<double>(10.0, 0.0))};
    CHECK_FALSE(in_fundamental_domain(m, below));
    CHECK_THROWS_AS(model_flow(m, below, {0.1, 0.0}), ValidationError);
}

TEST_CASE("half-period flow from the entry section lands in the interior")
{
    const ModelFoliation m = build_model(kLinX, 0.5, 1, {});
    const RegularValue c{0.1, 0.0};
    auto [p1, p2] = section_points(m, c);
    (void)p2;
    const JointTime tau = analytic_return_times(m, c);
    const ModelPoint mid = model_flow(m, {0, p1}, {tau.t1 / 2, 0.0});
    CHECK(mid.segment == 0);
    CHECK(in_fundamental_domain(m, mid));
    const RegularValue q = momentum_map(mid.point);
    CHECK(std::hypot(q.c1 - c.c1, q.c2 - c.c2) <= 1e-13);
    // strictly between the two boundary circles
    const double lz1 = std::log(std::abs(mid.point.z1()));
    CHECK(lz1 > std::log(c.modulus()) + 0.5);
    CHECK(lz1 < 1.0 - 0.5); // S1(c) = 1 for S = X
}

TEST_CASE("model_flow conserves the leaf across many gluings")
{
    const ModelFoliation m = build_model(random_series(4), 0.4, 1, {});
    const RegularValue c = random_value(0.02, 0.15);
    auto [p1, p2] = section_points(m, c);
    (void)p2;
    ModelPoint cur{0, normal_form_flow(p1, {0.2, 0.0})};
    for (int wrap = 0; wrap < 25; ++wrap) {
        cur = model_flow(m, cur, {1.7, 0.9});
        const RegularValue q = momentum_map(cur.point);
        CHECK(std::hypot(q.c1 - c.c1, q.c2 - c.c2) <= 1e-10);
        CHECK(in_fundamental_domain(m, cur, 1e-9));
    }
}

TEST_CASE("model_flow walks the singular leaf across the pinch gluing")
{
    const ModelFoliation m = build_model(kLinX, 0.4, 1, {});
    // unstable branch point close to the exit boundary (S1(0) = 1)
    const ModelPoint start{0, PhasePoint(std::complex<double>(std::exp(0.9), 0.0),
                                         std::complex<double>(0.0, 0.0))};
    REQUIRE(in_fundamental_domain(m, start));
    const ModelPoint moved = model_flow(m, start, {0.5, 0.0});
    CHECK(momentum_map(moved.point).modulus() == 0.0);
    CHECK(std::abs(moved.point.z1()) == 0.0); // wrapped onto the stable branch
    CHECK(in_fundamental_domain(m, moved));
    // and back
    const ModelPoint back = model_flow(m, moved, {-0.5, 0.0});
    CHECK(dist4(back.point, start.point) < 1e-12);
}

TEST_CASE("multi-pinch analytic times reduce to single pinch up to the extra passage")
{
    const TruncatedSeries2 s(3, {{1, 0, 0.3}, {0, 1, 0.1}, {2, 0, 0.05}, {1, 2, -0.07}});
    const ModelFoliation one = build_model(s, 0.4, 1, {});
    const ModelFoliation two = build_model(s, 0.4, 2, {TransitionSeries{}});
    for (int n = 0; n < 20; ++n) {
        const RegularValue c = random_value(0.01, 0.2);
        const JointTime t1 = analytic_return_times(one, c);
        const JointTime t2 = analytic_return_times(two, c);
        // the identity-transition two-pinch leaf crosses two focus charts:
        // tau1 picks up one extra -ln|c|, tau2 one extra arg(c) (mod 2*pi)
        CHECK(t2.t1 == doctest::Approx(t1.t1 - std::log(c.modulus())).epsilon(1e-12));
        CHECK(std::abs(std::remainder(t2.t2 - t1.t2 - c.argument(), kTwoPi)) < 1e-12);
    }
}

TEST_CASE("composed total series: identity transitions keep the prescription")
{
    const TruncatedSeries2 s = random_series(3);
    const ModelFoliation two = build_model(s, 0.4, 2, {TransitionSeries{}});
    CHECK(coefficient_distance(two.composed_total_series(), s, false) == 0.0);

    // linear transition scales coefficients by powers of (1 + h10)
    TransitionSeries lin{TruncatedSeries2(1, {{1, 0, 0.1}})};
    const TruncatedSeries2 sx(2, {{1, 0, 0.3}, {2, 0, 0.05}});
    const ModelFoliation m = build_model(sx, 0.4, 2, {lin});
    const TruncatedSeries2 tot = m.composed_total_series();
    CHECK(tot.at(1, 0) == doctest::Approx(0.33).epsilon(1e-15));
    CHECK(tot.at(2, 0) == doctest::Approx(0.05 * 1.21).epsilon(1e-15));
}

TEST_CASE("model_flow closes the period lattice on multi-pinch models")
{
    TransitionSeries lin{TruncatedSeries2(2, {{1, 0, 0.1}, {0, 2, 0.05}})};
    const TruncatedSeries2 s(2, {{1, 0, 0.3}, {0, 1, 0.15}});
    const ModelFoliation m = build_model(s, 0.4, 2, {lin});
    for (int n = 0; n < 10; ++n) {
        const RegularValue c = random_value(0.02, 0.15);
        const JointTime tau = analytic_return_times(m, c);
        auto [p1, p2] = section_points(m, c, 0);
        (void)p2;
        const ModelPoint start{0, normal_form_flow(p1, {0.1, 0.4})};
        REQUIRE(in_fundamental_domain(m, start));
        const ModelPoint ret = model_flow(m, start, tau);
        CHECK(ret.segment == 0);
        CHECK(dist4(ret.point, start.point) < 1e-9);
    }
}
