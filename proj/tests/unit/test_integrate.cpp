#include <doctest.h>

#include <cmath>
#include <random>

#include "ffinv/errors.hpp"
#include "ffinv/integrate.hpp"

using namespace ffinv;

namespace {

std::mt19937_64 rng(99);

PhasePoint random_point(double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng)};
}

double dist4(const PhasePoint& a, const PhasePoint& b)
{
    return PhasePoint{a.x - b.x, a.y - b.y, a.xi - b.xi, a.eta - b.eta}.norm();
}

} // namespace

TEST_CASE("endpoint accuracy on the q1 field against the closed form")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    const PhasePoint p0(std::complex<double>(1, 0), std::complex<double>(1, 0));
    const Trajectory tr = integrate_adaptive({1.0, 0.0}, p0, std::log(2.0), opts);
    const PhasePoint expect(std::complex<double>(2, 0), std::complex<double>(0.5, 0));
    CHECK(dist4(tr.endpoint(), expect) <= 10 * opts.tol * (1.0 + p0.norm()));
    CHECK(dist4(tr.endpoint(), expect) <= 1e-9);

    for (int n = 0; n < 10; ++n) {
        const PhasePoint q0 = random_point();
        std::uniform_real_distribution<double> ut(-3.0, 3.0);
        const double T = ut(rng);
        const Trajectory t2 = integrate_adaptive({1.0, 0.0}, q0, T, opts);
        const PhasePoint closed = normal_form_flow(q0, {T, 0.0});
        CHECK(dist4(t2.endpoint(), closed) <= 10 * opts.tol * (1.0 + q0.norm()));
    }
}

TEST_CASE("q2 field is periodic over 2*pi")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    for (int n = 0; n < 5; ++n) {
        const PhasePoint p0 = random_point();
        const Trajectory tr = integrate_adaptive({0.0, 1.0}, p0, kTwoPi, opts);
        CHECK(dist4(tr.endpoint(), p0) <= 1e-9);
    }
}

TEST_CASE("zero-span integration returns a single node")
{
    IntegratorOptions opts;
    const PhasePoint p0 = random_point();
    const Trajectory tr = integrate_adaptive({1.0, 0.0}, p0, 0.0, opts);
    CHECK(tr.nodes().size() == 1);
    CHECK(dist4(tr.endpoint(), p0) == 0.0);
}

TEST_CASE("tolerance precondition is enforced")
{
    IntegratorOptions opts;
    opts.tol = 1e-2;
    CHECK_THROWS_AS(integrate_adaptive({1.0, 0.0}, random_point(), 1.0, opts), ValidationError);
    opts.tol = 1e-14;
    CHECK_THROWS_AS(integrate_adaptive({1.0, 0.0}, random_point(), 1.0, opts), ValidationError);
}

TEST_CASE("momentum conservation along accepted nodes")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    std::uniform_real_distribution<double> uc(-0.6, 0.6);
    const LinearField field{1.0, uc(rng)};
    const PhasePoint p0 = random_point();
    const RegularValue c0 = momentum_map(p0);
    const Trajectory tr = integrate_adaptive(field, p0, 4.0, opts);
    for (const auto& node : tr.nodes()) {
        const RegularValue c = momentum_map(node.y);
        CHECK(std::hypot(c.c1 - c0.c1, c.c2 - c0.c2) <= 100 * opts.tol);
    }
}

TEST_CASE("dense output interpolates the trajectory")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    const PhasePoint p0 = random_point();
    const Trajectory tr = integrate_adaptive({1.0, 0.3}, p0, 2.0, opts);
    std::uniform_real_distribution<double> ut(0.0, 2.0);
    for (int n = 0; n < 25; ++n) {
        const double t = ut(rng);
        const PhasePoint interp = tr.eval(t);
        const PhasePoint closed = normal_form_flow(p0, {t, 0.3 * t});
        CHECK(dist4(interp, closed) <= 1e-6 * (1.0 + closed.norm()));
    }
}

TEST_CASE("event location hits the section to 1e-10")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    // q1 flow from (0.1, 1): |z1| reaches 1 at t = ln 10
    const PhasePoint p0(std::complex<double>(0.1, 0), std::complex<double>(1, 0));
    const EventSpec ev{[](const PhasePoint& p) { return std::log(std::abs(p.z1())); }, +1};
    const EventHit hit = locate_event({1.0, 0.0}, p0, ev, 6.0, opts);
    CHECK(hit.t == doctest::Approx(2.302585092994046).epsilon(1e-9));
    CHECK(std::abs(ev.g(hit.p)) <= 1e-10);
}

TEST_CASE("event with wrong initial direction picks the first later crossing")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    // rotation: y(t) = sin t starting at the section y = 0 moving upward;
    // the first downward crossing is at t = pi, not t = 0
    const PhasePoint p0(std::complex<double>(1, 0), std::complex<double>(0, 0));
    const EventSpec ev{[](const PhasePoint& p) { return p.y; }, -1};
    const EventHit hit = locate_event({0.0, 1.0}, p0, ev, 8.0, opts);
    CHECK(hit.t == doctest::Approx(kTwoPi / 2).epsilon(1e-9));
}

TEST_CASE("missing crossing raises a numeric error")
{
    IntegratorOptions opts;
    opts.tol = 1e-10;
    const PhasePoint p0(std::complex<double>(1, 0), std::complex<double>(0, 0));
    const EventSpec never{[](const PhasePoint& p) { return std::abs(p.z1()) + 1.0; }, +1};
    CHECK_THROWS_AS(locate_event({0.0, 1.0}, p0, never, 5.0, opts), NumericError);
}
