#ifndef FFINV_PHASE_HPP
#define FFINV_PHASE_HPP

#include <array>
#include <cmath>
#include <complex>

namespace ffinv {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduce an angle to the half-open interval [0, 2*pi).
inline double wrap_angle(double t)
{
    double r = std::fmod(t, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    if (r >= kTwoPi) // fmod can round up to the period itself
        r = 0.0;
    return r;
}

/// Point of R^4 in the canonical coordinates (x, y, xi, eta).
/// The complex views z1 = x + iy and z2 = xi + i*eta are assembled on
/// demand so the coordinate <-> complex round trip is bit-exact.
struct PhasePoint {
    double x = 0.0, y = 0.0, xi = 0.0, eta = 0.0;

    PhasePoint() = default;
    PhasePoint(double x_, double y_, double xi_, double eta_) : x(x_), y(y_), xi(xi_), eta(eta_) {}
    PhasePoint(std::complex<double> z1, std::complex<double> z2)
        : x(z1.real()), y(z1.imag()), xi(z2.real()), eta(z2.imag()) {}

    std::complex<double> z1() const { return {x, y}; }
    std::complex<double> z2() const { return {xi, eta}; }

    std::array<double, 4> coords() const { return {x, y, xi, eta}; }

    double norm() const { return std::sqrt(x * x + y * y + xi * xi + eta * eta); }
};

/// Value of the momentum map, identified with c1 + i*c2.
struct RegularValue {
    double c1 = 0.0, c2 = 0.0;

    RegularValue() = default;
    RegularValue(double a, double b) : c1(a), c2(b) {}
    explicit RegularValue(std::complex<double> c) : c1(c.real()), c2(c.imag()) {}

    std::complex<double> as_complex() const { return {c1, c2}; }
    double modulus() const { return std::hypot(c1, c2); }

    /// Argument in [0, 2*pi); the branch convention used throughout.
    double argument() const
    {
        double a = std::atan2(c2, c1);
        return a < 0.0 ? a + kTwoPi : a;
    }
};

/// Joint flow time (t1 for the H1 flow, t2 for the S^1 flow of H2).
struct JointTime {
    double t1 = 0.0, t2 = 0.0;

    JointTime() = default;
    JointTime(double a, double b) : t1(a), t2(b) {}

    JointTime operator+(const JointTime& o) const { return {t1 + o.t1, t2 + o.t2}; }
    JointTime operator-(const JointTime& o) const { return {t1 - o.t1, t2 - o.t2}; }
    JointTime operator-() const { return {-t1, -t2}; }
    JointTime operator*(double s) const { return {s * t1, s * t2}; }
};

/// Momentum map of the focus-focus normal form: q1 + i*q2 = conj(z1) * z2,
/// i.e. q1 = x*xi + y*eta and q2 = x*eta - y*xi.
inline RegularValue momentum_map(const PhasePoint& p)
{
    return {p.x * p.xi + p.y * p.eta, p.x * p.eta - p.y * p.xi};
}

/// Closed-form joint flow: (z1, z2) -> (e^{t1+it2} z1, e^{-t1+it2} z2).
/// t2 is reduced modulo 2*pi first, so t2 = 2*pi is exactly the identity.
PhasePoint normal_form_flow(const PhasePoint& p, const JointTime& t);

/// Hamiltonian vector field of q1 at p, in (x, y, xi, eta) components.
inline PhasePoint q1_field(const PhasePoint& p) { return {p.x, p.y, -p.xi, -p.eta}; }

/// Hamiltonian vector field of q2 at p (the S^1 generator).
inline PhasePoint q2_field(const PhasePoint& p) { return {-p.y, p.x, -p.eta, p.xi}; }

struct FieldPair {
    PhasePoint v1; // velocity of the q1 flow
    PhasePoint v2; // velocity of the q2 flow
};

/// Both flow velocities at p.
inline FieldPair hamiltonian_fields(const PhasePoint& p) { return {q1_field(p), q2_field(p)}; }

} // namespace ffinv

#endif
