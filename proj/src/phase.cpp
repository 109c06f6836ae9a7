#include "ffinv/phase.hpp"

namespace ffinv {

PhasePoint normal_form_flow(const PhasePoint& p, const JointTime& t)
{
    // Reducing t2 first keeps the S^1 action exactly 2*pi-periodic.
    double t2 = std::remainder(t.t2, kTwoPi);
    const std::complex<double> rot(std::cos(t2), std::sin(t2));
    const double growth = std::exp(t.t1);
    const std::complex<double> z1 = growth * rot * p.z1();
    const std::complex<double> z2 = rot * p.z2() / growth;
    return {z1, z2};
}

} // namespace ffinv
