#ifndef FFINV_MONODROMY_HPP
#define FFINV_MONODROMY_HPP

#include <array>

#include "ffinv/system.hpp"

namespace ffinv {

/// Z-basis of the period lattice at c: the transversal first-return
/// generator plus the S^1 generator, which is exactly (0, 2*pi).
struct PeriodLatticeBasis {
    RegularValue c;
    JointTime transversal;
    static JointTime circle_generator() { return {0.0, kTwoPi}; }
};

PeriodLatticeBasis period_lattice_basis(const SystemView& view, const RegularValue& c);

struct MonodromyOptions {
    RegularValue center{0.0, 0.0};
    double radius = 0.0;
    int n_theta = 64;
};

struct MonodromyResult {
    std::array<std::array<long, 2>, 2> matrix{{{1, 0}, {0, 1}}};
    double max_integer_deviation = 0.0; // pre-rounding distance to integers
};

/// Transport the basis around the loop center + r e^{i theta}, unwrapping
/// tau2 continuously, and express the transported basis in the initial one.
/// Any simple positive loop around the origin of a single-pinch model gives
/// [[1, 1], [0, 1]]; loops that do not enclose the origin give the identity.
MonodromyResult monodromy_matrix(const SystemView& view, const MonodromyOptions& opts);

} // namespace ffinv

#endif
