#ifndef FFINV_SYMMETRY_HPP
#define FFINV_SYMMETRY_HPP

#include "ffinv/invariant.hpp"
#include "ffinv/system.hpp"

namespace ffinv {

struct SymmetryReport {
    TruncatedSeries2 baseline{1};  // fit through the unmodified chart
    TruncatedSeries2 flipped{1};   // fit through the composed chart
    TruncatedSeries2 recovered{1}; // flipped fit mapped back through the flip action
    double max_deviation = 0.0;    // coefficient distance recovered vs baseline
};

/// Re-run the extraction with the chart composed with the chosen
/// symplectomorphism and the matching sign change of the base coordinates,
/// then compare fitted coefficients against the plain extraction.
///
/// Composing with (x, xi) -> (-x, -xi) sends the fitted series T to
/// T(X, -Y); composing with (z1, z2) -> (-z2, z1) sends it to
/// -T(-X, Y) - pi*Y (the reversed H1 orientation negates the series and the
/// flipped branch convention shifts the Y coefficient by pi, modulo 2*pi).
/// Both actions are involutions; the check applies the action to the
/// flipped fit and differences against the baseline, comparing the (0,1)
/// coefficient modulo 2*pi.
SymmetryReport symmetry_check(const SystemView& view, ChartFlip which, const GridSpec& grid,
                              int fit_degree);

} // namespace ffinv

#endif
