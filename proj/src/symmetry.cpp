#include "ffinv/symmetry.hpp"

#include <cmath>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

TruncatedSeries2 apply_flip_action(const TruncatedSeries2& t, ChartFlip which)
{
    TruncatedSeries2 out(t.degree());
    for (auto [i, j] : TruncatedSeries2::exponents(t.degree())) {
        if (which == ChartFlip::flip_q2)
            out.at(i, j) = (j % 2 == 0 ? 1.0 : -1.0) * t.at(i, j);
        else
            out.at(i, j) = -(i % 2 == 0 ? 1.0 : -1.0) * t.at(i, j);
    }
    if (which == ChartFlip::flip_q1)
        out.at(0, 1) -= kTwoPi / 2.0;
    return out;
}

} // namespace

SymmetryReport symmetry_check(const SystemView& view, ChartFlip which, const GridSpec& grid,
                              int fit_degree)
{
    if (which == ChartFlip::none)
        throw ValidationError("symmetry_check: pick one of the two chart flips");
    if (view.flip != ChartFlip::none)
        throw ValidationError("symmetry_check: base view must be unflipped");
    if (view.pinch_count() != 1)
        throw ValidationError("symmetry_check: chart conjugation is defined for single-pinch "
                              "systems");

    SymmetryReport rep;
    rep.baseline = fit_invariant(sample_grid(view, grid), fit_degree).series;

    SystemView flipped_view = view;
    flipped_view.flip = which;
    rep.flipped = fit_invariant(sample_grid(flipped_view, grid), fit_degree).series;

    rep.recovered = apply_flip_action(rep.flipped, which);
    rep.max_deviation = coefficient_distance(rep.recovered, rep.baseline, true);
    return rep;
}

} // namespace ffinv
