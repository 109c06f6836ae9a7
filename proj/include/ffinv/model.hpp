#ifndef FFINV_MODEL_HPP
#define FFINV_MODEL_HPP

#include <complex>
#include <utility>
#include <vector>

#include "ffinv/phase.hpp"
#include "ffinv/series.hpp"

namespace ffinv {

enum class Backend { analytic, numeric };

/// Chart transition between consecutive segments, G(c) = (c1 + h(c), c2).
/// The deviation h may carry a nonzero (1,0) coefficient as long as the
/// first-component derivative 1 + h_10 stays positive.
struct TransitionSeries {
    TruncatedSeries2 h{1};
};

/// Derivative data of a value map of the form c -> (m(c), c2):
/// its Jacobian is [[p, q], [0, 1]].
struct MapSlope {
    double p = 1.0;
    double q = 0.0;
};

/// Glued model foliation: k normal-form segments on a base disc of radius
/// epsilon, chained by the transitions, with the prescribed series carried
/// by the closing segment and all other segment series zero.
class ModelFoliation {
public:
    ModelFoliation() = default;

    const TruncatedSeries2& invariant() const { return invariant_; }
    double epsilon() const { return epsilon_; }
    int pinch_count() const { return pinch_count_; }
    const std::vector<TransitionSeries>& transitions() const { return transitions_; }
    double collar_margin() const { return collar_margin_; }
    Backend default_backend() const { return default_backend_; }

    /// Gradient of segment i's gluing series at a local value (zero for
    /// every segment except the closing one).
    std::pair<double, double> segment_gradient(int segment, const RegularValue& local) const;

    /// Local momentum value of segment i for base value u.
    RegularValue local_value(int segment, const RegularValue& base) const;

    /// Invert local_value (Newton on the first component).
    RegularValue base_value(int segment, const RegularValue& local) const;

    /// Slope of the base -> segment-i value map at base value u.
    MapSlope chart_slope(int segment, const RegularValue& base) const;

    /// Slope of the value map across gluing i (segment i to i+1 mod k),
    /// evaluated at segment i's local value.
    MapSlope gluing_slope(int segment, const RegularValue& local) const;

    /// Local value on the far side of gluing i.
    RegularValue next_local_value(int segment, const RegularValue& local) const;

    /// Local value on the near side of gluing i given the far side.
    RegularValue prev_local_value(int segment, const RegularValue& next_local) const;

    /// Total polynomial the extraction pipeline should recover: the sum of
    /// segment series composed with the base -> segment value maps.
    TruncatedSeries2 composed_total_series() const;

    friend ModelFoliation build_model(const TruncatedSeries2&, double, int,
                                      const std::vector<TransitionSeries>&, double, Backend);

private:
    TruncatedSeries2 invariant_{1};
    double epsilon_ = 0.5;
    int pinch_count_ = 1;
    std::vector<TransitionSeries> transitions_;
    double collar_margin_ = 0.2;
    Backend default_backend_ = Backend::analytic;

    Poly2 s_dx_, s_dy_;                  // gradient of the prescribed series
    std::vector<Poly2> chart_, chart_du1_, chart_du2_; // psi_i first component and partials
};

/// Validate inputs and assemble the model (composed chart maps included).
ModelFoliation build_model(const TruncatedSeries2& invariant, double epsilon, int pinch_count,
                           const std::vector<TransitionSeries>& transitions,
                           double collar_margin = 0.2, Backend backend = Backend::analytic);

/// Section embeddings of segment i at a local regular value c:
/// P1(c) = (conj(c), 1) and P2(c) = (e^{S1+iS2}, c e^{-S1+iS2}) with
/// (S1, S2) the segment-series gradient at c. Both satisfy momentum_map = c.
std::pair<PhasePoint, PhasePoint> section_points(const ModelFoliation& m, const RegularValue& c,
                                                 int segment = 0);

/// Gluing re-representation in the flow direction: a chart-i point on or
/// above segment i's exit boundary becomes a chart-(i+1 mod k) point near
/// that segment's entry boundary. Used by the flow walkers.
std::pair<int, PhasePoint> glue_forward(const ModelFoliation& m, int segment, const PhasePoint& p,
                                        bool validate_collar = true);

/// The gluing diffeomorphism of the construction: takes the entry-side
/// representation (a chart-(i+1 mod k) point p in the collar of its entry
/// boundary), solves t1 + i t2 = log(z1(p) / z1(P1(c))) in closed form and
/// returns the exit-side representation flow(P2(c'), t') in chart i. For a
/// single pinch this is exactly P1(c) |-> P2(c) extended by flow
/// equivariance. Inverse of glue_forward.
PhasePoint glue_map(const ModelFoliation& m, int segment, const PhasePoint& p);

inline PhasePoint glue_map(const ModelFoliation& m, const PhasePoint& p)
{
    return glue_map(m, 0, p);
}

/// First-return time of the joint base flow on the leaf over base value c,
/// in closed form; t2 is reported in [0, 2*pi). For several pinches the
/// segment traverse times are transported to base time through the chart
/// Jacobians and summed.
JointTime analytic_return_times(const ModelFoliation& m, const RegularValue& c);

/// Closed-form transit time through the focus chart between the sections
/// {z2-orbit of modulus eps} and {z1-orbit of modulus eps}:
/// t1 + i t2 = ln eps^2 - ln conj(c), with t2 reported in [0, 2*pi).
JointTime inner_transit_time(double eps_section, const RegularValue& c);

/// A point of the glued manifold: a segment index plus the chart point in
/// that segment's fundamental domain. Points of the singular leaf (c = 0)
/// are carried on the two coordinate branches of the chart.
struct ModelPoint {
    int segment = 0;
    PhasePoint point;
};

/// Whether the chart point lies in its segment's half-open fundamental
/// domain (entry edge included, exit edge excluded).
bool in_fundamental_domain(const ModelFoliation& m, const ModelPoint& mp, double slack = 1e-12);

/// Flow a model point by a base joint time, applying the gluing each time
/// a fundamental-domain boundary is crossed.
ModelPoint model_flow(const ModelFoliation& m, const ModelPoint& start, const JointTime& t);

} // namespace ffinv

#endif
