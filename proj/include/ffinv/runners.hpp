#ifndef FFINV_RUNNERS_HPP
#define FFINV_RUNNERS_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ffinv/config.hpp"
#include "ffinv/invariant.hpp"
#include "ffinv/monodromy.hpp"
#include "ffinv/multipinch.hpp"
#include "ffinv/symmetry.hpp"

namespace ffinv {

// pass/fail thresholds for the batch commands
inline constexpr double kRoundtripTolAnalytic = 1e-8;
inline constexpr double kRoundtripTolNumeric = 1e-6;
inline constexpr double kMultipinchSeriesTolAnalytic = 1e-8;
inline constexpr double kMultipinchSeriesTolNumeric = 1e-6;
inline constexpr double kOffsetInvarianceTol = 1e-9;
inline constexpr double kSymmetryTolAnalytic = 1e-8;
inline constexpr double kSymmetryTolNumeric = 1e-6;

struct ExtractResult {
    ModelFoliation model;
    std::vector<PeriodSample> samples;
    FitResult fit;
    MonodromyResult monodromy;
    double closedness = 0.0;
    double ray_check = 0.0; // ray quadrature vs direct evaluation of the fit
    nlohmann::ordered_json report;
};

SystemView make_view(const RunConfig& cfg, const ModelFoliation& model);

/// Full extraction pipeline without file output.
ExtractResult extract_invariant(const RunConfig& cfg);

/// Write report.json, samples.csv and the diagnostic SVGs per the output
/// block. Returns the report path.
std::string write_artifacts(const RunConfig& cfg, const ExtractResult& res);

/// extract + artifacts + residual-ceiling enforcement.
ExtractResult run_extract(const RunConfig& cfg, std::ostream& log);

struct RoundtripResult {
    TruncatedSeries2 target{1};
    TruncatedSeries2 fitted{1};
    double max_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Build the model from the prescribed series, extract, compare
/// coefficient-wise (the (0,1) slot modulo 2*pi).
RoundtripResult run_roundtrip(const RunConfig& cfg, std::ostream& log);

MonodromyResult run_monodromy(const RunConfig& cfg, std::ostream& log);

struct MultipinchRunResult {
    MultipinchResult details;
    TruncatedSeries2 fitted{1};
    TruncatedSeries2 target{1};
    double composed_err = 0.0;
    bool pass = false;
};

/// Cocycle-sum pipeline for k >= 2: sample the summed sigma, fit, compare
/// with the composed forward series, and measure invariance under random
/// section offsets drawn from the config seed (|dt| <= 0.1).
MultipinchRunResult run_multipinch(const RunConfig& cfg, std::ostream& log);

struct SymmetryRunResult {
    double deviation_flip_q2 = 0.0;
    double deviation_flip_q1 = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

SymmetryRunResult run_symmetry(const RunConfig& cfg, std::ostream& log);

} // namespace ffinv

#endif
