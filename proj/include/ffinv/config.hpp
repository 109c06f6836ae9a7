#ifndef FFINV_CONFIG_HPP
#define FFINV_CONFIG_HPP

#include <cstdint>
#include <string>

#include "ffinv/invariant.hpp"
#include "ffinv/model.hpp"

namespace ffinv {

struct ModelConfig {
    TruncatedSeries2 series{1};
    double epsilon = 0.4;
    int k = 1;
    std::vector<TransitionSeries> transitions;
    Backend backend = Backend::analytic;
    double collar_margin = 0.2;
};

struct FitConfig {
    int degree = 4;
    double residual_ceiling = 1e-4;
};

struct IntegratorConfig {
    double tol = 1e-10;
    long max_steps = 200000;
    double min_abs_c = 0.0; // filled with 0.02 * epsilon when absent
};

struct OutputConfig {
    std::string directory = ".";
    bool emit_csv = true;
    bool emit_svg = true;
};

struct MonodromyConfig {
    RegularValue center{0.0, 0.0};
    double radius = 0.0; // filled with the mid-annulus radius when absent
    int n_theta = 64;
};

struct RunConfig {
    ModelConfig model;
    GridSpec grid; // r_min/r_max filled from epsilon when absent
    FitConfig fit;
    IntegratorConfig integrator;
    OutputConfig output;
    MonodromyConfig monodromy;
    std::uint64_t seed = 20260809;
};

/// Parse a config document (JSON syntax, fixed blocks). Unknown keys are
/// errors, not warnings. Defaults: grid [0.05*eps, 0.5*eps] with 16 x 32
/// points, fit degree 4, integrator tol 1e-10 with min |c| = 0.02*eps.
RunConfig parse_config(const std::string& json_text);

RunConfig load_config(const std::string& path);

/// Range checks per module preconditions, run before any work starts.
void validate_config(const RunConfig& cfg);

/// Serialization helpers shared by config and reports.
TruncatedSeries2 series_from_triples_json(const std::string& json_array_text);

} // namespace ffinv

#endif
