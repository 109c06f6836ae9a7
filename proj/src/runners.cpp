#include "ffinv/runners.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "ffinv/errors.hpp"
#include "ffinv/svg.hpp"

namespace ffinv {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string num17(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json series_json(const TruncatedSeries2& s)
{
    ordered_json arr = ordered_json::array();
    for (const auto& t : s.triples())
        arr.push_back(ordered_json::array({t.i, t.j, t.value}));
    return arr;
}

double closedness_step(const GridSpec& grid)
{
    return std::min(0.01, (grid.r_max - grid.r_min) / 4.0);
}

std::vector<JointTime> seeded_offsets(std::uint64_t seed, int k, double bound)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<JointTime> out(k);
    for (auto& t : out) {
        t.t1 = u(rng);
        t.t2 = u(rng);
    }
    return out;
}

} // namespace

SystemView make_view(const RunConfig& cfg, const ModelFoliation& model)
{
    SystemView v;
    v.model = &model;
    v.backend = cfg.model.backend;
    v.integrator.tol = cfg.integrator.tol;
    v.integrator.max_steps = cfg.integrator.max_steps;
    v.min_abs_c = cfg.integrator.min_abs_c;
    return v;
}

ExtractResult extract_invariant(const RunConfig& cfg)
{
    validate_config(cfg);
    ExtractResult res;
    res.model = build_model(cfg.model.series, cfg.model.epsilon, cfg.model.k,
                            cfg.model.transitions, cfg.model.collar_margin, cfg.model.backend);
    const SystemView view = make_view(cfg, res.model);

    res.samples = sample_grid(view, cfg.grid);
    res.fit = fit_invariant(res.samples, cfg.fit.degree);

    const double r_lo = cfg.model.backend == Backend::numeric
                            ? std::max(cfg.grid.r_min, cfg.integrator.min_abs_c)
                            : cfg.grid.r_min;
    const std::size_t cap = cfg.model.backend == Backend::numeric ? 12 : 0;
    res.closedness = closedness_residual(view, closedness_step(cfg.grid), r_lo, cfg.grid.r_max, cap);

    MonodromyOptions mono;
    mono.center = cfg.monodromy.center;
    mono.radius = cfg.monodromy.radius;
    mono.n_theta = cfg.monodromy.n_theta;
    res.monodromy = monodromy_matrix(view, mono);

    for (std::size_t n = 0; n < res.samples.size();
         n += std::max<std::size_t>(1, res.samples.size() / 8)) {
        const RegularValue& c = res.samples[n].c;
        res.ray_check = std::max(res.ray_check, std::abs(eval_S_along_ray(res.fit.series, c) -
                                                         res.fit.series.eval(c)));
    }

    ordered_json rep;
    rep["fitted_series"] = series_json(res.fit.series);
    rep["fit_degree"] = res.fit.degree;
    rep["sample_count"] = res.fit.sample_count;
    rep["annulus"] = {{"r_min", cfg.grid.r_min}, {"r_max", cfg.grid.r_max}};
    rep["rms_residual"] = res.fit.rms_residual;
    rep["closedness_residual"] = res.closedness;
    rep["condition"] = res.fit.condition;
    rep["monodromy"] = {{res.monodromy.matrix[0][0], res.monodromy.matrix[0][1]},
                        {res.monodromy.matrix[1][0], res.monodromy.matrix[1][1]}};
    rep["sigma2_zero"] = res.fit.sigma2_zero;
    rep["action_note"] = "S(c) = A(c) - A(0) + Re(c*log(c) - c), with the convention A(0) := 0";
    res.report = rep;

    if (!(res.fit.sigma2_zero >= 0.0 && res.fit.sigma2_zero < kTwoPi))
        throw NumericError("extract: sigma2(0) representative left [0, 2*pi)");
    return res;
}

std::string write_artifacts(const RunConfig& cfg, const ExtractResult& res)
{
    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);

    const fs::path report_path = dir / "report.json";
    {
        std::ofstream out(report_path);
        if (!out)
            throw NumericError("cannot write " + report_path.string());
        out << res.report.dump(2) << "\n";
    }

    if (cfg.output.emit_csv) {
        std::ofstream out(dir / "samples.csv");
        if (!out)
            throw NumericError("cannot write samples.csv");
        out << "c1,c2,tau1,tau2,sigma1,sigma2,source,err_estimate\n";
        for (const auto& s : res.samples)
            out << num17(s.c.c1) << "," << num17(s.c.c2) << "," << num17(s.tau.t1) << ","
                << num17(s.tau.t2) << "," << num17(s.sigma1) << "," << num17(s.sigma2) << ","
                << (s.source == SampleSource::analytic ? "analytic" : "numeric") << ","
                << num17(s.err_estimate) << "\n";
    }

    if (cfg.output.emit_svg) {
        // radial profiles of sigma, one curve per grid angle
        SvgPanel p1{"sigma1 radial profiles", "|c|", "sigma1", {}, false};
        SvgPanel p2{"sigma2 radial profiles", "|c|", "sigma2", {}, false};
        for (int it = 0; it < cfg.grid.n_theta; ++it) {
            SvgCurve c1, c2;
            const int hue = (360 * it) / cfg.grid.n_theta;
            c1.color = "hsl(" + std::to_string(hue) + ",60%,45%)";
            c2.color = c1.color;
            for (int ir = 0; ir < cfg.grid.n_r; ++ir) {
                const auto& s = res.samples[static_cast<std::size_t>(ir) * cfg.grid.n_theta + it];
                c1.points.emplace_back(s.c.modulus(), s.sigma1);
                c2.points.emplace_back(s.c.modulus(), s.sigma2);
            }
            p1.curves.push_back(std::move(c1));
            p2.curves.push_back(std::move(c2));
        }
        write_svg((dir / "sigma_radial.svg").string(), {p1, p2});

        // coefficient error against the prescribed (composed) series per degree
        const TruncatedSeries2 target = res.model.composed_total_series();
        SvgCurve conv;
        conv.label = "max coefficient error";
        for (int d = 1; d <= cfg.fit.degree; ++d) {
            const FitResult f = fit_invariant(res.samples, d);
            conv.points.emplace_back(d, coefficient_distance(f.series, target) + 1e-17);
        }
        write_svg((dir / "coeff_convergence.svg").string(),
                  {SvgPanel{"coefficient error vs fit degree", "fit degree", "max abs error",
                            {conv}, true}});
    }
    return report_path.string();
}

ExtractResult run_extract(const RunConfig& cfg, std::ostream& log)
{
    ExtractResult res = extract_invariant(cfg);
    const std::string path = write_artifacts(cfg, res);
    log << "report: " << path << "\n"
        << "rms residual: " << res.fit.rms_residual
        << "  closedness: " << res.closedness << "  sigma2(0): " << res.fit.sigma2_zero << "\n";
    if (res.fit.rms_residual > cfg.fit.residual_ceiling)
        throw NumericError("extract: rms residual " + num17(res.fit.rms_residual) +
                           " above fit.residual_ceiling (model/backend inconsistency)");
    return res;
}

RoundtripResult run_roundtrip(const RunConfig& cfg, std::ostream& log)
{
    RunConfig quiet = cfg;
    quiet.output.emit_csv = false;
    quiet.output.emit_svg = false;
    ExtractResult res = extract_invariant(quiet);

    RoundtripResult rt;
    rt.target = res.model.composed_total_series();
    rt.fitted = res.fit.series;
    rt.max_err = coefficient_distance(rt.fitted, rt.target);
    rt.tolerance = cfg.model.backend == Backend::analytic ? kRoundtripTolAnalytic
                                                          : kRoundtripTolNumeric;
    rt.pass = rt.max_err <= rt.tolerance;
    log << (rt.pass ? "PASS" : "FAIL") << " roundtrip: max coefficient error " << rt.max_err
        << " (tolerance " << rt.tolerance << ")\n";
    return rt;
}

MonodromyResult run_monodromy(const RunConfig& cfg, std::ostream& log)
{
    validate_config(cfg);
    const ModelFoliation model =
        build_model(cfg.model.series, cfg.model.epsilon, cfg.model.k, cfg.model.transitions,
                    cfg.model.collar_margin, cfg.model.backend);
    const SystemView view = make_view(cfg, model);

    MonodromyOptions mono;
    mono.center = cfg.monodromy.center;
    mono.radius = cfg.monodromy.radius;
    mono.n_theta = cfg.monodromy.n_theta;
    const MonodromyResult res = monodromy_matrix(view, mono);

    log << "[[" << res.matrix[0][0] << ", " << res.matrix[0][1] << "], [" << res.matrix[1][0]
        << ", " << res.matrix[1][1] << "]]\n"
        << "pre-rounding deviation: " << res.max_integer_deviation << "\n";

    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);
    ordered_json rep;
    rep["monodromy"] = {{res.matrix[0][0], res.matrix[0][1]},
                        {res.matrix[1][0], res.matrix[1][1]}};
    rep["max_integer_deviation"] = res.max_integer_deviation;
    rep["loop"] = {{"center", {cfg.monodromy.center.c1, cfg.monodromy.center.c2}},
                   {"radius", cfg.monodromy.radius},
                   {"n_theta", cfg.monodromy.n_theta}};
    std::ofstream out(dir / "monodromy.json");
    out << rep.dump(2) << "\n";
    return res;
}

MultipinchRunResult run_multipinch(const RunConfig& cfg, std::ostream& log)
{
    validate_config(cfg);
    if (cfg.model.k < 2)
        throw ValidationError("multipinch: model.k must be >= 2");
    const ModelFoliation model =
        build_model(cfg.model.series, cfg.model.epsilon, cfg.model.k, cfg.model.transitions,
                    cfg.model.collar_margin, cfg.model.backend);
    const SystemView view = make_view(cfg, model);

    const std::vector<JointTime> offsets = seeded_offsets(cfg.seed, cfg.model.k, 0.1);

    MultipinchRunResult res;
    res.details = multipinch_sigma_sum(view, offsets, cfg.grid);
    if (cfg.model.backend == Backend::numeric) {
        // the offset telescoping is a closed-form identity; measure it
        // analytically alongside the numeric samples
        SystemView aview = view;
        aview.backend = Backend::analytic;
        res.details.max_offset_shift =
            multipinch_sigma_sum(aview, offsets, cfg.grid).max_offset_shift;
    }

    res.fitted = fit_invariant(res.details.samples, cfg.fit.degree).series;
    res.target = model.composed_total_series();
    res.composed_err = coefficient_distance(res.fitted, res.target);

    const double series_tol = cfg.model.backend == Backend::analytic
                                  ? kMultipinchSeriesTolAnalytic
                                  : kMultipinchSeriesTolNumeric;
    res.pass = res.composed_err <= series_tol &&
               res.details.max_offset_shift <= kOffsetInvarianceTol;
    log << (res.pass ? "PASS" : "FAIL") << " multipinch: composed-series error "
        << res.composed_err << " (tolerance " << series_tol << "), offset invariance "
        << res.details.max_offset_shift << " (tolerance " << kOffsetInvarianceTol << ")\n";

    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);
    ordered_json rep;
    rep["fitted_series"] = series_json(res.fitted);
    rep["composed_series"] = series_json(res.target);
    rep["composed_error"] = res.composed_err;
    rep["offset_invariance"] = res.details.max_offset_shift;
    std::ofstream out(dir / "multipinch.json");
    out << rep.dump(2) << "\n";
    return res;
}

SymmetryRunResult run_symmetry(const RunConfig& cfg, std::ostream& log)
{
    validate_config(cfg);
    const ModelFoliation model =
        build_model(cfg.model.series, cfg.model.epsilon, cfg.model.k, cfg.model.transitions,
                    cfg.model.collar_margin, cfg.model.backend);
    const SystemView view = make_view(cfg, model);

    SymmetryRunResult res;
    res.deviation_flip_q2 =
        symmetry_check(view, ChartFlip::flip_q2, cfg.grid, cfg.fit.degree).max_deviation;
    res.deviation_flip_q1 =
        symmetry_check(view, ChartFlip::flip_q1, cfg.grid, cfg.fit.degree).max_deviation;
    res.tolerance = cfg.model.backend == Backend::analytic ? kSymmetryTolAnalytic
                                                           : kSymmetryTolNumeric;
    res.pass = res.deviation_flip_q2 <= res.tolerance && res.deviation_flip_q1 <= res.tolerance;
    log << (res.pass ? "PASS" : "FAIL") << " symmetry: flip-q2 deviation "
        << res.deviation_flip_q2 << ", flip-q1 deviation " << res.deviation_flip_q1
        << " (tolerance " << res.tolerance << ")\n";

    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);
    ordered_json rep;
    rep["deviation_flip_q2"] = res.deviation_flip_q2;
    rep["deviation_flip_q1"] = res.deviation_flip_q1;
    rep["tolerance"] = res.tolerance;
    std::ofstream out(dir / "symmetry.json");
    out << rep.dump(2) << "\n";
    return res;
}

} // namespace ffinv
