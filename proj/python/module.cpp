#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ffinv/config.hpp"
#include "ffinv/errors.hpp"
#include "ffinv/monodromy.hpp"
#include "ffinv/runners.hpp"

namespace py = pybind11;
using namespace ffinv;

namespace {

TruncatedSeries2 series_from_triples(const std::vector<std::tuple<int, int, double>>& triples)
{
    int degree = 1;
    std::vector<SeriesTriple> ts;
    for (auto& [i, j, v] : triples) {
        degree = std::max(degree, i + j);
        ts.push_back({i, j, v});
    }
    return TruncatedSeries2(degree, ts);
}

std::vector<std::tuple<int, int, double>> triples_of(const TruncatedSeries2& s)
{
    std::vector<std::tuple<int, int, double>> out;
    for (const auto& t : s.triples())
        out.emplace_back(t.i, t.j, t.value);
    return out;
}

ModelFoliation build_model_py(const std::vector<std::tuple<int, int, double>>& series,
                              double epsilon, int k,
                              const std::vector<std::vector<std::tuple<int, int, double>>>& trans,
                              double collar_margin)
{
    std::vector<TransitionSeries> tr;
    for (const auto& t : trans)
        tr.push_back({series_from_triples(t)});
    return build_model(series_from_triples(series), epsilon, k, tr, collar_margin);
}

SystemView view_of(const ModelFoliation& m, const std::string& backend, double tol)
{
    SystemView v;
    v.model = &m;
    v.backend = backend == "numeric" ? Backend::numeric : Backend::analytic;
    v.integrator.tol = tol;
    v.min_abs_c = 0.0;
    return v;
}

} // namespace

PYBIND11_MODULE(_ffinv, m)
{
    m.doc() = "Focus-focus model systems and their semi-global invariants";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<ModelFoliation>(m, "ModelFoliation")
        .def_property_readonly("epsilon", &ModelFoliation::epsilon)
        .def_property_readonly("pinch_count", &ModelFoliation::pinch_count)
        .def("composed_total_series",
             [](const ModelFoliation& mf) { return triples_of(mf.composed_total_series()); });

    m.def("build_model", &build_model_py, py::arg("series"), py::arg("epsilon") = 0.4,
          py::arg("k") = 1,
          py::arg("transitions") = std::vector<std::vector<std::tuple<int, int, double>>>{},
          py::arg("collar_margin") = 0.2,
          "Build the glued model from [(i, j, value), ...] series triples");

    m.def(
        "momentum_map",
        [](double x, double y, double xi, double eta) {
            const RegularValue c = momentum_map(PhasePoint{x, y, xi, eta});
            return std::make_pair(c.c1, c.c2);
        },
        py::arg("x"), py::arg("y"), py::arg("xi"), py::arg("eta"));

    m.def(
        "normal_form_flow",
        [](std::tuple<double, double, double, double> p, double t1, double t2) {
            const PhasePoint q = normal_form_flow(
                {std::get<0>(p), std::get<1>(p), std::get<2>(p), std::get<3>(p)}, {t1, t2});
            return std::make_tuple(q.x, q.y, q.xi, q.eta);
        },
        py::arg("point"), py::arg("t1"), py::arg("t2"));

    m.def(
        "section_points",
        [](const ModelFoliation& mf, double c1, double c2, int segment) {
            auto [p1, p2] = section_points(mf, {c1, c2}, segment);
            return std::make_pair(std::make_tuple(p1.x, p1.y, p1.xi, p1.eta),
                                  std::make_tuple(p2.x, p2.y, p2.xi, p2.eta));
        },
        py::arg("model"), py::arg("c1"), py::arg("c2"), py::arg("segment") = 0,
        "Entry and exit section points over a regular value");

    m.def(
        "glue_map",
        [](const ModelFoliation& mf, std::tuple<double, double, double, double> p, int segment) {
            const PhasePoint q = glue_map(
                mf, segment, {std::get<0>(p), std::get<1>(p), std::get<2>(p), std::get<3>(p)});
            return std::make_tuple(q.x, q.y, q.xi, q.eta);
        },
        py::arg("model"), py::arg("point"), py::arg("segment") = 0,
        "Gluing diffeomorphism: entry-side collar point to its exit-side representation");

    m.def(
        "analytic_return_times",
        [](const ModelFoliation& mf, double c1, double c2) {
            const JointTime t = analytic_return_times(mf, {c1, c2});
            return std::make_pair(t.t1, t.t2);
        },
        py::arg("model"), py::arg("c1"), py::arg("c2"));

    m.def(
        "numeric_return_times",
        [](const ModelFoliation& mf, double c1, double c2, double tol) {
            IntegratorOptions opts;
            opts.tol = tol;
            const JointTime t = numeric_return_times(mf, {c1, c2}, opts, 0.0);
            return std::make_pair(t.t1, t.t2);
        },
        py::arg("model"), py::arg("c1"), py::arg("c2"), py::arg("tol") = 1e-10);

    m.def(
        "extract_series",
        [](const ModelFoliation& mf, const std::string& backend, double r_min, double r_max,
           int n_r, int n_theta, int degree, double tol) {
            const SystemView v = view_of(mf, backend, tol);
            const auto samples = sample_grid(v, {r_min, r_max, n_r, n_theta});
            return triples_of(fit_invariant(samples, degree).series);
        },
        py::arg("model"), py::arg("backend") = "analytic", py::arg("r_min") = 0.02,
        py::arg("r_max") = 0.2, py::arg("n_r") = 16, py::arg("n_theta") = 32,
        py::arg("degree") = 4, py::arg("tol") = 1e-10,
        "Sample the annulus, fit the invariant, return [(i, j, value), ...]");

    m.def(
        "monodromy_matrix",
        [](const ModelFoliation& mf, double radius, int n_theta, double center1, double center2,
           const std::string& backend, double tol) {
            const SystemView v = view_of(mf, backend, tol);
            MonodromyOptions opts;
            opts.center = {center1, center2};
            opts.radius = radius;
            opts.n_theta = n_theta;
            const auto res = monodromy_matrix(v, opts);
            return std::make_tuple(
                std::make_pair(res.matrix[0][0], res.matrix[0][1]),
                std::make_pair(res.matrix[1][0], res.matrix[1][1]));
        },
        py::arg("model"), py::arg("radius"), py::arg("n_theta") = 64, py::arg("center1") = 0.0,
        py::arg("center2") = 0.0, py::arg("backend") = "analytic", py::arg("tol") = 1e-10);

    m.def(
        "run_config",
        [](const std::string& json_text) {
            const RunConfig cfg = parse_config(json_text);
            std::ostringstream log;
            const ExtractResult res = run_extract(cfg, log);
            return res.report.dump(2);
        },
        py::arg("json_text"), "Run the full extract pipeline from a config document");
}
