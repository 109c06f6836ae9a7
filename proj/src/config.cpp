#include "ffinv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError(path + "." + it.key() + ": unknown key");
}

double need_number(const json& obj, const std::string& path, const char* key, double fallback,
                   bool* present = nullptr)
{
    if (!obj.contains(key)) {
        if (present)
            *present = false;
        return fallback;
    }
    if (present)
        *present = true;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ValidationError(path + "." + key + ": expected a number");
    return v.get<double>();
}

long need_integer(const json& obj, const std::string& path, const char* key, long fallback)
{
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ValidationError(path + "." + key + ": expected an integer");
    return v.get<long>();
}

bool need_bool(const json& obj, const std::string& path, const char* key, bool fallback)
{
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ValidationError(path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

TruncatedSeries2 parse_series(const json& arr, const std::string& path)
{
    if (!arr.is_array())
        throw ValidationError(path + ": expected an array of [i, j, value] triples");
    std::vector<SeriesTriple> triples;
    int degree = 1;
    for (std::size_t n = 0; n < arr.size(); ++n) {
        const json& t = arr[n];
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
            !t[1].is_number_integer() || !t[2].is_number())
            throw ValidationError(path + "[" + std::to_string(n) +
                                  "]: expected [i, j, value] with integer exponents");
        SeriesTriple s{t[0].get<int>(), t[1].get<int>(), t[2].get<double>()};
        if (s.i < 0 || s.j < 0 || s.i + s.j < 1)
            throw ValidationError(path + "[" + std::to_string(n) +
                                  "]: exponents must satisfy i, j >= 0 and i + j >= 1");
        degree = std::max(degree, s.i + s.j);
        triples.push_back(s);
    }
    return TruncatedSeries2(degree, triples);
}

} // namespace

TruncatedSeries2 series_from_triples_json(const std::string& json_array_text)
{
    json arr = json::parse(json_array_text, nullptr, false);
    if (arr.is_discarded())
        throw ValidationError("series: malformed JSON");
    return parse_series(arr, "series");
}

RunConfig parse_config(const std::string& json_text)
{
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded())
        throw ValidationError("config: malformed JSON document");
    if (!doc.is_object())
        throw ValidationError("config: top level must be an object");
    reject_unknown(doc, "config",
                   {"model", "grid", "fit", "integrator", "output", "monodromy", "seed"});

    RunConfig cfg;

    if (!doc.contains("model"))
        throw ValidationError("config.model: required block missing");
    {
        const json& m = doc.at("model");
        if (!m.is_object())
            throw ValidationError("model: expected an object");
        reject_unknown(m, "model",
                       {"series", "epsilon", "k", "transitions", "backend", "collar_margin"});
        if (m.contains("series"))
            cfg.model.series = parse_series(m.at("series"), "model.series");
        cfg.model.epsilon = need_number(m, "model", "epsilon", cfg.model.epsilon);
        cfg.model.k = static_cast<int>(need_integer(m, "model", "k", cfg.model.k));
        if (m.contains("transitions")) {
            const json& tr = m.at("transitions");
            if (!tr.is_array())
                throw ValidationError("model.transitions: expected an array of series");
            for (std::size_t n = 0; n < tr.size(); ++n)
                cfg.model.transitions.push_back(
                    {parse_series(tr[n], "model.transitions[" + std::to_string(n) + "]")});
        }
        if (m.contains("backend")) {
            const std::string b = m.at("backend").is_string()
                                      ? m.at("backend").get<std::string>()
                                      : std::string();
            if (b == "analytic")
                cfg.model.backend = Backend::analytic;
            else if (b == "numeric")
                cfg.model.backend = Backend::numeric;
            else
                throw ValidationError("model.backend: expected \"analytic\" or \"numeric\"");
        }
        cfg.model.collar_margin = need_number(m, "model", "collar_margin", cfg.model.collar_margin);
    }

    cfg.grid.r_min = 0.05 * cfg.model.epsilon;
    cfg.grid.r_max = 0.5 * cfg.model.epsilon;
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        if (!g.is_object())
            throw ValidationError("grid: expected an object");
        reject_unknown(g, "grid", {"r_min", "r_max", "n_r", "n_theta"});
        cfg.grid.r_min = need_number(g, "grid", "r_min", cfg.grid.r_min);
        cfg.grid.r_max = need_number(g, "grid", "r_max", cfg.grid.r_max);
        cfg.grid.n_r = static_cast<int>(need_integer(g, "grid", "n_r", cfg.grid.n_r));
        cfg.grid.n_theta = static_cast<int>(need_integer(g, "grid", "n_theta", cfg.grid.n_theta));
    }

    if (doc.contains("fit")) {
        const json& f = doc.at("fit");
        if (!f.is_object())
            throw ValidationError("fit: expected an object");
        reject_unknown(f, "fit", {"degree", "residual_ceiling"});
        cfg.fit.degree = static_cast<int>(need_integer(f, "fit", "degree", cfg.fit.degree));
        cfg.fit.residual_ceiling =
            need_number(f, "fit", "residual_ceiling", cfg.fit.residual_ceiling);
    }

    cfg.integrator.min_abs_c = 0.02 * cfg.model.epsilon;
    if (doc.contains("integrator")) {
        const json& it = doc.at("integrator");
        if (!it.is_object())
            throw ValidationError("integrator: expected an object");
        reject_unknown(it, "integrator", {"tol", "max_steps", "min_abs_c"});
        cfg.integrator.tol = need_number(it, "integrator", "tol", cfg.integrator.tol);
        cfg.integrator.max_steps = need_integer(it, "integrator", "max_steps",
                                                cfg.integrator.max_steps);
        cfg.integrator.min_abs_c =
            need_number(it, "integrator", "min_abs_c", cfg.integrator.min_abs_c);
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        if (!o.is_object())
            throw ValidationError("output: expected an object");
        reject_unknown(o, "output", {"directory", "emit_csv", "emit_svg"});
        if (o.contains("directory")) {
            if (!o.at("directory").is_string())
                throw ValidationError("output.directory: expected a string");
            cfg.output.directory = o.at("directory").get<std::string>();
        }
        cfg.output.emit_csv = need_bool(o, "output", "emit_csv", cfg.output.emit_csv);
        cfg.output.emit_svg = need_bool(o, "output", "emit_svg", cfg.output.emit_svg);
    }

    cfg.monodromy.radius = 0.5 * (cfg.grid.r_min + cfg.grid.r_max);
    if (doc.contains("monodromy")) {
        const json& mo = doc.at("monodromy");
        if (!mo.is_object())
            throw ValidationError("monodromy: expected an object");
        reject_unknown(mo, "monodromy", {"center", "radius", "n_theta"});
        if (mo.contains("center")) {
            const json& cc = mo.at("center");
            if (!cc.is_array() || cc.size() != 2 || !cc[0].is_number() || !cc[1].is_number())
                throw ValidationError("monodromy.center: expected [c1, c2]");
            cfg.monodromy.center = {cc[0].get<double>(), cc[1].get<double>()};
        }
        cfg.monodromy.radius = need_number(mo, "monodromy", "radius", cfg.monodromy.radius);
        cfg.monodromy.n_theta =
            static_cast<int>(need_integer(mo, "monodromy", "n_theta", cfg.monodromy.n_theta));
    }

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer())
            throw ValidationError("config.seed: expected an integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const RunConfig& cfg)
{
    // the model builder re-checks its own preconditions
    (void)build_model(cfg.model.series, cfg.model.epsilon, cfg.model.k, cfg.model.transitions,
                      cfg.model.collar_margin, cfg.model.backend);

    if (!(cfg.grid.r_min > 0.0) || !(cfg.grid.r_min < cfg.grid.r_max))
        throw ValidationError("grid: need 0 < r_min < r_max");
    if (!(cfg.grid.r_max < cfg.model.epsilon))
        throw ValidationError("grid.r_max: must be smaller than model.epsilon");
    if (cfg.grid.n_r < 2)
        throw ValidationError("grid.n_r: need at least 2 radii");
    if (cfg.grid.n_theta < 4)
        throw ValidationError("grid.n_theta: need at least 4 angles");

    if (cfg.fit.degree < 1)
        throw ValidationError("fit.degree: must be >= 1");
    if (!(cfg.fit.residual_ceiling > 0.0))
        throw ValidationError("fit.residual_ceiling: must be positive");

    if (!(cfg.integrator.tol >= 1e-13 && cfg.integrator.tol <= 1e-3))
        throw ValidationError("integrator.tol: must lie in [1e-13, 1e-3]");
    if (cfg.integrator.max_steps < 100)
        throw ValidationError("integrator.max_steps: unreasonably small budget");
    if (cfg.model.backend == Backend::numeric && cfg.grid.r_min < cfg.integrator.min_abs_c)
        throw ValidationError("grid.r_min: below integrator.min_abs_c for the numeric backend");

    if (!(cfg.monodromy.radius > 0.0) || cfg.monodromy.radius >= cfg.model.epsilon)
        throw ValidationError("monodromy.radius: must lie in (0, epsilon)");
    if (cfg.monodromy.center.modulus() + cfg.monodromy.radius >= cfg.model.epsilon)
        throw ValidationError("monodromy: loop leaves the base disc");
    if (cfg.monodromy.n_theta < 16)
        throw ValidationError("monodromy.n_theta: need at least 16 samples");
}

} // namespace ffinv
