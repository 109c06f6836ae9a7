#include <doctest.h>

#include "ffinv/config.hpp"
#include "ffinv/errors.hpp"

using namespace ffinv;

TEST_CASE("defaults are filled from epsilon")
{
    const RunConfig cfg = parse_config(R"({"model": {"series": [[1,0,0.3]], "epsilon": 0.4}})");
    CHECK(cfg.model.epsilon == 0.4);
    CHECK(cfg.grid.r_min == doctest::Approx(0.02));
    CHECK(cfg.grid.r_max == doctest::Approx(0.2));
    CHECK(cfg.grid.n_r == 16);
    CHECK(cfg.grid.n_theta == 32);
    CHECK(cfg.fit.degree == 4);
    CHECK(cfg.integrator.tol == 1e-10);
    CHECK(cfg.integrator.min_abs_c == doctest::Approx(0.008));
    CHECK(cfg.monodromy.radius == doctest::Approx(0.11));
    CHECK(cfg.output.emit_csv);
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("unknown keys are errors with path context")
{
    CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"series": []}, "grids": {}})"),
                         "config.grids: unknown key", ValidationError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"series": [], "epsilons": 0.4}})"),
                         "model.epsilons: unknown key", ValidationError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"model": {}, "fit": {"deg": 3}})"),
                         "fit.deg: unknown key", ValidationError);
}

TEST_CASE("malformed documents and values are rejected")
{
    CHECK_THROWS_AS(parse_config("not json"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"([1, 2, 3])"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({})"), ValidationError); // model block required
    CHECK_THROWS_AS(parse_config(R"({"model": {"series": [[0, 0, 1.0]]}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"series": [[1, 0]]}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"epsilon": "big"}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"model": {}, "seed": 1.5})"), ValidationError);
}

TEST_CASE("validation catches out-of-range blocks")
{
    // epsilon out of (0,1) is caught with the field name
    try {
        validate_config(parse_config(R"({"model": {"series": [], "epsilon": 1.2}})"));
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("model.epsilon") != std::string::npos);
    }

    CHECK_THROWS_AS(
        validate_config(parse_config(
            R"({"model": {"series": []}, "grid": {"r_min": 0.3, "r_max": 0.2}})")),
        ValidationError);
    CHECK_THROWS_AS(
        validate_config(parse_config(
            R"({"model": {"series": []}, "integrator": {"tol": 1e-2}})")),
        ValidationError);
    CHECK_THROWS_AS(
        validate_config(parse_config(
            R"({"model": {"series": [], "backend": "numeric"}, "grid": {"r_min": 0.001}})")),
        ValidationError);
    CHECK_THROWS_AS(
        validate_config(parse_config(
            R"({"model": {"series": []}, "monodromy": {"radius": 0.9}})")),
        ValidationError);
}

TEST_CASE("transitions and backend parse")
{
    const RunConfig cfg = parse_config(R"({
        "model": {"series": [[1,0,0.3]], "epsilon": 0.4, "k": 2,
                   "transitions": [[[1,0,0.1]]], "backend": "numeric"},
        "seed": 99})");
    CHECK(cfg.model.k == 2);
    REQUIRE(cfg.model.transitions.size() == 1);
    CHECK(cfg.model.transitions[0].h.at(1, 0) == 0.1);
    CHECK(cfg.model.backend == Backend::numeric);
    CHECK(cfg.seed == 99);
    CHECK_NOTHROW(validate_config(cfg));
}
