#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ffinv/errors.hpp"
#include "ffinv/runners.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string backend;
    int degree = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config_path, "config file (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "output directory override");
    cmd->add_option("--backend", args.backend, "backend override: analytic | numeric")
        ->check(CLI::IsMember({"analytic", "numeric"}));
    cmd->add_option("--degree", args.degree, "fit degree override");
}

ffinv::RunConfig resolve(const CommonArgs& args)
{
    ffinv::RunConfig cfg = ffinv::load_config(args.config_path);
    if (!args.out_dir.empty())
        cfg.output.directory = args.out_dir;
    if (!args.backend.empty())
        cfg.model.backend = args.backend == "numeric" ? ffinv::Backend::numeric
                                                      : ffinv::Backend::analytic;
    if (args.degree > 0)
        cfg.fit.degree = args.degree;
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ffinv: model focus-focus systems and their semi-global invariants"};
    app.require_subcommand(1);

    CommonArgs extract_args, roundtrip_args, monodromy_args, multipinch_args, symmetry_args;
    CLI::App* cmd_extract =
        app.add_subcommand("extract", "sample return times, fit the invariant, write reports");
    add_common(cmd_extract, extract_args);
    CLI::App* cmd_roundtrip =
        app.add_subcommand("roundtrip", "build from a prescribed series, extract, compare");
    add_common(cmd_roundtrip, roundtrip_args);
    CLI::App* cmd_monodromy = app.add_subcommand("monodromy", "transport the period-lattice basis");
    add_common(cmd_monodromy, monodromy_args);
    CLI::App* cmd_multipinch =
        app.add_subcommand("multipinch", "cocycle-sum extraction and coboundary invariance");
    add_common(cmd_multipinch, multipinch_args);
    CLI::App* cmd_symmetry =
        app.add_subcommand("symmetry", "invariance under the two chart symplectomorphisms");
    add_common(cmd_symmetry, symmetry_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_extract->parsed()) {
            ffinv::run_extract(resolve(extract_args), std::cout);
            return 0;
        }
        if (cmd_roundtrip->parsed())
            return ffinv::run_roundtrip(resolve(roundtrip_args), std::cout).pass ? 0 : 3;
        if (cmd_monodromy->parsed()) {
            ffinv::run_monodromy(resolve(monodromy_args), std::cout);
            return 0;
        }
        if (cmd_multipinch->parsed())
            return ffinv::run_multipinch(resolve(multipinch_args), std::cout).pass ? 0 : 3;
        if (cmd_symmetry->parsed())
            return ffinv::run_symmetry(resolve(symmetry_args), std::cout).pass ? 0 : 3;
    } catch (const ffinv::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ffinv::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
