#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quatconf/cli.hpp"

using namespace quatconf::cli;

int main(int argc, char** argv) {
    CLI::App app{"quatconf: conformal maps into the quaternions"};
    app.require_subcommand(1);
    std::string config_path;
    Overrides overrides;
    std::string out_dir = ".";
    double h = 0.0, tol = -1.0;

    struct Command {
        const char* name;
        const char* help;
        int (*body)(const RunConfig&, const Overrides&, std::ostream&);
    };
    const Command commands[] = {
        {"check", "run the configured check suites", command_check},
        {"curvature", "write the curvature field CSV", command_curvature},
        {"mesh", "write OBJ meshes", command_mesh},
        {"factor", "print the factorization data", command_factor},
        {"degree", "print the degree of the left normal", command_degree},
        {"polefit", "fit zero and pole orders at the divisor points", command_polefit},
    };
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->set_help_flag("--help", "print this help and exit");
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--h", h, "difference step (switches to difference derivatives)")->check(CLI::PositiveNumber);
        sub->add_option("--tol", tol, "tolerance for every check")->check(CLI::NonNegativeNumber);
    }
    CLI11_PARSE(app, argc, argv);

    overrides.out_dir = out_dir;
    if (h > 0.0) overrides.h = h;
    if (tol >= 0.0) overrides.tol = tol;
    try {
        const RunConfig config = load_config(config_path);
        for (const auto& c : commands) {
            if (app.got_subcommand(c.name)) return c.body(config, overrides, std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const quatconf::HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
