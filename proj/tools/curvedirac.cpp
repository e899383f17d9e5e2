// curvedirac: Dirac fermions on curved surfaces of revolution.
//
//   curvedirac <geometry|analytic|solve|converge|compare> [--config file.json] [flags]
//
// Flags override keys read from --config.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvedirac/run.hpp"

namespace cd = curvedirac;

int main(int argc, char** argv) {
    CLI::App app{"Massless Dirac fermions on Gaussian and volcano bumps"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", "curvedirac 1.0.0");

    std::string command, config_path, surface, m, out;
    double amplitude = 0, width = 0, r_min = 0, r_max = 0, h = 0, kappa = 0;
    int eigencount = 0, levels = 0;
    std::vector<int> modes;

    app.add_option("command", command, "geometry | analytic | solve | converge | compare")
        ->required()
        ->check(CLI::IsMember({"geometry", "analytic", "solve", "converge", "compare"}));
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--surface", surface, "gaussian | volcano | flat");
    app.add_option("--amplitude", amplitude, "bump amplitude A");
    app.add_option("--width", width, "bump width b");
    app.add_option("--m", m, "angular momentum, e.g. 1/2 or -3/2");
    app.add_option("--r-min", r_min, "inner radius");
    app.add_option("--r-max", r_max, "outer radius");
    app.add_option("--h", h, "grid spacing");
    app.add_option("--eigencount", eigencount, "number of eigenvalues per sublattice");
    app.add_option("--out", out, "output directory");
    app.add_option("--kappa", kappa, "wavenumber for analytic profiles");
    app.add_option("--levels", levels, "grid levels for converge");
    app.add_option("--modes", modes, "1-based mode indices to write (solve)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return cd::exit_config;
    }

    cd::RunConfig config;
    try {
        if (!config_path.empty()) {
            auto file = cd::load_config_file(config_path);
            if (file.is_object()) file.erase("command");
            cd::apply_json(config, file);
        }
        config.command = cd::parse_command(command);
        if (app.count("--surface")) config.surface = cd::parse_surface(surface);
        if (app.count("--amplitude")) config.amplitude = amplitude;
        if (app.count("--width")) config.width = width;
        if (app.count("--m")) config.twice_m = cd::parse_twice_m(m);
        if (app.count("--r-min")) config.r_min = r_min;
        if (app.count("--r-max")) config.r_max = r_max;
        if (app.count("--h")) config.h = h;
        if (app.count("--eigencount")) config.eigencount = eigencount;
        if (app.count("--out")) config.out = out;
        if (app.count("--kappa")) config.kappa = kappa;
        if (app.count("--levels")) config.levels = levels;
        if (app.count("--modes")) config.modes = modes;
    } catch (const cd::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return cd::exit_config;
    }

    return cd::run(config);
}
