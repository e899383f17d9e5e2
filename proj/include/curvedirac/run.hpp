#pragma once

// Experiment orchestration behind the command-line tool: configuration,
// validation and deterministic CSV / JSON emission.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvedirac/analytic.hpp"
#include "curvedirac/errors.hpp"
#include "curvedirac/geometry.hpp"
#include "curvedirac/grid.hpp"
#include "curvedirac/postproc.hpp"
#include "curvedirac/solver.hpp"

namespace curvedirac {

enum class Command { Geometry, Analytic, Solve, Converge, Compare };

inline std::string_view to_string(Command command) {
    switch (command) {
    case Command::Geometry: return "geometry";
    case Command::Analytic: return "analytic";
    case Command::Solve: return "solve";
    case Command::Converge: return "converge";
    case Command::Compare: return "compare";
    }
    return "unknown";
}

inline Command parse_command(std::string_view text) {
    for (auto c : {Command::Geometry, Command::Analytic, Command::Solve, Command::Converge, Command::Compare}) {
        if (text == to_string(c)) return c;
    }
    throw ConfigError("unknown command '" + std::string(text) + "'");
}

inline SurfaceKind parse_surface(std::string_view text) {
    for (auto k : {SurfaceKind::Gaussian, SurfaceKind::Volcano, SurfaceKind::Flat}) {
        if (text == to_string(k)) return k;
    }
    throw ConfigError("unknown surface '" + std::string(text) + "'");
}

/// Accepts "p/2" with p odd, or a decimal that is an exact odd multiple of 0.5.
inline int parse_twice_m(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const auto fail = [&] { return ConfigError("m must be a half-integer such as 1/2 or -3/2, got '" +
                                               std::string(text) + "'"); };
    if (text.empty()) throw fail();

    int twice = 0;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        int numerator = 0, denominator = 0;
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        auto [p1, e1] = std::from_chars(num.data(), num.data() + num.size(), numerator);
        auto [p2, e2] = std::from_chars(den.data(), den.data() + den.size(), denominator);
        if (e1 != std::errc{} || e2 != std::errc{} || p1 != num.data() + num.size() ||
            p2 != den.data() + den.size() || denominator != 2) {
            throw fail();
        }
        twice = numerator;
    } else {
        double value = 0.0;
        auto [p, e] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (e != std::errc{} || p != text.data() + text.size() || !std::isfinite(value)) throw fail();
        const double doubled = 2.0 * value;
        if (doubled != std::round(doubled) || std::abs(doubled) > 1e6) throw fail();
        twice = static_cast<int>(doubled);
    }
    if (twice % 2 == 0) throw fail();
    return twice;
}

inline std::string format_twice_m(int twice_m) { return std::to_string(twice_m) + "/2"; }

struct RunConfig {
    Command command = Command::Solve;
    SurfaceKind surface = SurfaceKind::Gaussian;
    double amplitude = 1.3;
    double width = 1.0;
    int twice_m = 1;
    double r_min = 0.01;
    double r_max = 5.0;
    double h = 0.001;
    int eigencount = 10;
    std::string out = "out";
    double kappa = 2.35;  // analytic profiles only
    int levels = 3;       // converge only
    std::vector<int> modes;  // solve: 1-based indices to emit; empty = all

    SurfaceSpec surface_spec() const {
        switch (surface) {
        case SurfaceKind::Gaussian: return SurfaceSpec::gaussian(amplitude, width);
        case SurfaceKind::Volcano: return SurfaceSpec::volcano(amplitude, width);
        case SurfaceKind::Flat: return SurfaceSpec::flat();
        }
        return SurfaceSpec::flat();
    }

    RadialGrid grid() const { return {r_min, r_max, h}; }

    std::vector<int> emitted_modes() const {
        if (!modes.empty()) return modes;
        std::vector<int> all(eigencount);
        for (int i = 0; i < eigencount; ++i) all[i] = i + 1;
        return all;
    }
};

/// Checks every constraint the downstream modules impose, before any work.
inline void validate(const RunConfig& config) {
    (void)config.surface_spec();
    (void)config.grid();
    (void)QuantumNumbers(config.twice_m, Sublattice::A);
    if (config.eigencount < 1 || config.eigencount > max_eigencount) {
        throw ConfigError("eigencount must lie in 1.." + std::to_string(max_eigencount));
    }
    if (!(config.kappa > 0.0) || !std::isfinite(config.kappa)) {
        throw ConfigError("kappa must be positive");
    }
    if (config.levels < 3 || config.levels > 8) {
        throw ConfigError("levels must lie in 3..8");
    }
    for (int index : config.modes) {
        if (index < 1 || index > config.eigencount) {
            throw ConfigError("mode index " + std::to_string(index) + " outside 1..eigencount");
        }
    }
    if (config.out.empty()) {
        throw ConfigError("output directory must not be empty");
    }
}

inline nlohmann::json to_json(const RunConfig& config) {
    return nlohmann::json{{"command", to_string(config.command)},
                          {"surface", to_string(config.surface)},
                          {"amplitude", config.amplitude},
                          {"width", config.width},
                          {"m", format_twice_m(config.twice_m)},
                          {"r_min", config.r_min},
                          {"r_max", config.r_max},
                          {"h", config.h},
                          {"eigencount", config.eigencount},
                          {"out", config.out},
                          {"kappa", config.kappa},
                          {"levels", config.levels},
                          {"modes", config.modes}};
}

/// Overlays the keys present in `j` onto `config`. Unknown keys are rejected.
inline void apply_json(RunConfig& config, const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    auto number = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
        return v.get<double>();
    };
    auto integer = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
        return v.get<int>();
    };
    auto text = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
        return v.get<std::string>();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "command") config.command = parse_command(text(value, key));
        else if (key == "surface") config.surface = parse_surface(text(value, key));
        else if (key == "amplitude") config.amplitude = number(value, key);
        else if (key == "width") config.width = number(value, key);
        else if (key == "m") {
            if (value.is_string()) {
                config.twice_m = parse_twice_m(value.get<std::string>());
            } else if (value.is_number()) {
                std::ostringstream s;
                s.precision(17);
                s << value.get<double>();
                config.twice_m = parse_twice_m(s.str());
            } else {
                throw ConfigError("'m' must be a string or number");
            }
        }
        else if (key == "r_min") config.r_min = number(value, key);
        else if (key == "r_max") config.r_max = number(value, key);
        else if (key == "h") config.h = number(value, key);
        else if (key == "eigencount") config.eigencount = integer(value, key);
        else if (key == "out") config.out = text(value, key);
        else if (key == "kappa") config.kappa = number(value, key);
        else if (key == "levels") config.levels = integer(value, key);
        else if (key == "modes") {
            if (!value.is_array()) throw ConfigError("'modes' must be an array of integers");
            config.modes.clear();
            for (const auto& v : value) config.modes.push_back(integer(v, key));
        }
        else throw ConfigError("unknown configuration key '" + key + "'");
    }
}

inline nlohmann::json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open configuration file " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed configuration file " + path.string() + ": " + e.what());
    }
}

namespace io {

/// Shortest round-trip-safe rendering: 17 significant digits.
inline std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) {
            throw std::runtime_error("cannot write " + path.string());
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << '\n';
    }

    CsvWriter& cell(double value) { return raw(format_number(value)); }
    CsvWriter& cell(long long value) { return raw(std::to_string(value)); }
    CsvWriter& cell(int value) { return raw(std::to_string(value)); }
    CsvWriter& cell(std::size_t value) { return raw(std::to_string(value)); }
    CsvWriter& cell(std::string_view value) { return raw(std::string(value)); }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

private:
    CsvWriter& raw(const std::string& s) {
        out_ << (first_ ? "" : ",") << s;
        first_ = false;
        return *this;
    }

    std::ofstream out_;
    bool first_ = true;
};

} // namespace io

inline std::string run_tag(const RunConfig& config) {
    const int t = config.twice_m;
    return std::string(to_string(config.surface)) + "_m" + std::to_string(t) + "_2";
}

namespace detail {

inline nlohmann::json peaks_json(const std::vector<Peak>& peaks) {
    auto arr = nlohmann::json::array();
    for (const auto& p : peaks) {
        arr.push_back({{"r", p.r}, {"value", p.value}, {"prominence", p.prominence}});
    }
    return arr;
}

inline nlohmann::json fit_json(const std::vector<double>& kappas) {
    if (kappas.size() < 5) return nullptr;
    const auto fit = fit_spectrum(kappas);
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},
            {"n_used", fit.n_used},
            {"degenerate", fit.degenerate}};
}

inline std::vector<std::filesystem::path> run_geometry(const RunConfig& config, const std::filesystem::path& dir) {
    const auto spec = config.surface_spec();
    const auto grid = config.grid();
    const double r_lower = spec.kind() == SurfaceKind::Volcano ? grid.r_min() : 0.0;
    const auto path = dir / ("geometry_" + std::string(to_string(spec.kind())) + ".csv");
    io::CsvWriter csv(path, {"r", "z", "f", "F", "A_theta", "R", "mu"});
    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.node(i);
        const auto g = evaluate_geometry(spec, r);
        csv.cell(r).cell(profile_height(spec, r)).cell(g.f).cell(g.fermi_factor).cell(g.pseudo_gauge)
            .cell(g.curvature).cell(geometric_phase(spec, r, r_lower));
        csv.end_row();
    }
    return {path};
}

inline std::vector<std::filesystem::path> run_analytic(const RunConfig& config, const std::filesystem::path& dir) {
    const auto spec = config.surface_spec();
    const auto grid = config.grid();
    const QuantumNumbers qa(config.twice_m, Sublattice::A);
    const QuantumNumbers qb(config.twice_m, Sublattice::B);
    const auto joint = normalize_density(analytic_spinor_profile(spec, qa, config.kappa, grid),
                                         analytic_spinor_profile(spec, qb, config.kappa, grid));
    const auto path = dir / ("analytic_" + run_tag(config) + ".csv");
    io::CsvWriter csv(path, {"r", "U2_simple_A", "U2_simple_B", "U2_full_A", "U2_full_B", "psiA2", "psiB2"});
    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.node(i);
        csv.cell(r)
            .cell(effective_potential_simple(spec, qa, r))
            .cell(effective_potential_simple(spec, qb, r))
            .cell(effective_potential_full(spec, qa, r))
            .cell(effective_potential_full(spec, qb, r))
            .cell(joint.psi_a[i] * joint.psi_a[i])
            .cell(joint.psi_b[i] * joint.psi_b[i]);
        csv.end_row();
    }
    return {path};
}

inline std::vector<std::filesystem::path> run_solve(const RunConfig& config, const std::filesystem::path& dir,
                                                    nlohmann::json& summary) {
    const auto spec = config.surface_spec();
    const auto grid = config.grid();
    const auto pair = solve_spinor_pair(spec, config.twice_m, grid, config.eigencount);
    const std::string tag = run_tag(config);
    std::vector<std::filesystem::path> files;

    const auto spectrum_path = dir / ("spectrum_" + tag + ".csv");
    {
        io::CsvWriter csv(spectrum_path, {"n", "kappa_A", "kappa_B"});
        for (std::size_t n = 1; n <= pair.a.size(); ++n) {
            csv.cell(n).cell(pair.a.kappas[n - 1]).cell(pair.b.kappas[n - 1]);
            csv.end_row();
        }
    }
    files.push_back(spectrum_path);

    auto peak_table = nlohmann::json::array();
    for (int index : config.emitted_modes()) {
        const auto density = density_from_solutions(pair, static_cast<std::size_t>(index));
        const auto path = dir / ("mode_" + tag + "_n" + std::to_string(index) + ".csv");
        io::CsvWriter csv(path, {"r", "psi_A", "psi_B", "density_A", "density_B", "rho"});
        for (int i = 0; i < grid.node_count(); ++i) {
            csv.cell(grid.node(i)).cell(density.psi_a[i]).cell(density.psi_b[i]).cell(density.density_a[i])
                .cell(density.density_b[i]).cell(density.rho[i]);
            csv.end_row();
        }
        files.push_back(path);
        peak_table.push_back({{"index", index},
                              {"kappa_A", density.kappa_a},
                              {"kappa_B", density.kappa_b},
                              {"total_probability", total_probability(density)},
                              {"density_A", peaks_json(find_peaks(density.density_a_profile()))},
                              {"density_B", peaks_json(find_peaks(density.density_b_profile()))},
                              {"rho", peaks_json(find_peaks(density.rho_profile()))}});
    }

    summary["kappa_A"] = pair.a.kappas;
    summary["kappa_B"] = pair.b.kappas;
    summary["fit_A"] = fit_json(pair.a.kappas);
    summary["fit_B"] = fit_json(pair.b.kappas);
    summary["peaks"] = peak_table;
    summary["eigen_path_A"] = to_string(pair.a.path);
    summary["eigen_path_B"] = to_string(pair.b.path);
    summary["matrix_rows"] = grid.unknowns();
    return files;
}

inline std::vector<std::filesystem::path> run_converge(const RunConfig& config, const std::filesystem::path& dir) {
    const auto spec = config.surface_spec();
    const auto grid = config.grid();
    const std::string tag = run_tag(config);
    const auto spectra_path = dir / ("converge_" + tag + ".csv");
    const auto orders_path = dir / ("converge_orders_" + tag + ".csv");
    io::CsvWriter spectra(spectra_path, {"lattice", "level", "h", "kappa_1", "kappa_2", "kappa_3", "kappa_4", "kappa_5"});
    io::CsvWriter orders(orders_path, {"lattice", "level", "p_1", "p_2", "p_3", "p_4", "p_5"});
    for (auto lattice : {Sublattice::A, Sublattice::B}) {
        const auto report = convergence_study(spec, QuantumNumbers(config.twice_m, lattice), grid, config.levels);
        for (std::size_t k = 0; k < report.levels.size(); ++k) {
            spectra.cell(to_string(lattice)).cell(k).cell(report.levels[k].h);
            for (double kappa : report.levels[k].kappas) spectra.cell(kappa);
            spectra.end_row();
        }
        for (std::size_t k = 0; k < report.orders.size(); ++k) {
            orders.cell(to_string(lattice)).cell(k);
            for (double p : report.orders[k]) orders.cell(p);
            orders.end_row();
        }
    }
    return {spectra_path, orders_path};
}

inline std::vector<std::filesystem::path> run_compare(const RunConfig& config, const std::filesystem::path& dir) {
    const auto grid = config.grid();
    const auto path = dir / ("compare_m" + std::to_string(config.twice_m) + "_2.csv");
    io::CsvWriter csv(path, {"lattice", "n", "kappa_numerical", "kappa_analytic", "abs_error"});
    for (auto lattice : {Sublattice::A, Sublattice::B}) {
        const QuantumNumbers qn(config.twice_m, lattice);
        const auto numeric = eigen_solve(assemble(SurfaceSpec::flat(), qn, grid), config.eigencount);
        const auto roots = flat_boundary_roots(qn, grid.r_min(), grid.node(grid.intervals()), config.eigencount);
        for (int n = 0; n < config.eigencount; ++n) {
            csv.cell(to_string(lattice)).cell(n + 1).cell(numeric.kappas[n]).cell(roots[n])
                .cell(std::abs(numeric.kappas[n] - roots[n]));
            csv.end_row();
        }
    }
    return {path};
}

} // namespace detail

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::optional<std::filesystem::path> summary;
};

/// Validates, then computes and writes every output of `config.command`.
/// Throws on failure; see run() for the exit-status mapping.
inline RunResult execute(const RunConfig& config) {
    validate(config);
    const auto started = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.out);
    std::filesystem::create_directories(dir);

    RunResult result;
    nlohmann::json summary{{"schema", 1}, {"config", to_json(config)}};
    switch (config.command) {
    case Command::Geometry: result.files = detail::run_geometry(config, dir); break;
    case Command::Analytic: result.files = detail::run_analytic(config, dir); break;
    case Command::Solve: result.files = detail::run_solve(config, dir, summary); break;
    case Command::Converge: result.files = detail::run_converge(config, dir); break;
    case Command::Compare: result.files = detail::run_compare(config, dir); break;
    }

    if (config.command == Command::Solve) {
        auto names = nlohmann::json::array();
        for (const auto& f : result.files) names.push_back(f.filename().string());
        summary["files"] = names;
        summary["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const auto path = dir / ("summary_" + run_tag(config) + ".json");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << summary.dump(2) << '\n';
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        result.summary = path;
    }
    return result;
}

enum ExitStatus : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_numerical = 3 };

/// execute() with errors mapped to exit statuses and a one-line diagnostic on `err`.
inline int run(const RunConfig& config, std::ostream& err = std::cerr) {
    try {
        execute(config);
        return exit_ok;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const SpectrumError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace curvedirac
