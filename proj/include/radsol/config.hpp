#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radsol/solver.hpp"

namespace radsol {

/// Malformed configuration; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ProblemConfig {
    int dimension = 3;
    std::size_t components = 1;
    double r_max = 40.0;
    std::size_t nodes = 4000;
    std::vector<double> masses;
    std::vector<Monomial> terms;

    bool operator==(const ProblemConfig&) const = default;
};

/// Either an explicit charge or the (v, omega, r) test-profile recipe.
struct ChargeConfig {
    std::vector<double> charge;
    std::vector<double> recipe_v;
    std::vector<double> recipe_omega;
    double recipe_radius = 0.0;
    /// Explicit charges for the scan subcommand.
    std::vector<std::vector<double>> scan_charges;
    /// Multipliers of the base charge for the scan subcommand.
    std::vector<double> scan_factors;

    bool operator==(const ChargeConfig&) const = default;
};

struct SolverConfig {
    std::size_t max_iterations = 20000;
    double gradient_tolerance = 1e-7;
    double energy_stall_tolerance = 1e-12;
    std::size_t stall_window = 50;
    double initial_step = 1e-2;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    std::string init = "test_profile";
    std::vector<double> init_v;
    double init_radius = 8.0;
    std::vector<double> init_amplitudes;
    std::vector<double> init_widths;
    std::string init_file;
    std::uint64_t seed = 0;
    bool absolute_value_step = false;
    double el_tolerance = 1e-6;
    double constraint_tolerance = 1e-12;

    bool operator==(const SolverConfig&) const = default;
};

struct CheckConfig {
    double h1_box = 3.0;
    std::size_t h1_samples = 61;
    std::vector<std::vector<double>> witness_candidates;

    bool operator==(const CheckConfig&) const = default;
};

struct HylomorphyConfig {
    std::vector<double> v;
    std::vector<double> omega;
    std::vector<double> radii;

    bool operator==(const HylomorphyConfig&) const = default;
};

struct RunConfig {
    ProblemConfig problem;
    ChargeConfig charge;
    SolverConfig solver;
    CheckConfig check;
    HylomorphyConfig hylomorphy;
    /// Input profile CSV for the rearrange subcommand.
    std::string profile;

    bool operator==(const RunConfig&) const = default;

    RadialGrid grid() const;
    PotentialSpec potential() const;
    /// Explicit charge, else the recipe evaluated on the grid. Throws ConfigError if neither is set.
    ChargeVector base_charge(const RadialGrid& grid) const;
    /// SolveOptions without init fields loaded from init_file.
    SolveOptions solve_options() const;
};

/// Parses the line-oriented `key = value` format. Blank lines and text after
/// '#' are ignored; `term`, `witness` and `scan_charge` may repeat.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) == c.
std::string to_config_text(const RunConfig& config);

} // namespace radsol
