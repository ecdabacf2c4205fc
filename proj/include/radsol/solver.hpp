#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radsol/conditions.hpp"

namespace radsol {

enum class InitMode { TestProfile, Gaussian, FromFields };

struct SolveOptions {
    std::size_t max_iterations = 20000;
    /// Stop when max_i ||reduced gradient_i|| / ||u_i|| falls below this.
    double gradient_tolerance = 1e-7;
    /// Stop as stalled when the energy drops by less than this (relative)
    /// over `stall_window` iterations.
    double energy_stall_tolerance = 1e-12;
    std::size_t stall_window = 50;
    double initial_step = 1e-2;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;

    InitMode init = InitMode::TestProfile;
    /// Plateau values for the test profile; empty means "use an H3 witness".
    std::vector<double> init_v;
    double init_radius = 8.0;
    std::vector<double> gaussian_amplitudes;
    std::vector<double> gaussian_widths;
    FieldSet init_fields;

    std::uint64_t seed = 0;
    /// Replace u by |u| after each accepted step.
    bool absolute_value_step = false;

    /// Tolerances handed to verify_solution.
    double el_tolerance = 1e-6;
    double constraint_tolerance = 1e-12;

    /// Sampling used for the H1 check that gates the coercivity assertions.
    double h1_box = 3.0;
    std::size_t h1_samples = 41;

    void validate() const;
};

enum class Termination { Converged, ComponentCollapse, Stalled, IterationCap, LineSearchFailure };

std::string_view to_string(Termination reason);

struct SolveResult {
    FieldSet fields;
    Frequencies omega;
    double energy = 0.0;
    std::vector<double> charges;
    std::vector<double> el_residuals;
    /// max_i ||reduced gradient_i|| / ||u_i|| at the last iterate.
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    Termination reason = Termination::IterationCap;
    std::string detail;
    VerificationReport verification;

    bool h1_passed = false;
    /// Iterates on which omega_i <= 2E/C_i or sum ||grad u_i||^2 <= 2E failed.
    std::size_t coercivity_violations = 0;
    /// Reduced energy after every accepted step, starting with the initial field.
    std::vector<double> energy_history;
    /// Plateau values actually used when init = TestProfile.
    std::vector<double> init_v;
};

/// Initial fields for `opts`; resolves an empty init_v through find_H3_witness.
FieldSet initial_fields(const RadialGrid& grid, const PotentialSpec& spec, const SolveOptions& opts,
                        std::vector<double>* used_v = nullptr);

/// Minimizes the reduced energy for charge C by preconditioned descent with
/// Armijo backtracking, then recovers omega and verifies the result.
///
/// Descent directions are Polak-Ribiere conjugate directions built from the
/// gradient in the inner product ||grad u_i||^2 + m_i^2 ||u_i||^2. Failure
/// to find a localized minimizer is reported through `reason`, not thrown.
SolveResult minimize(const RadialGrid& grid, const PotentialSpec& spec, const ChargeVector& charge,
                     const SolveOptions& opts);

struct ScanEntry {
    ChargeVector charge;
    std::optional<SolveResult> result;
    std::string error;
};

/// Solves for each charge in order, warm-starting from the previous converged
/// fields rescaled so that ||u_i||^2 = C_i / omega_prev_i.
std::vector<ScanEntry> scan_charge(const RadialGrid& grid, const PotentialSpec& spec,
                                   const std::vector<ChargeVector>& charges, const SolveOptions& opts);

} // namespace radsol
