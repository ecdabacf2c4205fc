#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "radsol/functional.hpp"

namespace radsol {

struct HylomorphyRow {
    double r = 0.0;
    std::vector<double> charges;
    double energy = 0.0;
    /// energy / (alpha(N) r^N)
    double normalized_energy = 0.0;
    /// 2E - m_h C_h(r)
    std::vector<double> margins;
    /// Non-empty when the radius could not be evaluated (support outside the grid).
    std::string error;

    bool admissible() const;
};

/// Energy and charge of the plateau-and-ramp test profile over a list of radii.
struct HylomorphyScan {
    std::vector<double> v;
    std::vector<double> omega;
    std::vector<HylomorphyRow> rows;

    /// Smallest scanned r from which every later row has all margins negative.
    std::optional<double> threshold_radius() const;
};

/// Geometric ladder of `count` radii from r_max / 8 to r_max / 2.
std::vector<double> default_radii(const RadialGrid& grid, std::size_t count = 8);

/// Rows are emitted sorted by increasing r; rows whose support leaves the grid
/// carry an error message instead of numbers.
HylomorphyScan hylomorphy_scan(const RadialGrid& grid, const PotentialSpec& spec, std::span<const double> v,
                               const Frequencies& omega, std::vector<double> radii);

/// C_i = omega_i ||u_{r,i}||^2 for the test profile of plateau radius r.
/// Returns raw values: zero entries are possible and ChargeVector rejects them.
std::vector<double> charge_from_profile(const RadialGrid& grid, std::span<const double> v, const Frequencies& omega,
                                        double r);

/// Least-squares slope of log(normalized - limit) against log(r), using the
/// rows with r >= max_r / 10. Rows with nonpositive deficit are skipped.
std::optional<double> deficit_slope(const HylomorphyScan& scan, double limit);

/// CSV with header r,C_1..C_k,E,E_normalized,margin_1..margin_k.
void write_scan_csv(std::ostream& out, const HylomorphyScan& scan);

struct VerifyTolerances {
    double el_residual = 1e-6;
    double constraint = 1e-12;
    /// Largest admissible share of ||u_i||^2 on r > 0.9 r_max.
    double tail_fraction = 1e-6;
    /// Whether H1 held (sampled); the coercivity bounds are only guaranteed then.
    bool h1_passed = true;
};

/// A posteriori checks on (u, omega) for charge C.
struct VerificationReport {
    /// |omega_i ||u_i||^2 - C_i| / C_i
    std::vector<double> constraint_residuals;
    bool constraint_pass = false;

    std::vector<double> el_residuals;
    bool el_pass = false;

    std::vector<bool> omega_below_mass;
    bool omega_pass = false;

    /// Share of ||u_i||^2 carried by r > 0.9 r_max.
    std::vector<double> tail_fractions;
    bool localized = false;

    double energy = 0.0;
    /// 2E - m_i C_i
    std::vector<double> hylomorphy_margins;
    bool hylomorphy_pass = false;

    /// omega_i <= 2E / C_i
    std::vector<bool> coercivity_omega;
    /// sum_i ||grad u_i||^2 <= 2E
    bool coercivity_gradient = false;
    bool coercivity_pass = false;
    /// False when H1 was not established; the coercivity flags are then informational.
    bool coercivity_applicable = true;

    /// Least-squares multipliers lambda_i for grad_(u_i, omega_i) E = lambda_i grad H_i,
    /// H_i = omega_i ||u_i||^2, and the relative size of what is left over.
    std::vector<double> multipliers;
    std::vector<double> multiplier_residuals;

    double el_tolerance = 0.0;
    double constraint_tolerance = 0.0;
    double tail_tolerance = 0.0;

    /// Norm convention used for every residual above.
    std::string norm_note;

    bool all_pass() const;
};

/// int_{r > from * r_max} u^2 / ||u||^2; zero for a vanishing profile.
double tail_fraction(const RadialGrid& grid, std::span<const double> u, double from = 0.9);

VerificationReport verify_solution(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                                   const Frequencies& omega, const ChargeVector& charge,
                                   const VerifyTolerances& tolerances = {});

} // namespace radsol
