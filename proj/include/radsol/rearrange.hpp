#pragma once

#include <span>
#include <string>
#include <vector>

#include "radsol/functional.hpp"

namespace radsol {

/// Symmetric-decreasing rearrangement of a nonnegative radial profile.
/// u is read as piecewise linear in r (constant on [0, r_1], zero at r_max);
/// with mu(t) the exact measure of {u > t} for that function, the value at
/// r_j is the largest t with mu(t) > alpha(N) r_j^N (0 if none).
/// Nonincreasing input is returned unchanged.
/// Throws std::invalid_argument on negative input.
Profile symmetric_decreasing(const RadialGrid& grid, std::span<const double> u);

/// mu(t) = sum of w_j over nodes with u_j > t.
double distribution_function(const RadialGrid& grid, std::span<const double> u, double t);

struct RearrangeTolerances {
    double l2_relative = 1e-3;
    /// Allowed relative increase of the Dirichlet energy.
    double dirichlet_slack = 1e-3;
    /// Allowed relative decrease of a coupling integral.
    double coupling_slack = 1e-3;
    /// Allowed relative drift of the single-component term integrals.
    double radial_relative = 1e-3;
};

struct TermIntegral {
    std::size_t term = 0;
    double before = 0.0;
    double after = 0.0;
};

struct RearrangeReport {
    FieldSet rearranged;

    std::vector<double> l2_before;
    std::vector<double> l2_after;
    std::vector<double> dirichlet_before;
    std::vector<double> dirichlet_after;
    /// int prod_i |u_i|^{alpha_i} (coefficient not applied) for terms with two or more components.
    std::vector<TermIntegral> coupling;
    /// int |u_i|^{alpha} for terms involving a single component.
    std::vector<TermIntegral> radial;

    bool l2_preserved = false;
    bool dirichlet_nonincreasing = false;
    bool coupling_nondecreasing = false;
    bool radial_preserved = false;
    /// f(|u|) of the full vector is preserved by componentwise rearrangement only for k = 1.
    bool aggregate_radial_guaranteed = false;

    RearrangeTolerances tolerances;
    std::string notes;

    bool all_pass() const { return l2_preserved && dirichlet_nonincreasing && coupling_nondecreasing && radial_preserved; }
};

RearrangeReport rearrangement_report(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                                     const RearrangeTolerances& tolerances = {});

} // namespace radsol
