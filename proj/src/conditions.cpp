#include "radsol/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace radsol {

bool HylomorphyRow::admissible() const
{
    return error.empty() && !margins.empty() &&
           std::all_of(margins.begin(), margins.end(), [](double m) { return m < 0.0; });
}

std::optional<double> HylomorphyScan::threshold_radius() const
{
    std::optional<double> threshold;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (!it->error.empty()) {
            continue;
        }
        if (!it->admissible()) {
            break;
        }
        threshold = it->r;
    }
    return threshold;
}

std::vector<double> default_radii(const RadialGrid& grid, std::size_t count)
{
    const double first = grid.r_max() / 8.0;
    const double last = grid.r_max() / 2.0;
    std::vector<double> radii(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
        radii[i] = first * std::pow(last / first, t);
    }
    return radii;
}

std::vector<double> charge_from_profile(const RadialGrid& grid, std::span<const double> v, const Frequencies& omega,
                                        double r)
{
    if (omega.size() != v.size()) {
        throw std::invalid_argument("charge_from_profile: v and omega sizes differ");
    }
    const FieldSet u = build_test_profile(grid, v, r);
    std::vector<double> charges(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        charges[i] = omega[i] * norm_squared(grid, u[i]);
    }
    return charges;
}

HylomorphyScan hylomorphy_scan(const RadialGrid& grid, const PotentialSpec& spec, std::span<const double> v,
                               const Frequencies& omega, std::vector<double> radii)
{
    const std::size_t k = spec.components();
    if (v.size() != k || omega.size() != k) {
        throw std::invalid_argument("hylomorphy_scan: v and omega must have one entry per component");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (v[i] == 0.0) {
            throw std::invalid_argument("hylomorphy_scan: v must have nonzero coordinates");
        }
        if (!(omega[i] > 0.0)) {
            throw std::invalid_argument("hylomorphy_scan: omega must be positive");
        }
    }
    std::sort(radii.begin(), radii.end());

    HylomorphyScan scan;
    scan.v.assign(v.begin(), v.end());
    scan.omega = omega.values;
    const auto m = spec.masses();
    for (double r : radii) {
        HylomorphyRow row;
        row.r = r;
        try {
            const FieldSet u = build_test_profile(grid, v, r);
            row.charges.resize(k);
            for (std::size_t i = 0; i < k; ++i) {
                row.charges[i] = omega[i] * norm_squared(grid, u[i]);
            }
            row.energy = total_energy(grid, spec, u, omega);
            row.normalized_energy = row.energy / (grid.ball_volume() * std::pow(r, grid.dimension()));
            row.margins.resize(k);
            for (std::size_t h = 0; h < k; ++h) {
                row.margins[h] = 2.0 * row.energy - m[h] * row.charges[h];
            }
        } catch (const std::invalid_argument& e) {
            row.error = e.what();
        }
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

std::optional<double> deficit_slope(const HylomorphyScan& scan, double limit)
{
    double max_r = 0.0;
    for (const auto& row : scan.rows) {
        if (row.error.empty()) {
            max_r = std::max(max_r, row.r);
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (const auto& row : scan.rows) {
        const double deficit = row.normalized_energy - limit;
        if (!row.error.empty() || row.r < max_r / 10.0 || !(deficit > 0.0)) {
            continue;
        }
        const double x = std::log(row.r);
        const double y = std::log(deficit);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) {
        return std::nullopt;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) {
        return std::nullopt;
    }
    return (count * sxy - sx * sy) / denom;
}

namespace {

void put(std::ostream& out, double x)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    out << buffer;
}

} // namespace

void write_scan_csv(std::ostream& out, const HylomorphyScan& scan)
{
    const std::size_t k = scan.v.size();
    out << "r";
    for (std::size_t i = 0; i < k; ++i) {
        out << ",C_" << i + 1;
    }
    out << ",E,E_normalized";
    for (std::size_t i = 0; i < k; ++i) {
        out << ",margin_" << i + 1;
    }
    out << '\n';
    for (const auto& row : scan.rows) {
        if (!row.error.empty()) {
            continue;
        }
        put(out, row.r);
        for (double c : row.charges) {
            out << ',';
            put(out, c);
        }
        out << ',';
        put(out, row.energy);
        out << ',';
        put(out, row.normalized_energy);
        for (double m : row.margins) {
            out << ',';
            put(out, m);
        }
        out << '\n';
    }
}

bool VerificationReport::all_pass() const
{
    return constraint_pass && el_pass && omega_pass && localized && hylomorphy_pass && (coercivity_pass || !coercivity_applicable);
}

double tail_fraction(const RadialGrid& grid, std::span<const double> u, double from)
{
    grid.check(u);
    const double cut = from * grid.r_max();
    const auto r = grid.nodes();
    const auto w = grid.weights();
    detail::CompensatedSum total, tail;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double x = w[j] * u[j] * u[j];
        total.add(x);
        if (r[j] > cut) {
            tail.add(x);
        }
    }
    return total.value() > 0.0 ? tail.value() / total.value() : 0.0;
}

VerificationReport verify_solution(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                                   const Frequencies& omega, const ChargeVector& charge,
                                   const VerifyTolerances& tolerances)
{
    check_fields(grid, spec, u);
    const std::size_t k = spec.components();
    if (omega.size() != k || charge.size() != k) {
        throw std::invalid_argument("verify_solution: omega and charge must have one entry per component");
    }
    VerificationReport report;
    report.el_tolerance = tolerances.el_residual;
    report.constraint_tolerance = tolerances.constraint;
    report.tail_tolerance = tolerances.tail_fraction;
    report.coercivity_applicable = tolerances.h1_passed;
    report.norm_note = "residuals use the unweighted discrete L2 norm on R^N (quadrature weights), normalized by ||u_i||";

    std::vector<double> norms(k);
    for (std::size_t i = 0; i < k; ++i) {
        norms[i] = norm_squared(grid, u[i]);
    }

    report.constraint_residuals.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        report.constraint_residuals[i] = std::abs(omega[i] * norms[i] - charge[i]) / charge[i];
    }
    report.constraint_pass = std::all_of(report.constraint_residuals.begin(), report.constraint_residuals.end(),
                                         [&](double r) { return r <= tolerances.constraint; });

    const ElResidual el = el_residual(grid, spec, u, omega);
    report.el_residuals = el.values;
    report.el_pass = el.max() <= tolerances.el_residual;

    const auto m = spec.masses();
    report.omega_below_mass.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        report.omega_below_mass[i] = omega[i] > 0.0 && omega[i] < m[i];
    }
    report.omega_pass = std::all_of(report.omega_below_mass.begin(), report.omega_below_mass.end(),
                                    [](bool b) { return b; });

    report.tail_fractions.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        report.tail_fractions[i] = tail_fraction(grid, u[i]);
    }
    report.localized = std::all_of(report.tail_fractions.begin(), report.tail_fractions.end(),
                                   [&](double t) { return t <= tolerances.tail_fraction; });

    report.energy = total_energy(grid, spec, u, omega);
    const double twice_energy = 2.0 * report.energy;
    report.hylomorphy_margins.resize(k);
    report.coercivity_omega.resize(k);
    double gradient_sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        report.hylomorphy_margins[i] = twice_energy - m[i] * charge[i];
        report.coercivity_omega[i] = omega[i] <= twice_energy / charge[i];
        gradient_sq += 2.0 * dirichlet_energy(grid, u[i]);
    }
    report.hylomorphy_pass = std::all_of(report.hylomorphy_margins.begin(), report.hylomorphy_margins.end(),
                                         [](double x) { return x < 0.0; });
    report.coercivity_gradient = gradient_sq <= twice_energy;
    report.coercivity_pass = report.coercivity_gradient &&
                             std::all_of(report.coercivity_omega.begin(), report.coercivity_omega.end(),
                                         [](bool b) { return b; });

    // Unreduced gradient of E in the (u_i, omega_i) block against the gradient of
    // the constraint H_i = omega_i ||u_i||^2:
    //   grad E = (-Delta u_i + D_i F + omega_i^2 u_i, omega_i ||u_i||^2)
    //   grad H = (2 omega_i u_i, ||u_i||^2)
    FieldSet nodal_dF(k, u.nodes());
    {
        std::vector<double> point(k), grad(k);
        for (std::size_t j = 0; j < u.nodes(); ++j) {
            for (std::size_t i = 0; i < k; ++i) {
                point[i] = u[i][j];
            }
            spec.gradient_F(point, grad);
            for (std::size_t i = 0; i < k; ++i) {
                nodal_dF[i][j] = grad[i];
            }
        }
    }
    report.multipliers.resize(k);
    report.multiplier_residuals.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Profile lap = laplacian_apply(grid, u[i]);
        Profile grad_e(u.nodes()), grad_h(u.nodes());
        for (std::size_t j = 0; j < u.nodes(); ++j) {
            grad_e[j] = -lap[j] + nodal_dF[i][j] + omega[i] * omega[i] * u[i][j];
            grad_h[j] = 2.0 * omega[i] * u[i][j];
        }
        const double e_omega = omega[i] * norms[i];
        const double h_omega = norms[i];
        const double eh = inner(grid, grad_e, grad_h) + e_omega * h_omega;
        const double hh = norm_squared(grid, grad_h) + h_omega * h_omega;
        const double ee = norm_squared(grid, grad_e) + e_omega * e_omega;
        const double lambda = hh > 0.0 ? eh / hh : 0.0;
        Profile rest(u.nodes());
        for (std::size_t j = 0; j < u.nodes(); ++j) {
            rest[j] = grad_e[j] - lambda * grad_h[j];
        }
        const double rest_omega = e_omega - lambda * h_omega;
        const double rest_sq = norm_squared(grid, rest) + rest_omega * rest_omega;
        report.multipliers[i] = lambda;
        report.multiplier_residuals[i] = ee > 0.0 ? std::sqrt(rest_sq / ee) : 0.0;
    }
    return report;
}

} // namespace radsol
