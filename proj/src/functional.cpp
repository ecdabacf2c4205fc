#include "radsol/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace radsol {

ChargeVector::ChargeVector(std::vector<double> values) : values_(std::move(values))
{
    if (values_.empty()) {
        throw std::invalid_argument("ChargeVector: empty");
    }
    for (double c : values_) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw std::invalid_argument("ChargeVector: charges must be strictly positive and finite");
        }
    }
}

namespace {

std::string vanishing_message(std::size_t component, double norm_squared)
{
    std::ostringstream out;
    out << "component collapse: ||u_" << component + 1 << "||^2 = " << norm_squared << " is below the floor norm";
    return out.str();
}

std::vector<double> component_norms(const RadialGrid& grid, const FieldSet& u, bool enforce_floor)
{
    std::vector<double> norms(u.components());
    for (std::size_t i = 0; i < u.components(); ++i) {
        norms[i] = norm_squared(grid, u[i]);
        if (enforce_floor && !(norms[i] >= grid.floor_norm())) {
            throw VanishingComponent(i, norms[i]);
        }
    }
    return norms;
}

} // namespace

VanishingComponent::VanishingComponent(std::size_t component, double norm_squared)
    : std::runtime_error(vanishing_message(component, norm_squared)), component_(component),
      norm_squared_(norm_squared)
{
}

void check_fields(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u)
{
    if (u.components() != spec.components()) {
        throw std::invalid_argument("field has " + std::to_string(u.components()) + " components, potential expects " +
                                    std::to_string(spec.components()));
    }
    for (std::size_t i = 0; i < u.components(); ++i) {
        grid.check(u[i]);
        for (double x : u[i]) {
            if (!std::isfinite(x)) {
                throw std::invalid_argument("field component " + std::to_string(i + 1) + " has non-finite values");
            }
        }
    }
}

namespace {

// int F(u) by nodewise composition; optionally D_i F(u) at every node.
double potential_term(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, FieldSet* nodal_gradient)
{
    const std::size_t k = u.components();
    const std::size_t n = u.nodes();
    const auto w = grid.weights();
    std::vector<double> point(k);
    std::vector<double> grad(k);
    detail::CompensatedSum sum;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            point[i] = u[i][j];
        }
        sum.add(w[j] * spec.F(point));
        if (nodal_gradient != nullptr) {
            spec.gradient_F(point, grad);
            for (std::size_t i = 0; i < k; ++i) {
                (*nodal_gradient)[i][j] = grad[i];
            }
        }
    }
    return sum.value();
}

} // namespace

double total_energy(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, const Frequencies& omega)
{
    check_fields(grid, spec, u);
    if (omega.size() != u.components()) {
        throw std::invalid_argument("total_energy: omega has the wrong number of components");
    }
    detail::CompensatedSum sum;
    sum.add(potential_term(grid, spec, u, nullptr));
    for (std::size_t i = 0; i < u.components(); ++i) {
        sum.add(dirichlet_energy(grid, u[i]));
        sum.add(0.5 * omega[i] * omega[i] * norm_squared(grid, u[i]));
    }
    return sum.value();
}

Frequencies recover_omega(const RadialGrid& grid, const FieldSet& u, const ChargeVector& charge)
{
    if (charge.size() != u.components()) {
        throw std::invalid_argument("recover_omega: charge has the wrong number of components");
    }
    for (std::size_t i = 0; i < u.components(); ++i) {
        grid.check(u[i]);
    }
    const auto norms = component_norms(grid, u, true);
    Frequencies omega;
    omega.values.resize(u.components());
    for (std::size_t i = 0; i < u.components(); ++i) {
        omega.values[i] = charge[i] / norms[i];
    }
    return omega;
}

ReducedEvaluation evaluate_reduced(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                                   const ChargeVector& charge, bool want_gradient)
{
    check_fields(grid, spec, u);
    if (charge.size() != u.components()) {
        throw std::invalid_argument("reduced energy: charge has the wrong number of components");
    }
    ReducedEvaluation out;
    out.norms_squared = component_norms(grid, u, true);
    const std::size_t k = u.components();
    out.omega.values.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.omega.values[i] = charge[i] / out.norms_squared[i];
    }

    if (want_gradient) {
        out.gradient = FieldSet(k, u.nodes());
    }
    detail::CompensatedSum sum;
    sum.add(potential_term(grid, spec, u, want_gradient ? &out.gradient : nullptr));
    for (std::size_t i = 0; i < k; ++i) {
        const double dirichlet = dirichlet_energy(grid, u[i]);
        out.gradient_squared += 2.0 * dirichlet;
        sum.add(dirichlet);
        sum.add(0.5 * charge[i] * charge[i] / out.norms_squared[i]);
    }
    out.energy = sum.value();

    if (want_gradient) {
        for (std::size_t i = 0; i < k; ++i) {
            const Profile lap = laplacian_apply(grid, u[i]);
            const double omega_sq = out.omega[i] * out.omega[i];
            Profile& g = out.gradient[i];
            for (std::size_t j = 0; j < g.size(); ++j) {
                g[j] += -lap[j] - omega_sq * u[i][j];
            }
        }
    }
    return out;
}

double reduced_energy(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, const ChargeVector& charge)
{
    return evaluate_reduced(grid, spec, u, charge, false).energy;
}

FieldSet reduced_gradient(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                          const ChargeVector& charge)
{
    return std::move(evaluate_reduced(grid, spec, u, charge, true).gradient);
}

double ElResidual::max() const
{
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

ElResidual el_residual(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, const Frequencies& omega)
{
    check_fields(grid, spec, u);
    if (omega.size() != u.components()) {
        throw std::invalid_argument("el_residual: omega has the wrong number of components");
    }
    const std::size_t k = u.components();
    FieldSet residual(k, u.nodes());
    potential_term(grid, spec, u, &residual);

    ElResidual out;
    out.values.resize(k);
    out.unnormalized.assign(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        const Profile lap = laplacian_apply(grid, u[i]);
        Profile& r = residual[i];
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] += -lap[j] - omega[i] * omega[i] * u[i][j];
        }
        const double res_norm = std::sqrt(norm_squared(grid, r));
        const double u_norm = std::sqrt(norm_squared(grid, u[i]));
        if (u_norm > 0.0) {
            out.values[i] = res_norm / u_norm;
        } else {
            out.values[i] = res_norm;
            out.unnormalized[i] = true;
        }
    }
    return out;
}

FieldSet build_test_profile(const RadialGrid& grid, std::span<const double> v, double r)
{
    if (!(r >= 0.0) || !(r + 1.0 < grid.r_max())) {
        throw std::invalid_argument("build_test_profile: support [0, r + 1] must lie inside [0, r_max)");
    }
    const auto nodes = grid.nodes();
    FieldSet u(v.size(), grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double rho = nodes[j];
            double shape = 0.0;
            if (rho <= r) {
                shape = 1.0;
            } else if (rho <= r + 1.0) {
                shape = 1.0 + r - rho;
            }
            u[i][j] = v[i] * shape;
        }
    }
    return u;
}

} // namespace radsol
