#include "radsol/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace radsol {

double unit_ball_volume(int dimension)
{
    if (dimension < 1) {
        throw std::invalid_argument("unit_ball_volume: dimension must be positive");
    }
    const double half = 0.5 * dimension;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

RadialGrid::RadialGrid(int dimension, double r_max, std::size_t n)
    : dimension_(dimension), r_max_(r_max)
{
    if (dimension < 3) {
        throw std::invalid_argument("RadialGrid: dimension must be >= 3 (got " + std::to_string(dimension) + ")");
    }
    if (!(r_max > 0.0) || !std::isfinite(r_max)) {
        throw std::invalid_argument("RadialGrid: r_max must be positive and finite");
    }
    if (n < 16) {
        throw std::invalid_argument("RadialGrid: need at least 16 interior nodes (got " + std::to_string(n) + ")");
    }
    h_ = r_max / static_cast<double>(n + 1);
    ball_volume_ = unit_ball_volume(dimension);

    nodes_.resize(n);
    weights_.resize(n);
    edge_areas_.resize(n);
    const double area = sphere_area();
    double inner_volume = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        nodes_[i] = static_cast<double>(i + 1) * h_;
        const double r_edge = (static_cast<double>(i) + 1.5) * h_;
        const double outer_volume = ball_volume_ * std::pow(r_edge, dimension);
        weights_[i] = outer_volume - inner_volume;
        inner_volume = outer_volume;
        edge_areas_[i] = area * std::pow(r_edge, dimension - 1);
    }
}

double RadialGrid::floor_norm() const
{
    return 1e-12 * ball_volume_ * std::pow(r_max_, dimension_);
}

void RadialGrid::check(std::span<const double> values) const
{
    if (values.size() != nodes_.size()) {
        throw std::invalid_argument("profile length " + std::to_string(values.size()) + " does not match grid size " +
                                    std::to_string(nodes_.size()));
    }
}

RadialGrid build_grid(int dimension, double r_max, std::size_t n)
{
    return RadialGrid(dimension, r_max, n);
}

double integrate(const RadialGrid& grid, std::span<const double> f)
{
    grid.check(f);
    const auto w = grid.weights();
    detail::CompensatedSum sum;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum.add(w[i] * f[i]);
    }
    return sum.value();
}

double norm_squared(const RadialGrid& grid, std::span<const double> u)
{
    return inner(grid, u, u);
}

double inner(const RadialGrid& grid, std::span<const double> u, std::span<const double> v)
{
    grid.check(u);
    grid.check(v);
    const auto w = grid.weights();
    detail::CompensatedSum sum;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sum.add(w[i] * u[i] * v[i]);
    }
    return sum.value();
}

double dirichlet_energy(const RadialGrid& grid, std::span<const double> u)
{
    grid.check(u);
    const auto a = grid.edge_areas();
    const double h = grid.spacing();
    const std::size_t n = u.size();
    detail::CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) {
        const double next = i + 1 < n ? u[i + 1] : 0.0;
        const double du = next - u[i];
        sum.add(a[i] * du * du);
    }
    return 0.5 * sum.value() / h;
}

Profile laplacian_apply(const RadialGrid& grid, std::span<const double> u)
{
    grid.check(u);
    const auto a = grid.edge_areas();
    const auto w = grid.weights();
    const double h = grid.spacing();
    const std::size_t n = u.size();
    Profile out(n);
    double flux_in = 0.0; // reflected ghost: no flux through the origin cell face
    for (std::size_t i = 0; i < n; ++i) {
        const double next = i + 1 < n ? u[i + 1] : 0.0;
        const double flux_out = a[i] * (next - u[i]) / h;
        out[i] = (flux_out - flux_in) / w[i];
        flux_in = flux_out;
    }
    return out;
}

Profile solve_shifted_laplacian(const RadialGrid& grid, double shift, std::span<const double> rhs)
{
    grid.check(rhs);
    if (!(shift >= 0.0)) {
        throw std::invalid_argument("solve_shifted_laplacian: shift must be nonnegative");
    }
    // Multiplied through by the weights: (K + shift W) x = W rhs with K the
    // symmetric tridiagonal stiffness matrix of dirichlet_energy.
    const auto a = grid.edge_areas();
    const auto w = grid.weights();
    const double h = grid.spacing();
    const std::size_t n = rhs.size();
    std::vector<double> upper(n, 0.0);
    Profile x(n);
    double prev_upper = 0.0;
    double prev_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? -a[i - 1] / h : 0.0;
        const double diag = (i > 0 ? a[i - 1] / h : 0.0) + a[i] / h + shift * w[i];
        const double right = i + 1 < n ? -a[i] / h : 0.0;
        const double pivot = diag - left * prev_upper;
        upper[i] = right / pivot;
        x[i] = (w[i] * rhs[i] - left * prev_x) / pivot;
        prev_upper = upper[i];
        prev_x = x[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= upper[i] * x[i + 1];
    }
    return x;
}

} // namespace radsol
