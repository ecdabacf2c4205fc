#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace radsol {

// Nodal values of a radial function on a RadialGrid. Index i holds the value
// at r = (i + 1) h. The value at r_max is 0 (Dirichlet); the origin is handled
// by even reflection.
using Profile = std::vector<double>;

/// Volume of the unit ball in R^N.
double unit_ball_volume(int dimension);

/// Uniform discretization of [0, r_max] for radially symmetric functions on
/// R^N, N >= 3.
///
/// Node i (0-based) sits at r_i = (i + 1) h with h = r_max / (n + 1). Each node
/// owns the spherical shell between the midpoints of its neighbouring edges;
/// the first node owns the ball of radius 1.5 h. Weights are the exact shell
/// volumes, so they sum to alpha(N) ((n + 1/2) h)^N and quadrature reduces to
/// the midpoint rule in the radial variable.
class RadialGrid {
public:
    RadialGrid(int dimension, double r_max, std::size_t n);

    int dimension() const { return dimension_; }
    double r_max() const { return r_max_; }
    std::size_t size() const { return nodes_.size(); }
    double spacing() const { return h_; }

    /// alpha(N)
    double ball_volume() const { return ball_volume_; }
    /// S_N = N alpha(N)
    double sphere_area() const { return dimension_ * ball_volume_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// S_N r^{N-1} at the midpoint between node i and node i + 1. The last
    /// entry belongs to the edge joining node n - 1 to the boundary value.
    std::span<const double> edge_areas() const { return edge_areas_; }

    /// Threshold on ||u_i||^2 below which a component is treated as vanished.
    double floor_norm() const;

    /// Throws std::invalid_argument unless values.size() == size().
    void check(std::span<const double> values) const;

private:
    int dimension_;
    double r_max_;
    double h_;
    double ball_volume_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> edge_areas_;
};

RadialGrid build_grid(int dimension, double r_max, std::size_t n);

/// Sum of w_i f_i, approximating the integral of f(|x|) over R^N.
double integrate(const RadialGrid& grid, std::span<const double> f);

/// Weighted L^2 norm squared, integrate(u * u).
double norm_squared(const RadialGrid& grid, std::span<const double> u);

/// Weighted inner product, integrate(u * v).
double inner(const RadialGrid& grid, std::span<const double> u, std::span<const double> v);

/// 1/2 ||grad u||^2 by the edge (midpoint) rule, including the edge to the
/// Dirichlet boundary value.
double dirichlet_energy(const RadialGrid& grid, std::span<const double> u);

/// Discrete radial Laplacian: minus the gradient of dirichlet_energy with
/// respect to nodal values, divided by the node weights. Symmetric in the
/// weighted inner product and satisfies
/// dirichlet_energy(u) = -1/2 inner(laplacian_apply(u), u) to rounding.
Profile laplacian_apply(const RadialGrid& grid, std::span<const double> u);

/// Solves (-Delta + shift) x = rhs with the discrete Laplacian above. The
/// system is symmetric positive definite for shift >= 0.
Profile solve_shifted_laplacian(const RadialGrid& grid, double shift, std::span<const double> rhs);

namespace detail {

// Neumaier compensated summation. Summation order is the caller's loop order.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace detail

} // namespace radsol
