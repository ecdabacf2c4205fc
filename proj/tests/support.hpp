#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "radsol/functional.hpp"
#include "radsol/potential.hpp"
#include "radsol/radial_grid.hpp"

namespace radsol::testing {

// F(t) = t^2 (|t| - 1)^2 (|t| + 1/2)
inline PotentialSpec quartic_quintic()
{
    return PotentialSpec({1.0}, {{-1.5, {4.0}}, {1.0, {5.0}}});
}

inline PotentialSpec free_spec(std::size_t k)
{
    return PotentialSpec(std::vector<double>(k, 1.0), {});
}

// two copies of quartic_quintic plus -0.05 |u_1|^2 |u_2|^2
inline PotentialSpec coupled_pair(double coupling = -0.05)
{
    std::vector<Monomial> terms = {{-1.5, {4.0, 0.0}}, {1.0, {5.0, 0.0}}, {-1.5, {0.0, 4.0}}, {1.0, {0.0, 5.0}}};
    if (coupling != 0.0) {
        terms.push_back({coupling, {2.0, 2.0}});
    }
    return PotentialSpec({1.0, 1.0}, terms);
}

// random spec with k components, masses in [0.5, 2] and 1-3 terms of degree 3, 4 or 5
inline PotentialSpec random_spec(std::mt19937_64& rng, std::size_t k)
{
    std::uniform_real_distribution<double> mass(0.5, 2.0);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_int_distribution<int> degree(3, 5);
    std::vector<double> masses(k);
    for (double& m : masses) {
        m = mass(rng);
    }
    std::vector<Monomial> terms;
    const int n_terms = count(rng);
    for (int t = 0; t < n_terms; ++t) {
        const int d = degree(rng);
        std::vector<double> exponents(k, 0.0);
        if (k == 1) {
            exponents[0] = d;
        } else {
            std::uniform_int_distribution<int> split(0, 2);
            const int s = split(rng);
            if (s == 0) {
                exponents[0] = d;
            } else if (s == 1) {
                exponents[k - 1] = d;
            } else {
                exponents[0] = 1.5;
                exponents[k - 1] = d - 1.5;
            }
        }
        terms.push_back({coef(rng), exponents});
    }
    return PotentialSpec(masses, terms);
}

// smooth bump-like random fields, nonzero everywhere inside the support
inline FieldSet random_fields(std::mt19937_64& rng, const RadialGrid& grid, std::size_t k)
{
    std::uniform_real_distribution<double> amp(0.3, 1.5);
    std::uniform_real_distribution<double> width(0.1, 0.4);
    std::uniform_real_distribution<double> wiggle(-0.2, 0.2);
    FieldSet u(k, grid.size());
    const auto r = grid.nodes();
    const double R = grid.r_max();
    for (std::size_t i = 0; i < k; ++i) {
        const double a = amp(rng);
        const double s = width(rng) * R;
        const double b = wiggle(rng);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = r[j] / s;
            u[i][j] = a * std::exp(-x * x) * (1.0 + b * std::cos(3.0 * x)) * (1.0 - r[j] / R);
        }
    }
    return u;
}

inline Profile sample(const RadialGrid& grid, double (*f)(double))
{
    Profile out(grid.size());
    const auto r = grid.nodes();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out[j] = f(r[j]);
    }
    return out;
}

inline double max_abs(const Profile& a)
{
    double m = 0.0;
    for (double x : a) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace radsol::testing
