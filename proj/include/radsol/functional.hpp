#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "radsol/potential.hpp"
#include "radsol/radial_grid.hpp"

namespace radsol {

/// k radial profiles sharing one grid.
class FieldSet {
public:
    FieldSet() = default;
    explicit FieldSet(std::vector<Profile> components) : components_(std::move(components)) {}
    FieldSet(std::size_t k, std::size_t n) : components_(k, Profile(n, 0.0)) {}

    std::size_t components() const { return components_.size(); }
    std::size_t nodes() const { return components_.empty() ? 0 : components_.front().size(); }

    Profile& operator[](std::size_t i) { return components_[i]; }
    const Profile& operator[](std::size_t i) const { return components_[i]; }

    std::vector<Profile>& data() { return components_; }
    const std::vector<Profile>& data() const { return components_; }

    bool operator==(const FieldSet&) const = default;

private:
    std::vector<Profile> components_;
};

/// omega_1..omega_k
struct Frequencies {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// C_1..C_k, all strictly positive.
class ChargeVector {
public:
    explicit ChargeVector(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    bool operator==(const ChargeVector&) const = default;

private:
    std::vector<double> values_;
};

/// Thrown when ||u_i||^2 drops below the grid's floor_norm.
class VanishingComponent : public std::runtime_error {
public:
    VanishingComponent(std::size_t component, double norm_squared);
    std::size_t component() const { return component_; }
    double norm_squared() const { return norm_squared_; }

private:
    std::size_t component_;
    double norm_squared_;
};

/// Throws std::invalid_argument if u does not fit (grid, spec).
void check_fields(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u);

/// int F(u) + sum_i 1/2 ||grad u_i||^2 + 1/2 sum_i omega_i^2 ||u_i||^2
double total_energy(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, const Frequencies& omega);

/// omega_i = C_i / ||u_i||^2
Frequencies recover_omega(const RadialGrid& grid, const FieldSet& u, const ChargeVector& charge);

/// total_energy with omega eliminated through the charge constraint:
/// int F(u) + sum_i 1/2 ||grad u_i||^2 + 1/2 sum_i C_i^2 / ||u_i||^2
double reduced_energy(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, const ChargeVector& charge);

/// Weighted-L^2 gradient of reduced_energy:
/// -Delta u_i + D_i F(u) - omega_i^2 u_i with omega from recover_omega.
FieldSet reduced_gradient(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                          const ChargeVector& charge);

/// Energy and gradient in one sweep; used by the solver.
struct ReducedEvaluation {
    double energy = 0.0;
    /// sum_i ||grad u_i||^2
    double gradient_squared = 0.0;
    std::vector<double> norms_squared;
    Frequencies omega;
    FieldSet gradient;
};

/// If want_gradient is false, `gradient` is left empty.
ReducedEvaluation evaluate_reduced(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u,
                                   const ChargeVector& charge, bool want_gradient);

struct ElResidual {
    /// ||-Delta u_i + D_i F(u) - omega_i^2 u_i|| / ||u_i|| (weighted L^2).
    std::vector<double> values;
    /// Set for components with ||u_i|| = 0; their value is left unnormalized.
    std::vector<bool> unnormalized;

    double max() const;
};

ElResidual el_residual(const RadialGrid& grid, const PotentialSpec& spec, const FieldSet& u, const Frequencies& omega);

/// u_i = v_i on [0, r], v_i (1 + r - rho) on [r, r + 1], 0 beyond.
FieldSet build_test_profile(const RadialGrid& grid, std::span<const double> v, double r);

} // namespace radsol
