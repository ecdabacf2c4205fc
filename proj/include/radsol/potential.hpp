#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace radsol {

/// One term coefficient * prod_i |u_i|^{exponents[i]} of the interaction R.
struct Monomial {
    double coefficient = 0.0;
    std::vector<double> exponents;

    double degree() const;
    /// Number of components entering with a nonzero exponent.
    std::size_t arity() const;

    bool operator==(const Monomial&) const = default;
};

/// F(u) = 1/2 sum_i m_i^2 u_i^2 + R(u), with R a finite sum of monomials in
/// |u_i|. Exponents must be 0 or >= 1 and every term has positive degree, so
/// R(0) = 0 and R is C^1.
class PotentialSpec {
public:
    PotentialSpec(std::vector<double> masses, std::vector<Monomial> terms);

    std::size_t components() const { return masses_.size(); }
    std::span<const double> masses() const { return masses_; }
    std::span<const Monomial> terms() const { return terms_; }

    double F(std::span<const double> u) const;
    double R(std::span<const double> u) const;
    /// D_i R(u) written into grad (size k).
    void gradient_R(std::span<const double> u, std::span<double> grad) const;
    /// D_i F(u) = m_i^2 u_i + D_i R(u).
    void gradient_F(std::span<const double> u, std::span<double> grad) const;

    bool operator==(const PotentialSpec& other) const
    {
        return masses_ == other.masses_ && terms_ == other.terms_;
    }

private:
    struct Factor {
        std::size_t component;
        double exponent;
        int integer_exponent; // -1 when the exponent is not a small integer
    };
    struct CompiledTerm {
        double coefficient;
        std::vector<Factor> factors;
    };

    std::vector<double> masses_;
    std::vector<Monomial> terms_;
    std::vector<CompiledTerm> compiled_;
};

double eval_F(const PotentialSpec& spec, std::span<const double> u);
std::vector<double> eval_gradR(const PotentialSpec& spec, std::span<const double> u);

/// 2N / (N - 2).
double critical_exponent(int dimension);

/// Pass/fail record for a hypothesis or inequality. `pass` always agrees with
/// the sign convention documented for `margin` by the producing check.
struct ConditionReport {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::vector<std::vector<double>> witness;
    std::string notes;
};

/// Growth data for |grad R(u)| <= c_{p-1}|u|^{p-1} + c_{q-1}|u|^{q-1}.
/// `vacuous` is set when R has no terms; p and q are then NaN.
struct GrowthData {
    double p = 0.0;
    double q = 0.0;
    double c_p_minus_1 = 0.0;
    double c_q_minus_1 = 0.0;
    bool vacuous = false;
};

struct H2Result {
    GrowthData growth;
    ConditionReport report;
};

struct H3Result {
    std::vector<double> values;
    ConditionReport report;
};

/// Samples F on the lattice of [-A, A]^k and along far-field rays.
/// margin = min sampled F, pass iff margin >= -tolerance.
ConditionReport check_H1(const PotentialSpec& spec, double box_half_width, std::size_t samples_per_axis,
                         double tolerance = 0.0);

/// margin = min(p - 2, 2* - q); pass iff margin > 0 (or R = 0).
H2Result check_H2(const PotentialSpec& spec, int dimension);

/// values[h] = 2F(v) + sum_i omega_i^2 v_i^2 - m_h omega_h v_h^2;
/// margin = max_h values[h], pass iff margin < 0.
H3Result check_H3(const PotentialSpec& spec, std::span<const double> v, std::span<const double> omega);

struct WitnessSearch {
    /// Explicit v candidates tried before the lattice.
    std::vector<std::vector<double>> candidates;
    double box_half_width = 3.0;
    std::size_t samples_per_axis = 61;
    /// F(v) <= zero_tolerance counts as a zero of F.
    double zero_tolerance = 1e-10;
    /// Lowest-F lattice points tried after the exact zeros.
    std::size_t lattice_candidates = 32;
    /// Geometric ladder eps_j = first * ratio^j, j < steps.
    double ladder_first = 0.5;
    double ladder_ratio = 0.5;
    std::size_t ladder_steps = 30;
    std::size_t random_trials = 20000;
    std::uint64_t seed = 0;
};

struct H3Witness {
    std::vector<double> v;
    std::vector<double> omega;
};

/// Finds (v, omega) passing check_H3, or nothing. omega follows the staggered
/// ladder omega_h = eps^{s_h}, s_h = 1 + h / (2k), so omega_i^2 = o(omega_j).
std::optional<H3Witness> find_H3_witness(const PotentialSpec& spec, const WitnessSearch& search = {});

} // namespace radsol
