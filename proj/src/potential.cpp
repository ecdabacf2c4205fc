#include "radsol/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace radsol {

namespace {

double power(double x, const auto& factor)
{
    if (factor.integer_exponent >= 0) {
        double result = 1.0;
        for (int i = 0; i < factor.integer_exponent; ++i) {
            result *= x;
        }
        return result;
    }
    return std::pow(x, factor.exponent);
}

double sign(double x)
{
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

// Lattice of s points per axis on [-A, A]^k, visited in lexicographic order.
template <typename Visit>
void for_each_lattice_point(std::size_t k, double half_width, std::size_t samples, Visit&& visit)
{
    std::vector<std::size_t> index(k, 0);
    std::vector<double> point(k);
    const double span = 2.0 * half_width;
    const double intervals = static_cast<double>(samples > 1 ? samples - 1 : 1);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) {
            // symmetric about 0 so that integer multiples of step are hit exactly
            const double offset = static_cast<double>(index[i]) - 0.5 * static_cast<double>(samples - 1);
            point[i] = samples > 1 ? offset * span / intervals : 0.0;
        }
        visit(std::span<const double>(point));
        std::size_t axis = 0;
        while (axis < k && ++index[axis] == samples) {
            index[axis] = 0;
            ++axis;
        }
        if (axis == k) {
            break;
        }
    }
}

constexpr double kMaxLatticePoints = 1e7;

} // namespace

double Monomial::degree() const
{
    return std::accumulate(exponents.begin(), exponents.end(), 0.0);
}

std::size_t Monomial::arity() const
{
    return static_cast<std::size_t>(std::count_if(exponents.begin(), exponents.end(), [](double e) { return e != 0.0; }));
}

PotentialSpec::PotentialSpec(std::vector<double> masses, std::vector<Monomial> terms)
    : masses_(std::move(masses)), terms_(std::move(terms))
{
    if (masses_.empty()) {
        throw std::invalid_argument("PotentialSpec: need at least one component");
    }
    for (double m : masses_) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw std::invalid_argument("PotentialSpec: masses must be positive and finite");
        }
    }
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const Monomial& term = terms_[t];
        const std::string where = "PotentialSpec: term " + std::to_string(t + 1) + ": ";
        if (term.exponents.size() != masses_.size()) {
            throw std::invalid_argument(where + "expected " + std::to_string(masses_.size()) + " exponents, got " +
                                        std::to_string(term.exponents.size()));
        }
        if (!std::isfinite(term.coefficient)) {
            throw std::invalid_argument(where + "coefficient must be finite");
        }
        CompiledTerm compiled{term.coefficient, {}};
        for (std::size_t i = 0; i < term.exponents.size(); ++i) {
            const double e = term.exponents[i];
            if (!std::isfinite(e) || e < 0.0 || (e != 0.0 && e < 1.0)) {
                throw std::invalid_argument(where + "exponents must be 0 or >= 1");
            }
            if (e == 0.0) {
                continue;
            }
            const bool small_integer = e == std::floor(e) && e <= 16.0;
            compiled.factors.push_back({i, e, small_integer ? static_cast<int>(e) : -1});
        }
        if (compiled.factors.empty()) {
            throw std::invalid_argument(where + "constant terms are not allowed (R(0) must vanish)");
        }
        compiled_.push_back(std::move(compiled));
    }
}

double PotentialSpec::R(std::span<const double> u) const
{
    double sum = 0.0;
    for (const CompiledTerm& term : compiled_) {
        double product = term.coefficient;
        for (const Factor& f : term.factors) {
            product *= power(std::abs(u[f.component]), f);
        }
        sum += product;
    }
    return sum;
}

double PotentialSpec::F(std::span<const double> u) const
{
    double quadratic = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        quadratic += masses_[i] * masses_[i] * u[i] * u[i];
    }
    return 0.5 * quadratic + R(u);
}

void PotentialSpec::gradient_R(std::span<const double> u, std::span<double> grad) const
{
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const CompiledTerm& term : compiled_) {
        for (std::size_t a = 0; a < term.factors.size(); ++a) {
            const Factor& fa = term.factors[a];
            const double x = u[fa.component];
            double d = term.coefficient * fa.exponent * sign(x);
            if (d == 0.0) {
                continue;
            }
            if (fa.exponent != 1.0) {
                const Factor lowered{fa.component, fa.exponent - 1.0,
                                     fa.integer_exponent >= 0 ? fa.integer_exponent - 1 : -1};
                d *= power(std::abs(x), lowered);
            }
            for (std::size_t b = 0; b < term.factors.size(); ++b) {
                if (b != a) {
                    d *= power(std::abs(u[term.factors[b].component]), term.factors[b]);
                }
            }
            grad[fa.component] += d;
        }
    }
}

void PotentialSpec::gradient_F(std::span<const double> u, std::span<double> grad) const
{
    gradient_R(u, grad);
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        grad[i] += masses_[i] * masses_[i] * u[i];
    }
}

double eval_F(const PotentialSpec& spec, std::span<const double> u)
{
    if (u.size() != spec.components()) {
        throw std::invalid_argument("eval_F: wrong number of components");
    }
    return spec.F(u);
}

std::vector<double> eval_gradR(const PotentialSpec& spec, std::span<const double> u)
{
    if (u.size() != spec.components()) {
        throw std::invalid_argument("eval_gradR: wrong number of components");
    }
    std::vector<double> grad(u.size());
    spec.gradient_R(u, grad);
    return grad;
}

double critical_exponent(int dimension)
{
    if (dimension <= 2) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * dimension / (dimension - 2.0);
}

ConditionReport check_H1(const PotentialSpec& spec, double box_half_width, std::size_t samples_per_axis,
                         double tolerance)
{
    if (!(box_half_width > 0.0)) {
        throw std::invalid_argument("check_H1: box half width must be positive");
    }
    if (samples_per_axis < 2) {
        throw std::invalid_argument("check_H1: need at least 2 samples per axis");
    }
    const std::size_t k = spec.components();
    if (std::pow(static_cast<double>(samples_per_axis), static_cast<double>(k)) > kMaxLatticePoints || k > 12) {
        throw std::invalid_argument("check_H1: lattice of " + std::to_string(samples_per_axis) + "^" +
                                    std::to_string(k) + " points is too large");
    }

    double min_value = std::numeric_limits<double>::infinity();
    std::vector<double> argmin(k, 0.0);
    auto consider = [&](std::span<const double> point) {
        const double value = spec.F(point);
        if (value < min_value || std::isnan(value)) {
            min_value = value;
            argmin.assign(point.begin(), point.end());
        }
    };
    for_each_lattice_point(k, box_half_width, samples_per_axis, consider);

    // far field: rays through the nonzero points of {-1, 0, 1}^k
    std::vector<double> point(k);
    std::size_t rays = 0;
    for_each_lattice_point(k, 1.0, 3, [&](std::span<const double> direction) {
        const double length = std::sqrt(std::inner_product(direction.begin(), direction.end(), direction.begin(), 0.0));
        if (length == 0.0) {
            return;
        }
        ++rays;
        for (int j = 1; j <= 24; ++j) {
            const double radius = box_half_width * std::ldexp(1.0, j);
            for (std::size_t i = 0; i < k; ++i) {
                point[i] = radius * direction[i] / length;
            }
            consider(point);
        }
    });

    ConditionReport report;
    report.name = "H1";
    report.margin = min_value;
    report.pass = min_value >= -tolerance;
    report.witness.push_back(argmin);
    std::ostringstream notes;
    notes << "sampled evidence, not a proof: " << samples_per_axis << "^" << k << " lattice on [-" << box_half_width
          << ", " << box_half_width << "]^" << k << " plus " << rays << " far-field rays; margin = min F";
    report.notes = notes.str();
    return report;
}

H2Result check_H2(const PotentialSpec& spec, int dimension)
{
    H2Result result;
    result.report.name = "H2";
    const double critical = critical_exponent(dimension);
    const auto terms = spec.terms();
    if (terms.empty()) {
        result.growth.vacuous = true;
        result.growth.p = std::numeric_limits<double>::quiet_NaN();
        result.growth.q = result.growth.p;
        result.report.pass = true;
        result.report.margin = critical - 2.0;
        result.report.notes = "R = 0: growth condition holds vacuously";
        return result;
    }

    double p = std::numeric_limits<double>::infinity();
    double q = -std::numeric_limits<double>::infinity();
    for (const Monomial& term : terms) {
        p = std::min(p, term.degree());
        q = std::max(q, term.degree());
    }
    // |D_i term| <= |c| alpha_i |u|^{d-1}, hence |grad term| <= |c| |alpha| |u|^{d-1};
    // for p < d < q, |u|^{d-1} <= |u|^{p-1} + |u|^{q-1}.
    GrowthData& growth = result.growth;
    growth.p = p;
    growth.q = q;
    for (const Monomial& term : terms) {
        const double alpha_norm = std::sqrt(
            std::inner_product(term.exponents.begin(), term.exponents.end(), term.exponents.begin(), 0.0));
        const double c = std::abs(term.coefficient) * alpha_norm;
        const double d = term.degree();
        if (d == p) {
            growth.c_p_minus_1 += c;
        } else if (d == q) {
            growth.c_q_minus_1 += c;
        } else {
            growth.c_p_minus_1 += c;
            growth.c_q_minus_1 += c;
        }
    }

    result.report.margin = std::min(p - 2.0, critical - q);
    result.report.pass = result.report.margin > 0.0;
    std::ostringstream notes;
    notes << "p = " << p << ", q = " << q << ", 2* = " << critical << "; margin = min(p - 2, 2* - q)";
    if (!result.report.pass && q >= critical) {
        notes << "; critical or supercritical growth is excluded";
    }
    result.report.notes = notes.str();
    return result;
}

H3Result check_H3(const PotentialSpec& spec, std::span<const double> v, std::span<const double> omega)
{
    const std::size_t k = spec.components();
    if (v.size() != k || omega.size() != k) {
        throw std::invalid_argument("check_H3: v and omega must have one entry per component");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (v[i] == 0.0 || !std::isfinite(v[i])) {
            throw std::invalid_argument("check_H3: every coordinate of v must be nonzero");
        }
        if (!(omega[i] > 0.0) || !std::isfinite(omega[i])) {
            throw std::invalid_argument("check_H3: every omega must be positive");
        }
    }
    const double twice_F = 2.0 * spec.F(v);
    double kinetic = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        kinetic += omega[i] * omega[i] * v[i] * v[i];
    }
    const auto m = spec.masses();
    H3Result result;
    result.values.resize(k);
    for (std::size_t h = 0; h < k; ++h) {
        result.values[h] = twice_F + kinetic - m[h] * omega[h] * v[h] * v[h];
    }
    result.report.name = "H3";
    result.report.margin = *std::max_element(result.values.begin(), result.values.end());
    result.report.pass = result.report.margin < 0.0;
    result.report.witness = {std::vector<double>(v.begin(), v.end()), std::vector<double>(omega.begin(), omega.end())};
    result.report.notes = "margin = max_h [2F(v) + sum_i omega_i^2 v_i^2 - m_h omega_h v_h^2]; v and omega both searched";
    return result;
}

std::optional<H3Witness> find_H3_witness(const PotentialSpec& spec, const WitnessSearch& search)
{
    const std::size_t k = spec.components();
    auto all_nonzero = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
    };

    std::vector<double> exponents(k);
    for (std::size_t h = 0; h < k; ++h) {
        exponents[h] = 1.0 + static_cast<double>(h) / (2.0 * static_cast<double>(k));
    }
    std::vector<double> omega(k);
    auto try_ladder = [&](std::span<const double> v) -> std::optional<H3Witness> {
        double eps = search.ladder_first;
        for (std::size_t step = 0; step < search.ladder_steps; ++step, eps *= search.ladder_ratio) {
            for (std::size_t h = 0; h < k; ++h) {
                omega[h] = std::pow(eps, exponents[h]);
            }
            if (check_H3(spec, v, omega).report.pass) {
                return H3Witness{std::vector<double>(v.begin(), v.end()), omega};
            }
        }
        return std::nullopt;
    };

    for (const auto& v : search.candidates) {
        if (v.size() == k && all_nonzero(v)) {
            if (auto found = try_ladder(v)) {
                return found;
            }
        }
    }

    // lattice: exact zeros first, then the lowest values of F
    struct Sample {
        double value;
        std::vector<double> v;
    };
    std::vector<Sample> samples;
    if (std::pow(static_cast<double>(search.samples_per_axis), static_cast<double>(k)) <= kMaxLatticePoints) {
        for_each_lattice_point(k, search.box_half_width, search.samples_per_axis, [&](std::span<const double> v) {
            if (all_nonzero(v)) {
                samples.push_back({spec.F(v), std::vector<double>(v.begin(), v.end())});
            }
        });
    }
    std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.value < b.value; });
    std::size_t tried = 0;
    for (const Sample& s : samples) {
        if (s.value > search.zero_tolerance && tried >= search.lattice_candidates) {
            break;
        }
        ++tried;
        if (auto found = try_ladder(s.v)) {
            return found;
        }
    }

    // coarse random search; H3 forces omega_h < m_h whenever F >= 0
    std::mt19937_64 rng(search.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(k);
    const auto m = spec.masses();
    for (std::size_t trial = 0; trial < search.random_trials; ++trial) {
        for (std::size_t i = 0; i < k; ++i) {
            v[i] = search.box_half_width * (2.0 * unit(rng) - 1.0);
            omega[i] = m[i] * unit(rng);
        }
        if (!all_nonzero(v) || std::any_of(omega.begin(), omega.end(), [](double w) { return w <= 0.0; })) {
            continue;
        }
        if (check_H3(spec, v, omega).report.pass) {
            return H3Witness{v, omega};
        }
    }
    return std::nullopt;
}

} // namespace radsol
