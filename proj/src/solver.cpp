#include "radsol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace radsol {

std::string_view to_string(Termination reason)
{
    switch (reason) {
    case Termination::Converged:
        return "converged";
    case Termination::ComponentCollapse:
        return "component collapse";
    case Termination::Stalled:
        return "stalled";
    case Termination::IterationCap:
        return "iteration cap";
    case Termination::LineSearchFailure:
        return "line-search failure";
    }
    return "unknown";
}

void SolveOptions::validate() const
{
    if (!(gradient_tolerance > 0.0) || !(energy_stall_tolerance > 0.0) || !(initial_step > 0.0) ||
        !(sufficient_decrease > 0.0 && sufficient_decrease < 1.0)) {
        throw std::invalid_argument("SolveOptions: tolerances and step must be positive");
    }
    if (!(shrink > 0.0 && shrink < 1.0)) {
        throw std::invalid_argument("SolveOptions: shrink must lie in (0, 1)");
    }
    if (stall_window == 0) {
        throw std::invalid_argument("SolveOptions: stall window must be positive");
    }
}

FieldSet initial_fields(const RadialGrid& grid, const PotentialSpec& spec, const SolveOptions& opts,
                        std::vector<double>* used_v)
{
    const std::size_t k = spec.components();
    switch (opts.init) {
    case InitMode::TestProfile: {
        std::vector<double> v = opts.init_v;
        if (v.empty()) {
            WitnessSearch search;
            search.seed = opts.seed;
            const auto witness = find_H3_witness(spec, search);
            v = witness ? witness->v : std::vector<double>(k, 1.0);
        }
        if (v.size() != k) {
            throw std::invalid_argument("initial test profile: v must have one entry per component");
        }
        if (used_v != nullptr) {
            *used_v = v;
        }
        return build_test_profile(grid, v, opts.init_radius);
    }
    case InitMode::Gaussian: {
        if (opts.gaussian_amplitudes.size() != k || opts.gaussian_widths.size() != k) {
            throw std::invalid_argument("gaussian init: need one amplitude and one width per component");
        }
        FieldSet u(k, grid.size());
        const auto r = grid.nodes();
        for (std::size_t i = 0; i < k; ++i) {
            if (!(opts.gaussian_widths[i] > 0.0)) {
                throw std::invalid_argument("gaussian init: widths must be positive");
            }
            for (std::size_t j = 0; j < r.size(); ++j) {
                const double x = r[j] / opts.gaussian_widths[i];
                u[i][j] = opts.gaussian_amplitudes[i] * std::exp(-x * x);
            }
        }
        return u;
    }
    case InitMode::FromFields:
        check_fields(grid, spec, opts.init_fields);
        return opts.init_fields;
    }
    throw std::invalid_argument("unknown init mode");
}

namespace {

double weighted_dot(const RadialGrid& grid, const FieldSet& a, const FieldSet& b)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < a.components(); ++i) {
        sum += inner(grid, a[i], b[i]);
    }
    return sum;
}

double relative_gradient(const RadialGrid& grid, const ReducedEvaluation& eval)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < eval.gradient.components(); ++i) {
        worst = std::max(worst, std::sqrt(norm_squared(grid, eval.gradient[i]) / eval.norms_squared[i]));
    }
    return worst;
}

bool coercivity_holds(const ReducedEvaluation& eval, const ChargeVector& charge)
{
    const double twice_energy = 2.0 * eval.energy;
    if (eval.gradient_squared > twice_energy) {
        return false;
    }
    for (std::size_t i = 0; i < charge.size(); ++i) {
        if (eval.omega[i] > twice_energy / charge[i]) {
            return false;
        }
    }
    return true;
}

} // namespace

SolveResult minimize(const RadialGrid& grid, const PotentialSpec& spec, const ChargeVector& charge,
                     const SolveOptions& opts)
{
    opts.validate();
    const H2Result h2 = check_H2(spec, grid.dimension());
    if (!h2.report.pass) {
        throw std::invalid_argument("minimize: growth condition H2 fails (" + h2.report.notes + ")");
    }
    const std::size_t k = spec.components();
    if (charge.size() != k) {
        throw std::invalid_argument("minimize: charge must have one entry per component");
    }

    SolveResult result;
    FieldSet u = initial_fields(grid, spec, opts, &result.init_v);
    check_fields(grid, spec, u);
    if (opts.absolute_value_step) {
        for (auto& component : u.data()) {
            for (double& x : component) {
                x = std::abs(x);
            }
        }
    }

    double h1_box = opts.h1_box;
    for (std::size_t i = 0; i < k; ++i) {
        for (double x : u[i]) {
            h1_box = std::max(h1_box, 2.0 * std::abs(x));
        }
    }
    result.h1_passed = k <= 4 ? check_H1(spec, h1_box, opts.h1_samples).pass
                              : check_H1(spec, h1_box, std::min<std::size_t>(opts.h1_samples, 11)).pass;

    const auto masses = spec.masses();
    auto precondition = [&](const FieldSet& gradient) {
        FieldSet z(k, grid.size());
        for (std::size_t i = 0; i < k; ++i) {
            z[i] = solve_shifted_laplacian(grid, masses[i] * masses[i], gradient[i]);
        }
        return z;
    };

    ReducedEvaluation current;
    try {
        current = evaluate_reduced(grid, spec, u, charge, true);
    } catch (const VanishingComponent& e) {
        result.fields = std::move(u);
        result.reason = Termination::ComponentCollapse;
        result.detail = e.what();
        result.omega.values.assign(k, 0.0);
        result.charges.assign(k, 0.0);
        return result;
    }
    result.energy_history.push_back(current.energy);

    FieldSet z = precondition(current.gradient);
    FieldSet direction = z;
    for (auto& component : direction.data()) {
        for (double& x : component) {
            x = -x;
        }
    }
    double zg = weighted_dot(grid, z, current.gradient);
    double step = opts.initial_step;
    std::size_t since_restart = 0;
    bool done = false;
    std::size_t iteration = 0;
    FieldSet trial = u;

    for (; iteration < opts.max_iterations && !done; ++iteration) {
        result.gradient_norm = relative_gradient(grid, current);
        if (result.gradient_norm <= opts.gradient_tolerance) {
            result.reason = Termination::Converged;
            done = true;
            break;
        }

        double slope = weighted_dot(grid, current.gradient, direction);
        if (!(slope < 0.0)) {
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    direction[i][j] = -z[i][j];
                }
            }
            slope = -zg;
            since_restart = 0;
        }

        // Armijo backtracking; a trial that empties a component counts as a rejection.
        auto search = [&](double start) {
            std::optional<ReducedEvaluation> found;
            for (step = start; step >= 1e-18; step *= opts.shrink) {
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < grid.size(); ++j) {
                        double x = u[i][j] + step * direction[i][j];
                        trial[i][j] = opts.absolute_value_step ? std::abs(x) : x;
                    }
                }
                try {
                    ReducedEvaluation eval = evaluate_reduced(grid, spec, trial, charge, true);
                    if (eval.energy <= current.energy + opts.sufficient_decrease * step * slope &&
                        eval.energy < current.energy) {
                        found = std::move(eval);
                        break;
                    }
                } catch (const VanishingComponent&) {
                }
            }
            return found;
        };
        const double start = step;
        std::optional<ReducedEvaluation> accepted = search(start);
        if (!accepted && (start < 1.0 || since_restart != 0)) {
            // a small remembered step can start inside the rounding floor
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    direction[i][j] = -z[i][j];
                }
            }
            slope = -zg;
            since_restart = 0;
            accepted = search(std::max(start, 1.0));
        }
        if (!accepted) {
            result.reason = Termination::LineSearchFailure;
            result.detail = "step underflow in backtracking line search";
            done = true;
            break;
        }

        std::swap(u, trial);
        ReducedEvaluation previous = std::move(current);
        current = std::move(*accepted);
        result.energy_history.push_back(current.energy);
        if (result.h1_passed && !coercivity_holds(current, charge)) {
            ++result.coercivity_violations;
        }

        // Polak-Ribiere+ on the preconditioned gradient
        FieldSet z_next = precondition(current.gradient);
        const double zg_next = weighted_dot(grid, z_next, current.gradient);
        const double cross = weighted_dot(grid, z_next, previous.gradient);
        double beta = zg > 0.0 ? std::max(0.0, (zg_next - cross) / zg) : 0.0;
        if (++since_restart >= 200) {
            beta = 0.0;
            since_restart = 0;
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                direction[i][j] = -z_next[i][j] + beta * direction[i][j];
            }
        }
        z = std::move(z_next);
        zg = zg_next;
        step = std::min(step / opts.shrink, 1e6);

        const auto& history = result.energy_history;
        if (history.size() > opts.stall_window) {
            const double earlier = history[history.size() - 1 - opts.stall_window];
            if (earlier - current.energy <= opts.energy_stall_tolerance * std::abs(current.energy)) {
                result.gradient_norm = relative_gradient(grid, current);
                if (result.gradient_norm > opts.gradient_tolerance) {
                    result.reason = Termination::Stalled;
                    result.detail = "energy decrease below the stall tolerance over the stall window";
                    ++iteration;
                    done = true;
                    break;
                }
            }
        }
    }
    if (!done) {
        result.reason = Termination::IterationCap;
        result.detail = "iteration cap reached";
    }
    result.gradient_norm = relative_gradient(grid, current);
    result.iterations = iteration;

    result.fields = std::move(u);
    result.omega = current.omega;
    result.energy = current.energy;
    result.charges.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        result.charges[i] = result.omega[i] * current.norms_squared[i];
    }
    result.el_residuals = el_residual(grid, spec, result.fields, result.omega).values;

    VerifyTolerances tolerances;
    tolerances.el_residual = opts.el_tolerance;
    tolerances.constraint = opts.constraint_tolerance;
    tolerances.h1_passed = result.h1_passed;
    result.verification = verify_solution(grid, spec, result.fields, result.omega, charge, tolerances);

    if (result.reason == Termination::Converged) {
        // A stationary point with omega_i >= m_i, or with its mass piled up near r_max,
        // is held in place by the truncation radius and is not a standing wave on R^N.
        std::ostringstream held;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(result.omega[i] < masses[i])) {
                held << " omega_" << i + 1 << " = " << result.omega[i] << " >= m_" << i + 1 << " = " << masses[i]
                     << ";";
            }
            if (!(result.verification.tail_fractions[i] <= tolerances.tail_fraction)) {
                held << " tail share of u_" << i + 1 << " = " << result.verification.tail_fractions[i] << ";";
            }
        }
        if (!held.str().empty()) {
            result.reason = Termination::Stalled;
            result.detail = "stationary only because of the truncation boundary (no decaying profile):" + held.str();
        } else {
            result.detail = "gradient tolerance reached";
        }
    }
    result.converged = result.reason == Termination::Converged;
    return result;
}

std::vector<ScanEntry> scan_charge(const RadialGrid& grid, const PotentialSpec& spec,
                                   const std::vector<ChargeVector>& charges, const SolveOptions& opts)
{
    if (charges.empty()) {
        throw std::invalid_argument("scan_charge: empty charge list");
    }
    std::vector<ScanEntry> entries;
    std::optional<SolveResult> warm;
    for (const ChargeVector& charge : charges) {
        ScanEntry entry{charge, std::nullopt, {}};
        try {
            SolveOptions run = opts;
            if (warm) {
                run.init = InitMode::FromFields;
                run.init_fields = warm->fields;
                for (std::size_t i = 0; i < spec.components(); ++i) {
                    const double target = charge[i] / warm->omega[i];
                    const double current = norm_squared(grid, run.init_fields[i]);
                    const double scale = std::sqrt(target / current);
                    for (double& x : run.init_fields[i]) {
                        x *= scale;
                    }
                }
            }
            SolveResult result = minimize(grid, spec, charge, run);
            if (result.converged) {
                warm = result;
            }
            entry.result = std::move(result);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

} // namespace radsol
