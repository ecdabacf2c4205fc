// Acceptance runs: `radsol_acceptance N` checks criterion N, no argument runs all.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "radsol/cli.hpp"
#include "radsol/conditions.hpp"
#include "radsol/rearrange.hpp"
#include "radsol/solver.hpp"
#include "support.hpp"

using namespace radsol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double x)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

// collects sub-checks; the first failures end up in the detail
struct Checks {
    bool pass = true;
    std::string text;

    void add(bool ok, const std::string& what)
    {
        pass = pass && ok;
        text += (text.empty() ? "" : "; ") + what + (ok ? "" : " [FAIL]");
    }
    Outcome done() const { return {pass, text}; }
};

FieldSet scaled_sum(const FieldSet& u, double s, const FieldSet& d)
{
    FieldSet out = u;
    for (std::size_t i = 0; i < u.components(); ++i) {
        for (std::size_t j = 0; j < u.nodes(); ++j) {
            out[i][j] += s * d[i][j];
        }
    }
    return out;
}

Outcome gradient_consistency()
{
    const Timer timer;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> freq(0.2, 0.9);
    std::normal_distribution<double> normal;
    const RadialGrid grid(3, 15.0, 200);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + trial % 2;
        const PotentialSpec spec = radsol::testing::random_spec(rng, k);
        const FieldSet u = radsol::testing::random_fields(rng, grid, k);
        std::vector<double> c(k);
        for (std::size_t i = 0; i < k; ++i) {
            c[i] = freq(rng) * norm_squared(grid, u[i]);
        }
        const ChargeVector charge(c);
        const FieldSet g = reduced_gradient(grid, spec, u, charge);
        // direction: smooth modulation of u, keeps u + t d away from the kink of |u|^alpha at 0
        FieldSet d(k, grid.size());
        for (std::size_t i = 0; i < k; ++i) {
            double a[4];
            for (double& x : a) {
                x = normal(rng);
            }
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double x = grid.nodes()[j] / grid.r_max();
                double m = 0.0;
                for (int q = 0; q < 4; ++q) {
                    m += a[q] * std::cos((q + 0.5) * std::numbers::pi * x);
                }
                d[i][j] = m * u[i][j];
            }
        }
        double pairing = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            pairing += inner(grid, g[i], d[i]);
        }
        const double t = 1e-3;
        auto at = [&](double s) { return reduced_energy(grid, spec, scaled_sum(u, s, d), charge); };
        const double fd = (8.0 * (at(t) - at(-t)) - (at(2 * t) - at(-2 * t))) / (12.0 * t);
        worst = std::max(worst, std::abs(fd - pairing) / std::max(std::abs(fd), std::abs(pairing)));
    }
    Checks c;
    c.add(worst <= 1e-6, "max relative mismatch " + num(worst) + " (<= 1e-6)");
    c.add(timer.seconds() < 10.0, "runtime " + num(timer.seconds()) + " s (< 10)");
    return c.done();
}

Outcome linear_oracle()
{
    auto residual = [](std::size_t n) {
        const RadialGrid grid(3, 20.0, n);
        FieldSet u(1, grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double r = grid.nodes()[j];
            u[0][j] = std::sin(std::numbers::pi * r / 20.0) / r;
        }
        const double omega = std::sqrt(1.0 + std::pow(std::numbers::pi / 20.0, 2));
        return el_residual(grid, radsol::testing::free_spec(1), u, Frequencies{{omega}}).max();
    };
    // h = 20 / (n + 1): 2000 -> 4001 halves it
    const double coarse = residual(2000);
    const double fine = residual(4001);
    Checks c;
    c.add(coarse <= 1e-3, "relative residual " + num(coarse) + " (<= 1e-3)");
    c.add(coarse / fine >= 3.2, "ratio on halving h " + num(coarse / fine) + " (>= 3.2)");
    return c.done();
}

Outcome quadratic_lower_bound()
{
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> mass(0.2, 3.0);
    std::uniform_real_distribution<double> freq(0.01, 5.0);
    const RadialGrid grid(3, 20.0, 300);
    int violations = 0;
    double closest = INFINITY;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const FieldSet u = radsol::testing::random_fields(rng, grid, k);
        std::vector<double> masses(k), charges(k);
        double bound = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            masses[i] = mass(rng);
            charges[i] = freq(rng) * norm_squared(grid, u[i]);
            bound += masses[i] * charges[i];
        }
        const double e = reduced_energy(grid, PotentialSpec(masses, {}), u, ChargeVector(charges));
        violations += e < bound;
        closest = std::min(closest, e / bound - 1.0);
    }
    Checks c;
    c.add(violations == 0, std::to_string(violations) + " violations in 100, min E/sum(m C) - 1 = " + num(closest));
    return c.done();
}

Outcome hylomorphy_asymptotics()
{
    const Timer timer;
    const RadialGrid grid(3, 60.0, 6000);
    const std::vector<double> v{1.0};
    const HylomorphyScan scan =
        hylomorphy_scan(grid, radsol::testing::quartic_quintic(), v, Frequencies{{0.1}}, default_radii(grid));
    const auto& last = scan.rows.back();
    const double rel = std::abs(last.normalized_energy / 0.005 - 1.0);
    const auto slope = deficit_slope(scan, 0.005);
    Checks c;
    c.add(last.error.empty() && rel <= 0.05,
          "E/(alpha r^3) at r = " + num(last.r) + " is " + num(last.normalized_energy) + ", off 0.005 by " +
              num(100 * rel) + "% (<= 5%)");
    c.add(slope && std::abs(*slope + 1.0) <= 0.2, "deficit slope " + (slope ? num(*slope) : "n/a") + " (-1 +- 0.2)");
    c.add(timer.seconds() < 30.0, "runtime " + num(timer.seconds()) + " s (< 30)");
    return c.done();
}

SolveResult single_run(std::size_t n, const PotentialSpec& spec, ChargeVector* charge_out = nullptr)
{
    const RadialGrid grid(3, 40.0, n);
    const std::vector<double> v{1.0};
    // the charge is fixed by the recipe on the coarse grid, so both resolutions solve the same problem
    const RadialGrid recipe_grid(3, 40.0, 4000);
    const ChargeVector charge(charge_from_profile(recipe_grid, v, Frequencies{{0.5}}, 8.0));
    if (charge_out) {
        *charge_out = charge;
    }
    SolveOptions opts;
    opts.init_v = v;
    opts.init_radius = 8.0;
    return minimize(grid, spec, charge, opts);
}

Outcome existence_run()
{
    const Timer timer;
    ChargeVector charge({1.0});
    const SolveResult r = single_run(4000, radsol::testing::quartic_quintic(), &charge);
    const SolveResult fine = single_run(8000, radsol::testing::quartic_quintic());
    const double change = std::abs(fine.energy / r.energy - 1.0);
    Checks c;
    c.add(r.converged, "termination " + std::string(to_string(r.reason)));
    c.add(r.el_residuals[0] <= 1e-6, "EL residual " + num(r.el_residuals[0]) + " (<= 1e-6)");
    c.add(r.verification.constraint_residuals[0] <= 1e-12,
          "constraint residual " + num(r.verification.constraint_residuals[0]) + " (<= 1e-12)");
    c.add(r.omega[0] > 0.0 && r.omega[0] < 1.0, "omega " + num(r.omega[0]) + " in (0, 1)");
    c.add(2.0 * r.energy < charge[0], "2E = " + num(2 * r.energy) + " < mC = " + num(charge[0]));
    c.add(fine.converged && change <= 0.01, "energy change on doubling n " + num(change) + " (<= 1%)");
    c.add(timer.seconds() < 120.0, "runtime " + num(timer.seconds()) + " s (< 120)");
    return c.done();
}

Outcome coupled_run()
{
    const PotentialSpec spec = radsol::testing::coupled_pair();
    const RadialGrid grid(3, 40.0, 4000);
    const std::vector<double> v{1.0, 1.0};
    const ChargeVector charge(charge_from_profile(grid, v, Frequencies{{0.5, 0.5}}, 8.0));
    SolveOptions opts;
    opts.init_v = v;
    opts.init_radius = 8.0;
    const SolveResult r = minimize(grid, spec, charge, opts);
    const ConditionReport h1 = check_H1(spec, opts.h1_box, 61);
    Checks c;
    c.add(h1.pass, "H1 sampled: margin " + num(h1.margin));
    c.add(r.converged, "termination " + std::string(to_string(r.reason)));
    double lowest = INFINITY;
    for (std::size_t i = 0; i < 2; ++i) {
        const double norm = norm_squared(grid, r.fields[i]);
        c.add(norm > grid.floor_norm(), "|u_" + std::to_string(i + 1) + "|^2 = " + num(norm));
        c.add(r.omega[i] < spec.masses()[i], "omega_" + std::to_string(i + 1) + " = " + num(r.omega[i]));
        lowest = std::min(lowest, spec.masses()[i] * charge[i]);
    }
    c.add(2.0 * r.energy < lowest, "2E = " + num(2 * r.energy) + " < min m_i C_i = " + num(lowest));
    return c.done();
}

Outcome negative_control()
{
    const PotentialSpec spec = radsol::testing::free_spec(1);
    Checks c;
    for (double factor : {0.25, 1.0, 4.0}) {
        const RadialGrid grid(3, 40.0, 2000);
        const std::vector<double> v{1.0};
        const ChargeVector base(charge_from_profile(grid, v, Frequencies{{0.5}}, 8.0));
        SolveOptions opts;
        opts.init_v = {1.0};
        opts.init_radius = 8.0;
        const ChargeVector charge({factor * base[0]});
        const SolveResult r = minimize(grid, spec, charge, opts);
        const bool interior = r.converged && 2.0 * r.energy < charge[0];
        const bool reason =
            r.reason == Termination::ComponentCollapse || r.reason == Termination::Stalled;
        c.add(!interior && reason && !r.verification.hylomorphy_pass,
              "C x" + num(factor) + ": " + std::string(to_string(r.reason)) + ", hylomorphy " +
                  (r.verification.hylomorphy_pass ? "pass" : "fail"));
    }
    return c.done();
}

Profile annulus(const RadialGrid& grid, double a, double b)
{
    Profile u(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double r = grid.nodes()[j];
        if (r > a && r < b) {
            const double s = std::sin(std::numbers::pi * (r - a) / (b - a));
            u[j] = s * s;
        }
    }
    return u;
}

struct Margins {
    double l2 = 0.0;        // max |after/before - 1|
    double dirichlet = 0.0; // max after/before - 1
    double coupling = 0.0;  // min (after - before) / max(after, before)
};

Margins margins(std::size_t n, double a1, double b1, double a2, double b2)
{
    const RadialGrid grid(3, 10.0, n);
    FieldSet u(2, grid.size());
    u[0] = annulus(grid, a1, b1);
    u[1] = annulus(grid, a2, b2);
    const PotentialSpec spec({1.0, 1.0}, {{-0.05, {2.0, 2.0}}, {-1.5, {4.0, 0.0}}, {1.0, {0.0, 5.0}}});
    const RearrangeReport rep = rearrangement_report(grid, spec, u);
    Margins m;
    m.dirichlet = -INFINITY;
    m.coupling = INFINITY;
    for (std::size_t i = 0; i < 2; ++i) {
        m.l2 = std::max(m.l2, std::abs(rep.l2_after[i] / rep.l2_before[i] - 1.0));
        m.dirichlet = std::max(m.dirichlet, rep.dirichlet_after[i] / rep.dirichlet_before[i] - 1.0);
    }
    for (const auto& t : rep.coupling) {
        m.coupling = std::min(m.coupling, (t.after - t.before) / std::max(t.after, t.before));
    }
    return m;
}

Outcome rearrangement_suite()
{
    struct Case {
        const char* name;
        double a1, b1, a2, b2;
    };
    const Case cases[] = {{"overlapping", 1.0, 5.0, 3.0, 7.0}, {"disjoint", 1.0, 3.0, 5.0, 7.0}};
    // h = 10/(n+1): 1000 -> 2001 halves it, 16015 is the reference at h/16
    Checks c;
    for (const Case& k : cases) {
        const Margins coarse = margins(1000, k.a1, k.b1, k.a2, k.b2);
        const Margins fine = margins(2001, k.a1, k.b1, k.a2, k.b2);
        const Margins ref = margins(16015, k.a1, k.b1, k.a2, k.b2);
        const std::string tag = std::string(k.name) + " ";
        c.add(coarse.l2 <= 1e-3, tag + "L2 drift " + num(coarse.l2));
        c.add(coarse.dirichlet <= 1e-3, tag + "Dirichlet change " + num(coarse.dirichlet));
        c.add(coarse.coupling >= -1e-3, tag + "coupling change " + num(coarse.coupling));
        // shrink test written as fine <= coarse / 2 so that a slack of exactly zero at both levels passes
        auto shrink = [&](const std::string& what, double coarse_slack, double fine_slack) {
            const std::string ratio = fine_slack == 0.0 ? (coarse_slack == 0.0 ? "exact" : "inf")
                                                         : num(coarse_slack / fine_slack);
            c.add(fine_slack <= coarse_slack / 2.0, tag + what + " slack ratio " + ratio);
        };
        shrink("L2", coarse.l2, fine.l2);
        shrink("Dirichlet", std::abs(coarse.dirichlet - ref.dirichlet), std::abs(fine.dirichlet - ref.dirichlet));
        shrink("coupling", std::abs(coarse.coupling - ref.coupling), std::abs(fine.coupling - ref.coupling));
    }
    return c.done();
}

Outcome determinism()
{
    std::random_device rd;
    const fs::path root = fs::temp_directory_path() / ("radsol_accept_" + std::to_string(rd()));
    fs::create_directories(root / "a");
    fs::create_directories(root / "b");
    std::ofstream(root / "k1.cfg") << "dimension = 3\ncomponents = 1\nr_max = 40\nnodes = 4000\nmasses = 1\n"
                                      "term = -1.5 4\nterm = 1 5\nrecipe_v = 1\nrecipe_omega = 0.5\n"
                                      "recipe_radius = 8\ninit_v = 1\ninit_radius = 8\nseed = 7\n";
    auto run = [&](const char* dir) {
        const std::string cfg = (root / "k1.cfg").string();
        const std::string out = (root / dir).string();
        const char* argv[] = {"radsol", "--config", cfg.c_str(), "--out", out.c_str(), "--quiet", "solve"};
        std::ostringstream o, e;
        return run_cli(7, argv, o, e);
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    Checks c;
    c.add(run("a") == kExitSuccess && run("b") == kExitSuccess, "both runs exit 0");
    for (const char* name : {"result.json", "profile.csv"}) {
        const std::string x = slurp(root / "a" / name);
        c.add(!x.empty() && x == slurp(root / "b" / name), std::string(name) + " identical (" +
                                                               std::to_string(x.size()) + " bytes)");
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    return c.done();
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"gradient consistency", gradient_consistency},
        {"linear oracle", linear_oracle},
        {"quadratic lower bound", quadratic_lower_bound},
        {"hylomorphy asymptotics", hylomorphy_asymptotics},
        {"existence run", existence_run},
        {"coupled run", coupled_run},
        {"negative control", negative_control},
        {"rearrangement suite", rearrangement_suite},
        {"determinism", determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1-%zu ...]\n", argv[0], criteria.size());
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty()) {
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
            selected.push_back(n);
        }
    }
    int failed = 0;
    for (int n : selected) {
        Outcome o;
        try {
            o = criteria[n - 1].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %-24s %s  %s\n", n, criteria[n - 1].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
