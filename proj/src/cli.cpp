#include "radsol/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "radsol/config.hpp"
#include "radsol/report_io.hpp"

namespace radsol {

using nlohmann::json;

namespace {

struct Context {
    RunConfig config;
    std::string config_path;
    std::filesystem::path out_dir;
    bool quiet = false;
    std::ostream* out = nullptr;
};

json tool_block()
{
    return {{"name", "radsol"}, {"version", RADSOL_VERSION}};
}

json envelope(const std::string& schema, const Context& ctx)
{
    return {{"schema", schema}, {"tool", tool_block()}, {"config", to_config_text(ctx.config)}};
}

std::string output_path(const Context& ctx, const std::string& name)
{
    return (ctx.out_dir / name).string();
}

void write_json(const Context& ctx, const std::string& name, const json& document)
{
    write_file_atomic(output_path(ctx, name), document.dump(2) + "\n");
}

std::string fmt(double x)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", x);
    return buffer;
}

std::string fmt(std::span<const double> xs)
{
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? ", " : "") + fmt(xs[i]);
    }
    return s + ")";
}

void print_condition(const Context& ctx, const ConditionReport& r)
{
    if (!ctx.quiet) {
        *ctx.out << std::left << std::setw(6) << r.name << std::setw(6) << (r.pass ? "pass" : "FAIL")
                 << "margin " << std::setw(14) << fmt(r.margin) << r.notes << '\n';
    }
}

std::optional<H3Witness> witness_for(const RunConfig& config, const PotentialSpec& spec)
{
    WitnessSearch search;
    search.candidates = config.check.witness_candidates;
    search.box_half_width = config.check.h1_box;
    search.samples_per_axis = config.check.h1_samples;
    search.seed = config.solver.seed;
    return find_H3_witness(spec, search);
}

int cmd_check(const Context& ctx)
{
    const RunConfig& config = ctx.config;
    const PotentialSpec spec = config.potential();
    json doc = envelope("radsol.check/1", ctx);

    const ConditionReport h1 = check_H1(spec, config.check.h1_box, config.check.h1_samples);
    const H2Result h2 = check_H2(spec, config.problem.dimension);
    print_condition(ctx, h1);
    print_condition(ctx, h2.report);
    doc["h1"] = to_json(h1);
    doc["h2"] = {{"growth", to_json(h2.growth)}, {"report", to_json(h2.report)}};

    bool h3_pass = false;
    const auto witness = witness_for(config, spec);
    if (witness) {
        const H3Result h3 = check_H3(spec, witness->v, witness->omega);
        h3_pass = h3.report.pass;
        print_condition(ctx, h3.report);
        doc["h3_witness"] = {{"v", witness->v}, {"omega", witness->omega}, {"values", h3.values},
                             {"report", to_json(h3.report)}};
    } else {
        doc["h3_witness"] = nullptr;
        if (!ctx.quiet) {
            *ctx.out << "H3    FAIL  no witness (v, omega) found\n";
        }
    }
    if (!config.hylomorphy.v.empty() && !config.hylomorphy.omega.empty()) {
        const H3Result h3 = check_H3(spec, config.hylomorphy.v, config.hylomorphy.omega);
        doc["h3_configured"] = {{"values", h3.values}, {"report", to_json(h3.report)}};
        print_condition(ctx, h3.report);
    }
    const bool all_pass = h1.pass && h2.report.pass && h3_pass;
    doc["all_pass"] = all_pass;
    write_json(ctx, "check.json", doc);
    return all_pass ? kExitSuccess : kExitCheckFailed;
}

SolveOptions options_for(const Context& ctx, const RadialGrid& grid, const PotentialSpec& spec)
{
    SolveOptions opts = ctx.config.solve_options();
    if (opts.init == InitMode::FromFields) {
        if (ctx.config.solver.init_file.empty()) {
            throw ConfigError(0, "init = file requires init_file");
        }
        opts.init_fields = read_profile_csv_file(ctx.config.solver.init_file, grid, spec.components());
    }
    return opts;
}

void print_result(const Context& ctx, const SolveResult& r)
{
    if (ctx.quiet) {
        return;
    }
    auto& out = *ctx.out;
    out << "termination  " << to_string(r.reason) << (r.converged ? "" : " (not converged)") << '\n'
        << "detail       " << r.detail << '\n'
        << "iterations   " << r.iterations << '\n'
        << "energy       " << fmt(r.energy) << '\n'
        << "omega        " << fmt(r.omega.values) << '\n'
        << "charges      " << fmt(r.charges) << '\n'
        << "EL residual  " << fmt(r.el_residuals) << '\n'
        << "2E - m_i C_i " << fmt(r.verification.hylomorphy_margins) << '\n'
        << "verification " << (r.verification.all_pass() ? "pass" : "FAIL") << '\n';
}

int cmd_solve(const Context& ctx)
{
    const RunConfig& config = ctx.config;
    const RadialGrid grid = config.grid();
    const PotentialSpec spec = config.potential();
    const ChargeVector charge = config.base_charge(grid);
    const SolveOptions opts = options_for(ctx, grid, spec);

    const SolveResult result = minimize(grid, spec, charge, opts);
    print_result(ctx, result);

    json doc = envelope("radsol.solve/1", ctx);
    doc["seed"] = opts.seed;
    doc["charge"] = std::vector<double>(charge.values().begin(), charge.values().end());
    doc["result"] = to_json(result);
    std::ostringstream csv;
    write_profile_csv(csv, grid, result.fields);
    write_json(ctx, "result.json", doc);
    write_file_atomic(output_path(ctx, "profile.csv"), csv.str());
    return kExitSuccess;
}

int cmd_scan(const Context& ctx)
{
    const RunConfig& config = ctx.config;
    const RadialGrid grid = config.grid();
    const PotentialSpec spec = config.potential();
    const SolveOptions opts = options_for(ctx, grid, spec);

    std::vector<ChargeVector> charges;
    try {
        for (const auto& c : config.charge.scan_charges) {
            charges.emplace_back(c);
        }
        if (charges.empty()) {
            const ChargeVector base = config.base_charge(grid);
            std::vector<double> factors = config.charge.scan_factors;
            if (factors.empty()) {
                factors = {0.5, 0.75, 1.0, 1.5, 2.0};
            }
            for (double f : factors) {
                std::vector<double> c(base.values().begin(), base.values().end());
                for (double& x : c) {
                    x *= f;
                }
                charges.emplace_back(std::move(c));
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }

    const auto entries = scan_charge(grid, spec, charges, opts);
    const std::size_t k = spec.components();
    json rows = json::array();
    std::ostringstream csv;
    csv << "index";
    for (std::size_t i = 0; i < k; ++i) {
        csv << ",C_" << i + 1;
    }
    csv << ",converged,termination,E";
    for (std::size_t i = 0; i < k; ++i) {
        csv << ",omega_" << i + 1;
    }
    for (std::size_t i = 0; i < k; ++i) {
        csv << ",margin_" << i + 1;
    }
    csv << '\n';
    auto put = [&](double x) {
        char buffer[40];
        std::snprintf(buffer, sizeof buffer, "%.17g", x);
        csv << ',' << buffer;
    };
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const ScanEntry& entry = entries[e];
        const std::vector<double> c(entry.charge.values().begin(), entry.charge.values().end());
        json row = {{"charge", c}};
        csv << e;
        for (double x : c) {
            put(x);
        }
        if (entry.result) {
            const SolveResult& r = *entry.result;
            row["result"] = to_json(r);
            csv << ',' << (r.converged ? "true" : "false") << ',' << to_string(r.reason);
            put(r.energy);
            for (double w : r.omega.values) {
                put(w);
            }
            for (double m : r.verification.hylomorphy_margins) {
                put(m);
            }
            if (!ctx.quiet) {
                *ctx.out << "C = " << fmt(c) << "  " << to_string(r.reason) << "  E = " << fmt(r.energy)
                         << "  omega = " << fmt(r.omega.values)
                         << "  hylomorphy " << (r.verification.hylomorphy_pass ? "pass" : "FAIL") << '\n';
            }
        } else {
            row["error"] = entry.error;
            csv << ",false,error";
            for (std::size_t i = 0; i < 1 + 2 * k; ++i) {
                csv << ',';
            }
            if (!ctx.quiet) {
                *ctx.out << "C = " << fmt(c) << "  error: " << entry.error << '\n';
            }
        }
        csv << '\n';
        rows.push_back(std::move(row));
    }
    json doc = envelope("radsol.scan/1", ctx);
    doc["seed"] = opts.seed;
    doc["entries"] = rows;
    write_json(ctx, "scan.json", doc);
    write_file_atomic(output_path(ctx, "scan.csv"), csv.str());
    return kExitSuccess;
}

int cmd_hylomorphy(const Context& ctx)
{
    const RunConfig& config = ctx.config;
    const RadialGrid grid = config.grid();
    const PotentialSpec spec = config.potential();

    std::vector<double> v = config.hylomorphy.v;
    std::vector<double> omega = config.hylomorphy.omega;
    if (v.empty() || omega.empty()) {
        const auto witness = witness_for(config, spec);
        if (!witness) {
            if (!ctx.quiet) {
                *ctx.out << "no H3 witness found: no admissible r found\n";
            }
            json doc = envelope("radsol.hylomorphy/1", ctx);
            doc["scan"] = nullptr;
            doc["threshold_radius"] = nullptr;
            doc["message"] = "no admissible r found (no H3 witness)";
            write_json(ctx, "hylomorphy.json", doc);
            return kExitSuccess;
        }
        if (v.empty()) {
            v = witness->v;
        }
        if (omega.empty()) {
            omega = witness->omega;
        }
    }
    std::vector<double> radii = config.hylomorphy.radii;
    if (radii.empty()) {
        radii = default_radii(grid);
    }
    HylomorphyScan scan;
    try {
        scan = hylomorphy_scan(grid, spec, v, Frequencies{omega}, radii);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }

    const auto threshold = scan.threshold_radius();
    if (!ctx.quiet) {
        for (const auto& row : scan.rows) {
            if (!row.error.empty()) {
                *ctx.out << "r = " << fmt(row.r) << "  error: " << row.error << '\n';
                continue;
            }
            *ctx.out << "r = " << std::setw(10) << fmt(row.r) << "  E/(alpha r^N) = " << std::setw(12)
                     << fmt(row.normalized_energy) << "  margins " << fmt(row.margins) << '\n';
        }
        if (threshold) {
            *ctx.out << "threshold radius: " << fmt(*threshold) << '\n';
        } else {
            *ctx.out << "no admissible r found\n";
        }
    }
    json doc = envelope("radsol.hylomorphy/1", ctx);
    doc["scan"] = to_json(scan);
    doc["threshold_radius"] = threshold ? json(*threshold) : json(nullptr);
    if (!threshold) {
        doc["message"] = "no admissible r found";
    }
    std::ostringstream csv;
    write_scan_csv(csv, scan);
    write_json(ctx, "hylomorphy.json", doc);
    write_file_atomic(output_path(ctx, "hylomorphy.csv"), csv.str());
    return kExitSuccess;
}

int cmd_rearrange(const Context& ctx)
{
    const RunConfig& config = ctx.config;
    if (config.profile.empty()) {
        throw ConfigError(0, "rearrange needs 'profile = PATH' (a CSV with header r,u_1,...,u_k)");
    }
    const RadialGrid grid = config.grid();
    const PotentialSpec spec = config.potential();
    FieldSet fields;
    try {
        fields = read_profile_csv_file(config.profile, grid, spec.components());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    RearrangeReport report;
    try {
        report = rearrangement_report(grid, spec, fields);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    if (!ctx.quiet) {
        auto& out = *ctx.out;
        out << "L2 before/after        " << fmt(report.l2_before) << " / " << fmt(report.l2_after) << '\n'
            << "Dirichlet before/after " << fmt(report.dirichlet_before) << " / " << fmt(report.dirichlet_after)
            << '\n';
        for (const auto& t : report.coupling) {
            out << "coupling term " << t.term + 1 << "        " << fmt(t.before) << " -> " << fmt(t.after)
                << (t.after > t.before ? "  (increased)" : "") << '\n';
        }
        out << "flags: L2 " << (report.l2_preserved ? "pass" : "FAIL") << ", Dirichlet "
            << (report.dirichlet_nonincreasing ? "pass" : "FAIL") << ", coupling "
            << (report.coupling_nondecreasing ? "pass" : "FAIL") << ", radial terms "
            << (report.radial_preserved ? "pass" : "FAIL") << '\n';
    }
    json doc = envelope("radsol.rearrange/1", ctx);
    doc["report"] = to_json(report);
    std::ostringstream csv;
    write_profile_csv(csv, grid, report.rearranged);
    write_json(ctx, "rearrange.json", doc);
    write_file_atomic(output_path(ctx, "rearranged.csv"), csv.str());
    return kExitSuccess;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"radsol: radial standing waves of coupled elliptic systems by charge-constrained minimization"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    app.add_option("--config", config_path, "problem configuration file")->required();
    app.add_option("--out", out_dir, "existing output directory")->capture_default_str();
    app.add_option("--seed", seed, "overrides the configured seed");
    app.add_flag("--quiet", quiet, "no console tables");
    app.fallthrough();

    auto* check = app.add_subcommand("check", "check hypotheses H1-H3 and search an H3 witness");
    auto* solve = app.add_subcommand("solve", "minimize the energy at fixed charge");
    auto* scan = app.add_subcommand("scan", "solve along a ladder of charges with warm starts");
    auto* hylomorphy = app.add_subcommand("hylomorphy", "tabulate the test-profile energy against the charge");
    auto* rearrange = app.add_subcommand("rearrange", "symmetric-decreasing rearrangement of a profile CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitConfig;
    }

    Context ctx;
    ctx.config_path = config_path;
    ctx.out_dir = out_dir;
    ctx.quiet = quiet;
    ctx.out = &out;
    try {
        ctx.config = load_config(config_path);
        if (seed) {
            ctx.config.solver.seed = *seed;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    if (!std::filesystem::is_directory(ctx.out_dir)) {
        err << "error: output directory '" << out_dir << "' does not exist\n";
        return kExitIo;
    }

    try {
        if (*check) {
            return cmd_check(ctx);
        }
        if (*solve) {
            return cmd_solve(ctx);
        }
        if (*scan) {
            return cmd_scan(ctx);
        }
        if (*hylomorphy) {
            return cmd_hylomorphy(ctx);
        }
        if (*rearrange) {
            return cmd_rearrange(ctx);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitConfig;
}

} // namespace radsol
