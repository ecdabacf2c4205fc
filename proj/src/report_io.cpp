#include "radsol/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace radsol {

using nlohmann::json;

namespace {

json flags(const std::vector<bool>& values)
{
    json out = json::array();
    for (bool b : values) {
        out.push_back(b);
    }
    return out;
}

void put(std::ostream& out, double x)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    out << buffer;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

} // namespace

json to_json(const ConditionReport& report)
{
    return {{"name", report.name},
            {"pass", report.pass},
            {"margin", report.margin},
            {"witness", report.witness},
            {"notes", report.notes}};
}

json to_json(const GrowthData& growth)
{
    if (growth.vacuous) {
        return {{"vacuous", true}};
    }
    return {{"vacuous", false},
            {"p", growth.p},
            {"q", growth.q},
            {"c_p_minus_1", growth.c_p_minus_1},
            {"c_q_minus_1", growth.c_q_minus_1}};
}

json to_json(const VerificationReport& r)
{
    return {{"constraint_residuals", r.constraint_residuals},
            {"constraint_pass", r.constraint_pass},
            {"constraint_tolerance", r.constraint_tolerance},
            {"el_residuals", r.el_residuals},
            {"el_pass", r.el_pass},
            {"el_tolerance", r.el_tolerance},
            {"omega_below_mass", flags(r.omega_below_mass)},
            {"omega_pass", r.omega_pass},
            {"tail_fractions", r.tail_fractions},
            {"localized", r.localized},
            {"tail_tolerance", r.tail_tolerance},
            {"energy", r.energy},
            {"hylomorphy_margins", r.hylomorphy_margins},
            {"hylomorphy_pass", r.hylomorphy_pass},
            {"coercivity_omega", flags(r.coercivity_omega)},
            {"coercivity_gradient", r.coercivity_gradient},
            {"coercivity_pass", r.coercivity_pass},
            {"coercivity_applicable", r.coercivity_applicable},
            {"multipliers", r.multipliers},
            {"multiplier_residuals", r.multiplier_residuals},
            {"norm", r.norm_note},
            {"all_pass", r.all_pass()}};
}

json to_json(const SolveResult& r)
{
    return {{"converged", r.converged},
            {"termination", std::string(to_string(r.reason))},
            {"detail", r.detail},
            {"iterations", r.iterations},
            {"energy", r.energy},
            {"omega", r.omega.values},
            {"charges", r.charges},
            {"el_residuals", r.el_residuals},
            {"gradient_norm", r.gradient_norm},
            {"h1_passed", r.h1_passed},
            {"coercivity_violations", r.coercivity_violations},
            {"init_v", r.init_v},
            {"verification", to_json(r.verification)}};
}

json to_json(const HylomorphyScan& scan)
{
    json rows = json::array();
    for (const auto& row : scan.rows) {
        if (!row.error.empty()) {
            rows.push_back({{"r", row.r}, {"error", row.error}});
            continue;
        }
        rows.push_back({{"r", row.r},
                        {"charges", row.charges},
                        {"energy", row.energy},
                        {"normalized_energy", row.normalized_energy},
                        {"margins", row.margins},
                        {"admissible", row.admissible()}});
    }
    json out = {{"v", scan.v}, {"omega", scan.omega}, {"rows", rows}};
    const auto threshold = scan.threshold_radius();
    out["threshold_radius"] = threshold ? json(*threshold) : json(nullptr);
    return out;
}

json to_json(const RearrangeReport& r)
{
    auto integrals = [](const std::vector<TermIntegral>& list) {
        json out = json::array();
        for (const auto& t : list) {
            out.push_back({{"term", t.term + 1}, {"before", t.before}, {"after", t.after}});
        }
        return out;
    };
    return {{"l2_before", r.l2_before},
            {"l2_after", r.l2_after},
            {"dirichlet_before", r.dirichlet_before},
            {"dirichlet_after", r.dirichlet_after},
            {"coupling", integrals(r.coupling)},
            {"radial", integrals(r.radial)},
            {"l2_preserved", r.l2_preserved},
            {"dirichlet_nonincreasing", r.dirichlet_nonincreasing},
            {"coupling_nondecreasing", r.coupling_nondecreasing},
            {"radial_preserved", r.radial_preserved},
            {"aggregate_radial_guaranteed", r.aggregate_radial_guaranteed},
            {"tolerances",
             {{"l2_relative", r.tolerances.l2_relative},
              {"dirichlet_slack", r.tolerances.dirichlet_slack},
              {"coupling_slack", r.tolerances.coupling_slack},
              {"radial_relative", r.tolerances.radial_relative}}},
            {"notes", r.notes},
            {"all_pass", r.all_pass()}};
}

void write_profile_csv(std::ostream& out, const RadialGrid& grid, const FieldSet& fields)
{
    out << "r";
    for (std::size_t i = 0; i < fields.components(); ++i) {
        out << ",u_" << i + 1;
        grid.check(fields[i]);
    }
    out << '\n';
    const auto r = grid.nodes();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        put(out, r[j]);
        for (std::size_t i = 0; i < fields.components(); ++i) {
            out << ',';
            put(out, fields[i][j]);
        }
        out << '\n';
    }
}

FieldSet read_profile_csv(std::istream& in, const RadialGrid& grid, std::size_t components)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("profile CSV: empty input");
    }
    const auto header = split(line);
    if (header.size() != components + 1 || header.front() != "r") {
        throw std::invalid_argument("profile CSV: expected header r,u_1,...,u_" + std::to_string(components));
    }
    FieldSet fields(components, grid.size());
    const auto r = grid.nodes();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != components + 1) {
            throw std::invalid_argument("profile CSV: row " + std::to_string(row + 2) + " has " +
                                        std::to_string(cells.size()) + " columns");
        }
        if (row >= grid.size()) {
            throw std::invalid_argument("profile CSV: more rows than grid nodes (" + std::to_string(grid.size()) + ")");
        }
        std::vector<double> values(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            std::size_t used = 0;
            try {
                values[c] = std::stod(cells[c], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || !std::isfinite(values[c])) {
                throw std::invalid_argument("profile CSV: row " + std::to_string(row + 2) + ": bad number '" +
                                            cells[c] + "'");
            }
        }
        if (std::abs(values[0] - r[row]) > 1e-9 * grid.r_max()) {
            throw std::invalid_argument("profile CSV: row " + std::to_string(row + 2) + ": radius does not match grid");
        }
        for (std::size_t i = 0; i < components; ++i) {
            fields[i][row] = values[i + 1];
        }
        ++row;
    }
    if (row != grid.size()) {
        throw std::invalid_argument("profile CSV: " + std::to_string(row) + " rows, grid has " +
                                    std::to_string(grid.size()) + " nodes");
    }
    return fields;
}

FieldSet read_profile_csv_file(const std::string& path, const RadialGrid& grid, std::size_t components)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open profile '" + path + "'");
    }
    return read_profile_csv(in, grid, components);
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string temporary = path + ".tmp";
    {
        std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + path + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw IoError("write failed for '" + path + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(temporary, path, ec);
    if (ec) {
        std::filesystem::remove(temporary, ec);
        throw IoError("cannot move output into place: '" + path + "'");
    }
}

} // namespace radsol
