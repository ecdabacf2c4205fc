#include "radsol/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace radsol {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message),
      line_(line)
{
}

namespace {

struct Entry {
    std::string key;
    std::vector<std::string> tokens;
    std::size_t line = 0;
};

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const Entry& e, const std::string& token)
{
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (!token.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(e.line, "'" + e.key + "': cannot parse number '" + token + "'");
    }
    return value;
}

std::vector<double> numbers(const Entry& e)
{
    std::vector<double> out;
    for (const auto& t : e.tokens) {
        out.push_back(to_double(e, t));
    }
    return out;
}

double single_number(const Entry& e)
{
    if (e.tokens.size() != 1) {
        throw ConfigError(e.line, "'" + e.key + "' expects one value");
    }
    return to_double(e, e.tokens.front());
}

std::uint64_t unsigned_number(const Entry& e)
{
    if (e.tokens.size() != 1) {
        throw ConfigError(e.line, "'" + e.key + "' expects one value");
    }
    std::uint64_t value = 0;
    const auto& t = e.tokens.front();
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(e.line, "'" + e.key + "': expected a nonnegative integer, got '" + t + "'");
    }
    return value;
}

std::string single_word(const Entry& e)
{
    if (e.tokens.size() != 1) {
        throw ConfigError(e.line, "'" + e.key + "' expects one value");
    }
    return e.tokens.front();
}

bool boolean(const Entry& e)
{
    const std::string word = single_word(e);
    if (word == "true" || word == "1" || word == "yes") {
        return true;
    }
    if (word == "false" || word == "0" || word == "no") {
        return false;
    }
    throw ConfigError(e.line, "'" + e.key + "': expected true or false");
}

std::vector<double> vector_of(const Entry& e, std::size_t k)
{
    auto values = numbers(e);
    if (values.size() != k) {
        throw ConfigError(e.line, "'" + e.key + "' expects " + std::to_string(k) + " values, got " +
                                      std::to_string(values.size()));
    }
    return values;
}

const std::set<std::string> kRepeatable = {"term", "witness", "scan_charge"};

void put_number(std::ostringstream& out, double x)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    out << buffer;
}

void put_line(std::ostringstream& out, const std::string& key, const std::vector<double>& values)
{
    if (values.empty()) {
        return;
    }
    out << key << " =";
    for (double x : values) {
        out << ' ';
        put_number(out, x);
    }
    out << '\n';
}

void put_line(std::ostringstream& out, const std::string& key, double value)
{
    out << key << " = ";
    put_number(out, value);
    out << '\n';
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_number = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line_number;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line_number, "expected 'key = value'");
        }
        Entry e;
        e.key = trim(line.substr(0, eq));
        e.line = line_number;
        if (e.key.empty()) {
            throw ConfigError(line_number, "missing key");
        }
        std::istringstream values(line.substr(eq + 1));
        std::string token;
        while (values >> token) {
            e.tokens.push_back(token);
        }
        if (e.tokens.empty()) {
            throw ConfigError(line_number, "'" + e.key + "' has no value");
        }
        if (!kRepeatable.count(e.key) && !seen.insert(e.key).second) {
            throw ConfigError(line_number, "duplicate key '" + e.key + "'");
        }
        entries.push_back(std::move(e));
    }

    RunConfig config;
    // the component count fixes the arity of every vector-valued key
    for (const Entry& e : entries) {
        if (e.key == "components") {
            const auto k = unsigned_number(e);
            if (k == 0 || k > 64) {
                throw ConfigError(e.line, "components must be between 1 and 64");
            }
            config.problem.components = k;
        }
    }
    const std::size_t k = config.problem.components;

    for (const Entry& e : entries) {
        const std::string& key = e.key;
        if (key == "components") {
            continue;
        } else if (key == "dimension") {
            const auto n = unsigned_number(e);
            if (n < 3 || n > 64) {
                throw ConfigError(e.line, "dimension must be between 3 and 64");
            }
            config.problem.dimension = static_cast<int>(n);
        } else if (key == "r_max") {
            config.problem.r_max = single_number(e);
        } else if (key == "nodes") {
            config.problem.nodes = unsigned_number(e);
        } else if (key == "masses") {
            config.problem.masses = vector_of(e, k);
        } else if (key == "term") {
            const auto values = numbers(e);
            if (values.size() != k + 1) {
                throw ConfigError(e.line, "'term' expects a coefficient and " + std::to_string(k) + " exponents");
            }
            config.problem.terms.push_back({values.front(), std::vector<double>(values.begin() + 1, values.end())});
        } else if (key == "charge") {
            config.charge.charge = vector_of(e, k);
        } else if (key == "recipe_v") {
            config.charge.recipe_v = vector_of(e, k);
        } else if (key == "recipe_omega") {
            config.charge.recipe_omega = vector_of(e, k);
        } else if (key == "recipe_radius") {
            config.charge.recipe_radius = single_number(e);
        } else if (key == "scan_charge") {
            config.charge.scan_charges.push_back(vector_of(e, k));
        } else if (key == "scan_factors") {
            config.charge.scan_factors = numbers(e);
        } else if (key == "max_iterations") {
            config.solver.max_iterations = unsigned_number(e);
        } else if (key == "gradient_tolerance") {
            config.solver.gradient_tolerance = single_number(e);
        } else if (key == "energy_stall_tolerance") {
            config.solver.energy_stall_tolerance = single_number(e);
        } else if (key == "stall_window") {
            config.solver.stall_window = unsigned_number(e);
        } else if (key == "initial_step") {
            config.solver.initial_step = single_number(e);
        } else if (key == "shrink") {
            config.solver.shrink = single_number(e);
        } else if (key == "sufficient_decrease") {
            config.solver.sufficient_decrease = single_number(e);
        } else if (key == "init") {
            const std::string mode = single_word(e);
            if (mode != "test_profile" && mode != "gaussian" && mode != "file") {
                throw ConfigError(e.line, "init must be test_profile, gaussian or file");
            }
            config.solver.init = mode;
        } else if (key == "init_v") {
            config.solver.init_v = vector_of(e, k);
        } else if (key == "init_radius") {
            config.solver.init_radius = single_number(e);
        } else if (key == "init_amplitudes") {
            config.solver.init_amplitudes = vector_of(e, k);
        } else if (key == "init_widths") {
            config.solver.init_widths = vector_of(e, k);
        } else if (key == "init_file") {
            config.solver.init_file = single_word(e);
        } else if (key == "seed") {
            config.solver.seed = unsigned_number(e);
        } else if (key == "absolute_value_step") {
            config.solver.absolute_value_step = boolean(e);
        } else if (key == "el_tolerance") {
            config.solver.el_tolerance = single_number(e);
        } else if (key == "constraint_tolerance") {
            config.solver.constraint_tolerance = single_number(e);
        } else if (key == "h1_box") {
            config.check.h1_box = single_number(e);
        } else if (key == "h1_samples") {
            config.check.h1_samples = unsigned_number(e);
        } else if (key == "witness") {
            config.check.witness_candidates.push_back(vector_of(e, k));
        } else if (key == "hylomorphy_v") {
            config.hylomorphy.v = vector_of(e, k);
        } else if (key == "hylomorphy_omega") {
            config.hylomorphy.omega = vector_of(e, k);
        } else if (key == "hylomorphy_radii") {
            config.hylomorphy.radii = numbers(e);
        } else if (key == "profile") {
            config.profile = single_word(e);
        } else {
            throw ConfigError(e.line, "unknown key '" + key + "'");
        }
    }

    if (config.problem.masses.empty()) {
        throw ConfigError(0, "'masses' is required");
    }
    const bool any_recipe = !config.charge.recipe_v.empty() || !config.charge.recipe_omega.empty();
    const bool full_recipe = !config.charge.recipe_v.empty() && !config.charge.recipe_omega.empty() &&
                             config.charge.recipe_radius > 0.0;
    if (any_recipe && !full_recipe) {
        throw ConfigError(0, "charge recipe needs recipe_v, recipe_omega and a positive recipe_radius");
    }
    if (full_recipe && config.charge.recipe_radius + 1.0 >= config.problem.r_max) {
        throw ConfigError(0, "recipe_radius + 1 must be below r_max");
    }
    try {
        (void)config.potential();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return config;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string to_config_text(const RunConfig& c)
{
    std::ostringstream out;
    out << "# problem\n";
    out << "dimension = " << c.problem.dimension << '\n';
    out << "components = " << c.problem.components << '\n';
    put_line(out, "r_max", c.problem.r_max);
    out << "nodes = " << c.problem.nodes << '\n';
    put_line(out, "masses", c.problem.masses);
    for (const auto& term : c.problem.terms) {
        std::vector<double> values{term.coefficient};
        values.insert(values.end(), term.exponents.begin(), term.exponents.end());
        put_line(out, "term", values);
    }

    out << "# charge\n";
    put_line(out, "charge", c.charge.charge);
    put_line(out, "recipe_v", c.charge.recipe_v);
    put_line(out, "recipe_omega", c.charge.recipe_omega);
    if (c.charge.recipe_radius != 0.0) {
        put_line(out, "recipe_radius", c.charge.recipe_radius);
    }
    for (const auto& charge : c.charge.scan_charges) {
        put_line(out, "scan_charge", charge);
    }
    put_line(out, "scan_factors", c.charge.scan_factors);

    out << "# solver\n";
    const SolverConfig& s = c.solver;
    out << "max_iterations = " << s.max_iterations << '\n';
    put_line(out, "gradient_tolerance", s.gradient_tolerance);
    put_line(out, "energy_stall_tolerance", s.energy_stall_tolerance);
    out << "stall_window = " << s.stall_window << '\n';
    put_line(out, "initial_step", s.initial_step);
    put_line(out, "shrink", s.shrink);
    put_line(out, "sufficient_decrease", s.sufficient_decrease);
    out << "init = " << s.init << '\n';
    put_line(out, "init_v", s.init_v);
    put_line(out, "init_radius", s.init_radius);
    put_line(out, "init_amplitudes", s.init_amplitudes);
    put_line(out, "init_widths", s.init_widths);
    if (!s.init_file.empty()) {
        out << "init_file = " << s.init_file << '\n';
    }
    out << "seed = " << s.seed << '\n';
    out << "absolute_value_step = " << (s.absolute_value_step ? "true" : "false") << '\n';
    put_line(out, "el_tolerance", s.el_tolerance);
    put_line(out, "constraint_tolerance", s.constraint_tolerance);

    out << "# check\n";
    put_line(out, "h1_box", c.check.h1_box);
    out << "h1_samples = " << c.check.h1_samples << '\n';
    for (const auto& w : c.check.witness_candidates) {
        put_line(out, "witness", w);
    }

    out << "# hylomorphy\n";
    put_line(out, "hylomorphy_v", c.hylomorphy.v);
    put_line(out, "hylomorphy_omega", c.hylomorphy.omega);
    put_line(out, "hylomorphy_radii", c.hylomorphy.radii);
    if (!c.profile.empty()) {
        out << "profile = " << c.profile << '\n';
    }
    return out.str();
}

RadialGrid RunConfig::grid() const
{
    try {
        return RadialGrid(problem.dimension, problem.r_max, problem.nodes);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
}

PotentialSpec RunConfig::potential() const
{
    return PotentialSpec(problem.masses, problem.terms);
}

ChargeVector RunConfig::base_charge(const RadialGrid& grid) const
{
    try {
        if (!charge.charge.empty()) {
            return ChargeVector(charge.charge);
        }
        if (!charge.recipe_v.empty()) {
            return ChargeVector(
                charge_from_profile(grid, charge.recipe_v, Frequencies{charge.recipe_omega}, charge.recipe_radius));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, std::string("charge: ") + e.what());
    }
    throw ConfigError(0, "no charge given: set 'charge' or the recipe_v / recipe_omega / recipe_radius triple");
}

SolveOptions RunConfig::solve_options() const
{
    SolveOptions o;
    o.max_iterations = solver.max_iterations;
    o.gradient_tolerance = solver.gradient_tolerance;
    o.energy_stall_tolerance = solver.energy_stall_tolerance;
    o.stall_window = solver.stall_window;
    o.initial_step = solver.initial_step;
    o.shrink = solver.shrink;
    o.sufficient_decrease = solver.sufficient_decrease;
    if (solver.init == "gaussian") {
        o.init = InitMode::Gaussian;
    } else if (solver.init == "file") {
        o.init = InitMode::FromFields;
    } else {
        o.init = InitMode::TestProfile;
    }
    o.init_v = solver.init_v;
    o.init_radius = solver.init_radius;
    o.gaussian_amplitudes = solver.init_amplitudes;
    o.gaussian_widths = solver.init_widths;
    o.seed = solver.seed;
    o.absolute_value_step = solver.absolute_value_step;
    o.el_tolerance = solver.el_tolerance;
    o.constraint_tolerance = solver.constraint_tolerance;
    o.h1_box = check.h1_box;
    try {
        o.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return o;
}

} // namespace radsol
