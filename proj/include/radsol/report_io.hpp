#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "radsol/conditions.hpp"
#include "radsol/rearrange.hpp"
#include "radsol/solver.hpp"

namespace radsol {

/// File-system failure while reading inputs or writing outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const GrowthData& growth);
nlohmann::json to_json(const VerificationReport& report);
/// Everything but the fields and the energy history.
nlohmann::json to_json(const SolveResult& result);
nlohmann::json to_json(const HylomorphyScan& scan);
/// Everything but the rearranged fields.
nlohmann::json to_json(const RearrangeReport& report);

/// CSV with header r,u_1,...,u_k and one row per grid node, 17 significant digits.
void write_profile_csv(std::ostream& out, const RadialGrid& grid, const FieldSet& fields);

/// Reads a CSV written by write_profile_csv. The radii must match the grid nodes.
FieldSet read_profile_csv(std::istream& in, const RadialGrid& grid, std::size_t components);
FieldSet read_profile_csv_file(const std::string& path, const RadialGrid& grid, std::size_t components);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace radsol
