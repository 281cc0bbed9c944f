#ifndef IOSS_CONFIG_IO_HPP
#define IOSS_CONFIG_IO_HPP

#include <filesystem>

#include <json.hpp>

#include "ioss/system.hpp"

namespace ioss {

// Loads and validates a system description. Key layout:
//   dims {d, m, p_out}
//   subsystems [{id, stable, lambda, delta, Delta, f[], h[], V}]
//   edges [{from, to, mu}]
//   defaults {tolerance, rk_step, seed}   (optional, all fields optional)
// Expressions use states x1..xd and inputs v1..vm. Parse and validation
// problems are reported with the JSON path of the offending field.
SystemSpec load_spec(const std::filesystem::path& path);
SystemSpec parse_spec_json(const nlohmann::json& doc);

nlohmann::json spec_to_json(const SystemSpec& spec);
void save_spec(const std::filesystem::path& path, const SystemSpec& spec);

}  // namespace ioss

#endif
