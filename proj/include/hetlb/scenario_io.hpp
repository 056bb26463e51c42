#pragma once

// Line-oriented `.scn` scenario files. Grammar: docs/scenario_format.md.

#include <hetlb/scenario.hpp>

#include <string>
#include <string_view>

namespace hetlb {

/// Parses and validates a scenario. Throws ScenarioError carrying every
/// diagnostic found, each with its 1-based line number.
Scenario parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(render_scenario(s)) == s for any
/// valid scenario.
std::string render_scenario(const Scenario& scenario);

/// Reads a whole file. Throws std::runtime_error if it cannot be opened.
std::string read_file(const std::string& path);

} // namespace hetlb
