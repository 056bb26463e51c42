#pragma once

// The two-cluster, seven-job worked example and its expected review
// matrices: before assignment, after assignment, after one rebalance cycle.

#include <hetlb/model.hpp>
#include <hetlb/report.hpp>
#include <hetlb/scenario.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace hetlb::golden {

/// Text of scenarios/paper_tables.scn, compiled in.
std::string_view scenario_text();
Scenario scenario();

struct Table {
    std::string name;
    std::vector<std::vector<ReviewRow>> clusters;
};

Table before_assignment();
Table after_assignment();
/// WS2.2 carries its ability-matrix capacity of 1500 here; its memory_left
/// of 300 only balances against 1500.
Table after_rebalance();

/// Cell-by-cell differences between a fixture and a state; empty on match.
std::vector<std::string> compare(const Table& expected, const SystemState& state);

struct Check {
    std::string table;
    std::vector<std::string> mismatches;
};

/// Runs the example and checks all three fixtures.
std::vector<Check> run_all();

} // namespace hetlb::golden
