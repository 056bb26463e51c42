#pragma once

// Deterministic tick loop. Per tick, in this order:
//   0. ServerFail / ServerRecover events of the tick
//   1. heartbeats from every running server when tick % T == 0
//   2. dead detection and migration of dead servers' jobs
//   3. JobArrival / JobComplete events, in listed order
//   4. a rebalance cycle when tick > 0 and tick % T == 0
// Baseline strategies run the same loop but place jobs without looking at
// the matrices and never rebalance.

#include <hetlb/instrumentation.hpp>
#include <hetlb/model.hpp>
#include <hetlb/scenario.hpp>
#include <hetlb/trace.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetlb {

enum class Strategy { TwoTier, RoundRobin, Random };

std::string_view to_string(Strategy strategy) noexcept;
std::optional<Strategy> parse_strategy(std::string_view text) noexcept;

struct RunOptions {
    Strategy strategy = Strategy::TwoTier;
    std::optional<std::uint64_t> seed; // overrides the scenario seed
    std::size_t rotation_offset = 0;   // round-robin starting server
    bool audit = false;
    Probe* probe = nullptr;
};

struct StatusCounts {
    Tick tick = 0;
    std::size_t even = 0;
    std::size_t uneven = 0;
    std::size_t dead = 0;
    std::size_t pending = 0;

    friend bool operator==(const StatusCounts&, const StatusCounts&) = default;
};

struct MetricsReport {
    Strategy strategy = Strategy::TwoTier;
    std::uint64_t seed = 0;
    Tick horizon = 0;

    ComparisonCounters comparisons;
    std::uint64_t sort_invocations = 0;
    std::uint64_t sort_expected = 0;

    std::size_t arrivals = 0;
    std::size_t completions = 0;
    std::size_t over_commits = 0;
    std::size_t rebalance_cycles = 0;
    std::size_t moves = 0;
    std::size_t unresolved = 0; // summed over cycles
    std::size_t dead_detected = 0;
    std::size_t migrations = 0;
    std::size_t orphaned = 0;

    std::size_t final_pending = 0;
    std::size_t final_uneven = 0;
    std::size_t final_dead = 0;

    std::vector<StatusCounts> histogram; // one row per simulated tick
    std::vector<std::string> audit_violations;
};

struct RunResult {
    SystemState state;
    MetricsReport metrics;
    Trace trace;
};

/// Throws ScenarioError if the scenario fails validation; nothing runs.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

RunResult run_baseline(const Scenario& scenario, Strategy strategy, RunOptions options = {});

/// The initial state a scenario starts from.
SystemState initial_state(const Scenario& scenario);

} // namespace hetlb
