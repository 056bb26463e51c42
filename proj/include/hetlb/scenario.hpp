#pragma once

#include <hetlb/model.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hetlb {

struct JobArrival {
    JobSpec job;
    friend bool operator==(const JobArrival&, const JobArrival&) = default;
};

struct ServerFail {
    ServerId server;
    friend bool operator==(const ServerFail&, const ServerFail&) = default;
};

struct ServerRecover {
    ServerId server;
    friend bool operator==(const ServerRecover&, const ServerRecover&) = default;
};

/// Extension event: the model itself never releases a job's memory.
struct JobComplete {
    JobId job;
    friend bool operator==(const JobComplete&, const JobComplete&) = default;
};

using SimAction = std::variant<JobArrival, ServerFail, ServerRecover, JobComplete>;

struct SimEvent {
    Tick tick = 0;
    SimAction action;

    friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct Scenario {
    SystemConfig config;
    std::vector<SimEvent> events; // by tick; same-tick events run in listed order
    std::uint64_t seed = 0;
    std::optional<Tick> horizon; // last tick simulated

    /// Explicit horizon, or last event tick + T so at least one rebalance
    /// follows the final event.
    Tick effective_horizon() const noexcept;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class ErrorCode {
    Syntax,
    NoClusters,
    DuplicateId,
    RangeViolation,
    UnsortedEvents,
    UnknownReference,
    InvalidValue,
    ClusterOrder,
    DuplicateArrival,
    NoArrival,
    EventOrder,
};

std::string_view to_string(ErrorCode code) noexcept;

struct Diagnostic {
    int line = 0; // 1-based; 0 when the scenario was not parsed from text
    ErrorCode code = ErrorCode::Syntax;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// `<line>: <CODE>: <message>`, or `<CODE>: <message>` without a line.
std::string format_diagnostic(const Diagnostic& d);

/// Source line of each declaration, so validation can point back into a
/// scenario file.
struct SourceLines {
    int config = 0;
    std::map<std::string, int> clusters;
    std::map<std::string, int> servers;
    std::vector<int> events; // parallel to Scenario::events

    int cluster(const ClusterId& id) const;
    int server(const ServerId& id) const;
    int event(std::size_t index) const;
};

std::vector<Diagnostic> validate_scenario(const Scenario& scenario, const SourceLines* lines = nullptr);

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

} // namespace hetlb
