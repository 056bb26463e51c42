#include <hetlb/scenario.hpp>

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hetlb {

Tick Scenario::effective_horizon() const noexcept {
    if (horizon)
        return *horizon;
    Tick last = events.empty() ? 0 : events.back().tick;
    return last + config.heartbeat_period;
}

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Syntax:
        return "E_SYNTAX";
    case ErrorCode::NoClusters:
        return "E_NO_CLUSTERS";
    case ErrorCode::DuplicateId:
        return "E_DUPLICATE_ID";
    case ErrorCode::RangeViolation:
        return "E_RANGE";
    case ErrorCode::UnsortedEvents:
        return "E_UNSORTED_EVENTS";
    case ErrorCode::UnknownReference:
        return "E_UNKNOWN_REF";
    case ErrorCode::InvalidValue:
        return "E_VALUE";
    case ErrorCode::ClusterOrder:
        return "E_CLUSTER_ORDER";
    case ErrorCode::DuplicateArrival:
        return "E_DUPLICATE_ARRIVAL";
    case ErrorCode::NoArrival:
        return "E_NO_ARRIVAL";
    case ErrorCode::EventOrder:
        return "E_EVENT_ORDER";
    }
    return "E_UNKNOWN";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    if (d.line > 0)
        out += std::to_string(d.line) + ": ";
    out += to_string(d.code);
    out += ": ";
    out += d.message;
    return out;
}

int SourceLines::cluster(const ClusterId& id) const {
    auto it = clusters.find(id.str());
    return it == clusters.end() ? 0 : it->second;
}

int SourceLines::server(const ServerId& id) const {
    auto it = servers.find(id.str());
    return it == servers.end() ? 0 : it->second;
}

int SourceLines::event(std::size_t index) const {
    return index < events.size() ? events[index] : 0;
}

namespace {

std::string range_text(const ClusterSpec& c) {
    return "[" + std::to_string(c.memory_low) + "," + std::to_string(c.memory_high) + "]";
}

} // namespace

std::vector<Diagnostic> validate_scenario(const Scenario& scenario, const SourceLines* lines) {
    static const SourceLines no_lines;
    const SourceLines& src = lines ? *lines : no_lines;
    std::vector<Diagnostic> out;
    auto report = [&](int line, ErrorCode code, std::string message) {
        out.push_back({line, code, std::move(message)});
    };

    const auto& config = scenario.config;
    if (config.heartbeat_period < 1)
        report(src.config, ErrorCode::InvalidValue, "heartbeat_period must be at least 1 tick");
    if (scenario.horizon && *scenario.horizon < 0)
        report(src.config, ErrorCode::InvalidValue, "horizon must be non-negative");
    if (config.clusters.empty())
        report(0, ErrorCode::NoClusters, "no clusters defined");

    std::unordered_map<std::string, const ServerSpec*> servers;
    std::unordered_set<std::string> cluster_ids;
    const ClusterSpec* previous = nullptr;
    for (const auto& cluster : config.clusters) {
        int line = src.cluster(cluster.id);
        if (!is_valid_identifier(cluster.id.str()))
            report(line, ErrorCode::Syntax, "invalid cluster id '" + cluster.id.str() + "'");
        if (!cluster_ids.insert(cluster.id.str()).second)
            report(line, ErrorCode::DuplicateId, "duplicate cluster id " + cluster.id.str());
        if (cluster.memory_low < 0 || cluster.memory_low >= cluster.memory_high)
            report(line, ErrorCode::InvalidValue,
                   "cluster " + cluster.id.str() + " range " + range_text(cluster) + " needs 0 <= low < high");
        if (previous && (cluster.memory_high <= previous->memory_high || cluster.memory_low < previous->memory_high))
            report(line, ErrorCode::ClusterOrder,
                   "cluster " + cluster.id.str() + " range " + range_text(cluster) + " must follow " +
                       previous->id.str() + " " + range_text(*previous) + " without overlap");
        previous = &cluster;

        for (const auto& server : cluster.servers) {
            int sline = src.server(server.id);
            if (!is_valid_identifier(server.id.str()))
                report(sline, ErrorCode::Syntax, "invalid server id '" + server.id.str() + "'");
            if (!servers.emplace(server.id.str(), &server).second)
                report(sline, ErrorCode::DuplicateId, "duplicate server id " + server.id.str());
            if (server.cluster != cluster.id)
                report(sline, ErrorCode::UnknownReference,
                       "server " + server.id.str() + " names cluster " + server.cluster.str() + " but is listed in " +
                           cluster.id.str());
            if (server.memory_capacity <= 0 || server.speed <= 0)
                report(sline, ErrorCode::InvalidValue, "server " + server.id.str() + " needs positive memory and speed");
            else if (!cluster.admits(server.memory_capacity))
                report(sline, ErrorCode::RangeViolation,
                       "server " + server.id.str() + " memory " + std::to_string(server.memory_capacity) +
                           " outside cluster " + cluster.id.str() + " range " + range_text(cluster));
        }
    }

    std::unordered_set<std::string> arrived;
    std::unordered_set<std::string> completed;
    Tick last_tick = 0;
    for (std::size_t i = 0; i < scenario.events.size(); ++i) {
        const auto& event = scenario.events[i];
        int line = src.event(i);
        if (event.tick < 0)
            report(line, ErrorCode::InvalidValue, "event tick must be non-negative");
        if (i > 0 && event.tick < last_tick)
            report(line, ErrorCode::UnsortedEvents,
                   "event at tick " + std::to_string(event.tick) + " follows tick " + std::to_string(last_tick));
        last_tick = std::max(last_tick, event.tick);

        std::visit(
            [&](const auto& action) {
                using T = std::decay_t<decltype(action)>;
                if constexpr (std::is_same_v<T, JobArrival>) {
                    const auto& job = action.job;
                    if (!is_valid_identifier(job.id.str()))
                        report(line, ErrorCode::Syntax, "invalid job id '" + job.id.str() + "'");
                    if (job.memory_req <= 0 || job.speed_req <= 0)
                        report(line, ErrorCode::InvalidValue, "job " + job.id.str() + " needs positive memory and speed");
                    if (!arrived.insert(job.id.str()).second)
                        report(line, ErrorCode::DuplicateArrival, "job " + job.id.str() + " arrives more than once");
                } else if constexpr (std::is_same_v<T, JobComplete>) {
                    if (!arrived.contains(action.job.str()))
                        report(line, ErrorCode::EventOrder, "job " + action.job.str() + " completes before arriving");
                    else if (!completed.insert(action.job.str()).second)
                        report(line, ErrorCode::EventOrder, "job " + action.job.str() + " completes twice");
                } else {
                    if (!servers.contains(action.server.str()))
                        report(line, ErrorCode::UnknownReference, "unknown server " + action.server.str());
                }
            },
            event.action);
    }
    return out;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
    if (diagnostics.empty())
        return "invalid scenario";
    std::string text = format_diagnostic(diagnostics.front());
    if (diagnostics.size() > 1)
        text += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
    return text;
}

} // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

} // namespace hetlb
