#pragma once

// Heartbeat bookkeeping and dead-machine handling. A server is dead once
// (now - last_heartbeat) >= 2T. Its jobs are re-placed through the balancer
// path starting at position 0 of its own cluster; jobs with no target go to
// the pending queue.

#include <hetlb/balancer.hpp>
#include <hetlb/instrumentation.hpp>
#include <hetlb/model.hpp>
#include <hetlb/trace.hpp>

#include <stdexcept>
#include <vector>

namespace hetlb {

class UnknownServerError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Staleness test against the 2T threshold.
bool is_stale(const SystemConfig& config, const LivenessRecord& record, Tick now) noexcept;

/// Refreshes a server's liveness and stamps its review entry. A dead server
/// comes back alive and empty (its jobs were migrated when it died).
/// Throws UnknownServerError for an id absent from every ability matrix.
const LivenessRecord& record_heartbeat(SystemState& state, const ServerId& server, Tick tick, Trace& trace);

/// Marks and returns newly stale servers, in server_id order.
std::vector<ServerId> detect_dead(SystemState& state, Tick tick, Trace& trace);

/// Moves every job off a dead server. Throws ModelError if the server is
/// still alive.
RebalanceReport migrate_dead_jobs(SystemState& state, const ServerId& server, Tick tick, Trace& trace, Meter& meter);

} // namespace hetlb
