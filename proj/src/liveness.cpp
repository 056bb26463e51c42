#include <hetlb/liveness.hpp>

#include <algorithm>
#include <string>

namespace hetlb {

bool is_stale(const SystemConfig& config, const LivenessRecord& record, Tick now) noexcept {
    return now - record.last_heartbeat >= config.dead_after();
}

const LivenessRecord& record_heartbeat(SystemState& state, const ServerId& server, Tick tick, Trace& trace) {
    auto ref = state.find_server(server);
    if (!ref)
        throw UnknownServerError("heartbeat from unknown server " + server.str());
    auto& record = state.liveness(*ref);
    if (!record.alive)
        trace.emit(tick, TraceKind::ServerRevived, {{"server", server.str()}});
    record.last_heartbeat = tick;
    record.alive = true;
    state.stamp_refresh(*ref, tick);
    return record;
}

std::vector<ServerId> detect_dead(SystemState& state, Tick tick, Trace& trace) {
    std::vector<ServerId> dead;
    for (auto ref : state.all_servers()) {
        auto& record = state.liveness(ref);
        if (record.alive && is_stale(state.config(), record, tick)) {
            record.alive = false;
            dead.push_back(record.server);
        }
    }
    std::sort(dead.begin(), dead.end());
    for (const auto& id : dead) {
        const auto& record = state.liveness(*state.find_server(id));
        trace.emit(tick, TraceKind::ServerDead,
                   {{"last_heartbeat", std::to_string(record.last_heartbeat)}, {"server", id.str()}});
    }
    return dead;
}

RebalanceReport migrate_dead_jobs(SystemState& state, const ServerId& server, Tick tick, Trace& trace, Meter& meter) {
    RebalanceReport report;
    report.tick = tick;
    auto ref = state.find_server(server);
    if (!ref)
        throw UnknownServerError("migration from unknown server " + server.str());
    if (!state.is_dead(*ref))
        throw ModelError("server " + server.str() + " is alive; nothing to migrate");
    if (state.entry(*ref).jobs.empty())
        return report;

    const auto before = meter.counters().total();
    auto orphans = state.entry(*ref).jobs;
    for (const auto& job : orphans)
        state.unplace(*ref, job.id);

    auto order = sort_all_by_load(state, meter);
    for (const auto& job : orphans) {
        auto outcome = balance_job(state, order, job, ref->cluster, 0, *ref, tick, trace);
        meter.balanced({job.id, BalancePath::Migration, ref->cluster, 0, outcome.target.has_value(), outcome.within,
                        outcome.cross, 0});
        if (outcome.target) {
            const auto& to = state.entry(*outcome.target).server;
            trace.emit(tick, TraceKind::JobMigrated, {{"from", server.str()}, {"job", job.id.str()}, {"to", to.str()}});
            report.moves.push_back({job.id, server, to,
                                    outcome.target->cluster == ref->cluster ? MoveScope::Within : MoveScope::Cross});
        } else {
            trace.emit(tick, TraceKind::JobOrphanedPending, {{"from", server.str()}, {"job", job.id.str()}});
            state.push_pending({job, PendingReason::Orphaned, tick});
            report.unresolved.push_back({job.id, UnresolvedReason::Pending, std::nullopt});
        }
    }
    state.refresh_load(tick);
    report.comparisons = meter.counters().total() - before;
    return report;
}

} // namespace hetlb
