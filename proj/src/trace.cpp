#include <hetlb/trace.hpp>

#include <algorithm>

namespace hetlb {

std::string_view to_string(TraceKind kind) noexcept {
    switch (kind) {
    case TraceKind::JobRouted:
        return "job_routed";
    case TraceKind::ServerSelected:
        return "server_selected";
    case TraceKind::OverCommit:
        return "over_commit";
    case TraceKind::ClientHandoff:
        return "client_handoff";
    case TraceKind::JobPending:
        return "job_pending";
    case TraceKind::BalanceReject:
        return "balance_reject";
    case TraceKind::JobMoved:
        return "job_moved";
    case TraceKind::JobUnresolved:
        return "job_unresolved";
    case TraceKind::RebalanceDone:
        return "rebalance_done";
    case TraceKind::ServerFailed:
        return "server_failed";
    case TraceKind::ServerRecovered:
        return "server_recovered";
    case TraceKind::ServerDead:
        return "server_dead";
    case TraceKind::JobMigrated:
        return "job_migrated";
    case TraceKind::JobOrphanedPending:
        return "job_orphaned_pending";
    case TraceKind::ServerRevived:
        return "server_revived";
    case TraceKind::JobCompleted:
        return "job_completed";
    }
    return "unknown";
}

std::string_view TraceEvent::field(std::string_view key) const noexcept {
    for (const auto& [k, v] : fields)
        if (k == key)
            return v;
    return {};
}

std::string format_event(const TraceEvent& event) {
    std::string line = std::to_string(event.tick);
    line += ' ';
    line += to_string(event.kind);
    for (const auto& [key, value] : event.fields) {
        line += ' ';
        line += key;
        line += '=';
        line += value;
    }
    return line;
}

void Trace::emit(Tick tick, TraceKind kind, std::initializer_list<Field> fields) {
    TraceEvent event{tick, kind, {}};
    event.fields.reserve(fields.size());
    for (const auto& [key, value] : fields)
        event.fields.emplace_back(std::string(key), value);
    std::stable_sort(event.fields.begin(), event.fields.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    events_.push_back(std::move(event));
}

std::size_t Trace::count(TraceKind kind) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(events_.begin(), events_.end(), [&](const TraceEvent& e) { return e.kind == kind; }));
}

std::string Trace::serialize() const {
    std::string out;
    for (const auto& event : events_) {
        out += format_event(event);
        out += '\n';
    }
    return out;
}

} // namespace hetlb
