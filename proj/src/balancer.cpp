#include <hetlb/balancer.hpp>

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

namespace hetlb {

std::string_view to_string(MoveScope scope) noexcept {
    switch (scope) {
    case MoveScope::Within:
        return "within";
    case MoveScope::Cross:
        return "cross";
    case MoveScope::Retry:
        return "retry";
    }
    return "unknown";
}

std::vector<std::size_t> load_order(std::span<const ReviewEntry> entries, std::uint64_t& comparisons) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::tie(entries[i].memory_left, entries[i].server); };
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            ++comparisons;
            if (key(order[i]) > key(order[j]))
                std::swap(order[i], order[j]);
        }
    }
    return order;
}

std::vector<ReviewEntry> sort_by_load(std::span<const ReviewEntry> entries, std::uint64_t* comparisons) {
    std::uint64_t local = 0;
    auto order = load_order(entries, local);
    if (comparisons)
        *comparisons += local;
    std::vector<ReviewEntry> sorted;
    sorted.reserve(order.size());
    for (auto i : order)
        sorted.push_back(entries[i]);
    return sorted;
}

std::vector<JobSpec> pick_evictions(const ReviewEntry& entry) {
    std::vector<JobSpec> evicted;
    Memory left = entry.memory_left;
    for (auto it = entry.jobs.rbegin(); it != entry.jobs.rend() && left < 0; ++it) {
        evicted.push_back(*it);
        left += it->memory_req;
    }
    return evicted;
}

HostCheck check_host(const ReviewEntry& entry, const JobSpec& job) noexcept {
    return HostCheck{
        .memory_left = entry.memory_left >= job.memory_req,
        .speed = entry.speed >= job.speed_req,
        .capacity = entry.memory_capacity >= job.memory_req,
    };
}

LoadOrder sort_all_by_load(const SystemState& state, Meter& meter) {
    LoadOrder order;
    order.per_cluster.reserve(state.cluster_count());
    for (std::size_t c = 0; c < state.cluster_count(); ++c) {
        std::uint64_t comparisons = 0;
        order.per_cluster.push_back(load_order(state.review(c), comparisons));
        meter.sorted({SortKind::Load, c, state.review(c).size(), comparisons});
    }
    return order;
}

namespace {

std::string rejection_reason(const HostCheck& check) {
    std::string why;
    auto add = [&](bool ok, const char* name) {
        if (ok)
            return;
        if (!why.empty())
            why += '+';
        why += name;
    };
    add(check.memory_left, "memory_left");
    add(check.speed, "speed");
    add(check.capacity, "capacity");
    return why;
}

/// Tests one candidate; emits a rejection event when it does not fit.
bool try_candidate(const SystemState& state, ServerRef ref, const JobSpec& job, Tick tick, Trace& trace) {
    const auto& entry = state.entry(ref);
    auto check = check_host(entry, job);
    if (check.ok())
        return true;
    trace.emit(tick, TraceKind::BalanceReject,
               {{"job", job.id.str()}, {"server", entry.server.str()}, {"why", rejection_reason(check)}});
    return false;
}

/// Every living server except `skip`, clusters ascending, load order within.
std::optional<ServerRef> find_any_target(const SystemState& state, const LoadOrder& order, const JobSpec& job,
                                         std::optional<ServerRef> skip, Tick tick, Trace& trace,
                                         std::uint64_t& comparisons) {
    for (std::size_t c = 0; c < order.per_cluster.size(); ++c) {
        for (auto idx : order.per_cluster[c]) {
            ServerRef ref{c, idx};
            if (state.is_dead(ref) || ref == skip)
                continue;
            ++comparisons;
            if (try_candidate(state, ref, job, tick, trace))
                return ref;
        }
    }
    return std::nullopt;
}

void emit_move(Trace& trace, Tick tick, const Move& move) {
    trace.emit(tick, TraceKind::JobMoved,
               {{"from", move.from ? move.from->str() : std::string("pending")},
                {"job", move.job.str()},
                {"scope", std::string(to_string(move.scope))},
                {"to", move.to.str()}});
}

} // namespace

BalanceOutcome balance_job(SystemState& state, const LoadOrder& order, const JobSpec& job, std::size_t origin_cluster,
                           std::size_t origin_position, std::optional<ServerRef> skip, Tick tick, Trace& trace) {
    BalanceOutcome outcome;
    auto scan = [&](std::size_t cluster, std::size_t from, std::uint64_t& comparisons) -> bool {
        const auto& entries = order.per_cluster.at(cluster);
        for (std::size_t k = from; k < entries.size(); ++k) {
            ServerRef ref{cluster, entries[k]};
            if (state.is_dead(ref) || ref == skip)
                continue;
            ++comparisons;
            if (try_candidate(state, ref, job, tick, trace)) {
                outcome.target = ref;
                return true;
            }
        }
        return false;
    };

    bool found = scan(origin_cluster, origin_position, outcome.within);
    for (std::size_t c = origin_cluster + 1; !found && c < order.per_cluster.size(); ++c)
        found = scan(c, 0, outcome.cross);
    if (found)
        state.place(*outcome.target, job);
    return outcome;
}

RebalanceReport rebalance_cycle(SystemState& state, Tick tick, Trace& trace, Meter& meter) {
    RebalanceReport report;
    report.tick = tick;
    const auto before = meter.counters().total();

    auto order = sort_all_by_load(state, meter);
    CycleProbe cycle;

    struct Stuck {
        JobSpec job;
        ServerRef host;
    };
    std::vector<Stuck> stuck;

    for (std::size_t c = 0; c < state.cluster_count(); ++c) {
        const auto& entries = order.per_cluster[c];
        for (std::size_t p = 0; p < entries.size(); ++p) {
            ServerRef origin{c, entries[p]};
            ++cycle.status;
            if (state.is_dead(origin) || state.entry(origin).status != LoadStatus::Uneven)
                continue;
            ++cycle.uneven_entries;

            auto evicted = pick_evictions(state.entry(origin));
            cycle.evicted_jobs += evicted.size();
            for (const auto& job : evicted)
                state.unplace(origin, job.id);

            std::vector<JobSpec> kept;
            for (const auto& job : evicted) {
                auto outcome = balance_job(state, order, job, c, p, origin, tick, trace);
                cycle.within += outcome.within;
                cycle.cross += outcome.cross;
                meter.balanced({job.id, BalancePath::Eviction, c, p, outcome.target.has_value(), outcome.within,
                                outcome.cross, 0});
                if (outcome.target) {
                    Move move{job.id, state.entry(origin).server, state.entry(*outcome.target).server,
                              outcome.target->cluster == c ? MoveScope::Within : MoveScope::Cross};
                    emit_move(trace, tick, move);
                    report.moves.push_back(std::move(move));
                } else {
                    kept.push_back(job);
                }
            }
            // evictions are a suffix of the assignment list; restore it in order
            for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
                state.place(origin, *it);
                stuck.push_back({*it, origin});
            }
        }
    }

    auto pending = state.take_pending();
    std::vector<bool> stuck_done(stuck.size(), false);
    std::vector<bool> pending_done(pending.size(), false);
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t i = 0; i < stuck.size(); ++i) {
            if (stuck_done[i])
                continue;
            const auto& [job, host] = stuck[i];
            std::uint64_t comparisons = 0;
            auto target = find_any_target(state, order, job, host, tick, trace, comparisons);
            meter.balanced({job.id, BalancePath::Retry, host.cluster, 0, target.has_value(), 0, 0, comparisons});
            if (!target)
                continue;
            state.unplace(host, job.id);
            state.place(*target, job);
            Move move{job.id, state.entry(host).server, state.entry(*target).server, MoveScope::Retry};
            emit_move(trace, tick, move);
            report.moves.push_back(std::move(move));
            stuck_done[i] = true;
            progress = true;
        }
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (pending_done[i])
                continue;
            const auto& job = pending[i].job;
            std::uint64_t comparisons = 0;
            auto target = find_any_target(state, order, job, std::nullopt, tick, trace, comparisons);
            meter.balanced({job.id, BalancePath::Retry, 0, 0, target.has_value(), 0, 0, comparisons});
            if (!target)
                continue;
            state.place(*target, job);
            Move move{job.id, std::nullopt, state.entry(*target).server, MoveScope::Retry};
            emit_move(trace, tick, move);
            report.moves.push_back(std::move(move));
            pending_done[i] = true;
            progress = true;
        }
    }

    for (std::size_t i = 0; i < stuck.size(); ++i) {
        if (stuck_done[i])
            continue;
        const auto& host = state.entry(stuck[i].host).server;
        trace.emit(tick, TraceKind::JobUnresolved,
                   {{"host", host.str()}, {"job", stuck[i].job.id.str()}, {"reason", "no_target"}});
        report.unresolved.push_back({stuck[i].job.id, UnresolvedReason::NoTarget, host});
    }
    for (std::size_t i = 0; i < pending.size(); ++i) {
        if (pending_done[i])
            continue;
        trace.emit(tick, TraceKind::JobUnresolved, {{"job", pending[i].job.id.str()}, {"reason", "pending"}});
        report.unresolved.push_back({pending[i].job.id, UnresolvedReason::Pending, std::nullopt});
        state.push_pending(std::move(pending[i]));
    }

    meter.cycled(cycle);
    state.refresh_load(tick);
    report.comparisons = meter.counters().total() - before;
    trace.emit(tick, TraceKind::RebalanceDone,
               {{"comparisons", std::to_string(report.comparisons)},
                {"moves", std::to_string(report.moves.size())},
                {"unresolved", std::to_string(report.unresolved.size())}});
    return report;
}

} // namespace hetlb
