#include <hetlb/assignment.hpp>

#include <algorithm>
#include <numeric>
#include <tuple>

namespace hetlb {

std::vector<std::size_t> capability_order(std::span<const ReviewEntry> entries, std::uint64_t& comparisons) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::tuple(entries[i].memory_capacity, entries[i].speed, i); };
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            ++comparisons;
            if (key(order[i]) > key(order[j]))
                std::swap(order[i], order[j]);
        }
    }
    return order;
}

std::vector<ReviewEntry> sort_servers(std::span<const ReviewEntry> entries, std::uint64_t* comparisons) {
    std::uint64_t local = 0;
    auto order = capability_order(entries, local);
    if (comparisons)
        *comparisons += local;
    std::vector<ReviewEntry> sorted;
    sorted.reserve(order.size());
    for (auto i : order)
        sorted.push_back(entries[i]);
    return sorted;
}

std::optional<std::size_t> match_cluster(const JobSpec& job, std::span<const ClusterSpec> clusters,
                                         std::uint64_t& comparisons) {
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        ++comparisons;
        if (clusters[c].admits(job.memory_req))
            return c;
    }
    return std::nullopt;
}

std::optional<std::size_t> select_server(const JobSpec& job, const SystemState& state, std::size_t cluster,
                                         std::span<const std::size_t> order, std::uint64_t& comparisons) {
    auto review = state.review(cluster);
    for (auto idx : order) {
        if (state.is_dead({cluster, idx}))
            continue;
        ++comparisons;
        const auto& entry = review[idx];
        if (job.memory_req <= entry.memory_capacity && job.speed_req <= entry.speed)
            return idx;
    }
    return std::nullopt;
}

AssignmentOrder sort_all_servers(const SystemState& state, Meter& meter) {
    AssignmentOrder order;
    order.per_cluster.reserve(state.cluster_count());
    for (std::size_t c = 0; c < state.cluster_count(); ++c) {
        std::uint64_t comparisons = 0;
        order.per_cluster.push_back(capability_order(state.review(c), comparisons));
        meter.sorted({SortKind::Capability, c, state.review(c).size(), comparisons});
    }
    return order;
}

AssignResult assign_job(SystemState& state, const AssignmentOrder& order, const JobSpec& job, Tick tick,
                        Trace& trace, Meter& meter) {
    AssignProbe probe;
    probe.job = job.id;

    auto cluster = match_cluster(job, state.config().clusters, probe.cluster_comparisons);
    if (!cluster) {
        meter.assigned(probe);
        trace.emit(tick, TraceKind::JobPending, {{"job", job.id.str()}, {"reason", "no_cluster"}});
        PendingJob pending{job, PendingReason::NoCluster, tick};
        state.push_pending(pending);
        state.refresh_load(tick);
        return pending;
    }

    probe.cluster = *cluster;
    probe.cluster_size = state.review(*cluster).size();
    const auto& spec = state.cluster_spec(*cluster);
    trace.emit(tick, TraceKind::JobRouted, {{"cluster", spec.id.str()}, {"job", job.id.str()}});

    auto server = select_server(job, state, *cluster, order.per_cluster.at(*cluster), probe.server_comparisons);
    if (!server) {
        meter.assigned(probe);
        trace.emit(tick, TraceKind::JobPending,
                   {{"cluster", spec.id.str()}, {"job", job.id.str()}, {"reason", "no_server"}});
        PendingJob pending{job, PendingReason::NoServer, tick};
        state.push_pending(pending);
        state.refresh_load(tick);
        return pending;
    }

    ServerRef target{*cluster, *server};
    state.place(target, job);
    state.refresh_load(tick);
    probe.placed = true;
    meter.assigned(probe);

    const auto& entry = state.entry(target);
    trace.emit(tick, TraceKind::ServerSelected,
               {{"cluster", spec.id.str()},
                {"job", job.id.str()},
                {"left", std::to_string(entry.memory_left)},
                {"server", entry.server.str()}});
    if (entry.status == LoadStatus::Uneven)
        trace.emit(tick, TraceKind::OverCommit,
                   {{"job", job.id.str()}, {"left", std::to_string(entry.memory_left)}, {"server", entry.server.str()}});
    trace.emit(tick, TraceKind::ClientHandoff, {{"job", job.id.str()}, {"server", entry.server.str()}});

    return AssignmentOutcome{job.id, spec.id, entry.server, probe.cluster_comparisons, probe.server_comparisons};
}

std::vector<ClusterSpec> build_clusters(std::vector<ServerSpec> servers, std::size_t count) {
    std::vector<Memory> distinct;
    for (const auto& s : servers)
        distinct.push_back(s.memory_capacity);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (count == 0 || count > distinct.size())
        throw ModelError("cannot form " + std::to_string(count) + " clusters from " +
                         std::to_string(distinct.size()) + " distinct memory capacities");

    std::vector<ClusterSpec> clusters(count);
    Memory low = 0;
    for (std::size_t g = 0; g < count; ++g) {
        std::size_t last = (g + 1) * distinct.size() / count - 1;
        clusters[g].id = ClusterId("C" + std::to_string(g + 1));
        clusters[g].memory_low = low;
        clusters[g].memory_high = distinct[last];
        low = distinct[last];
    }
    for (auto& server : servers) {
        // first match wins, consistent with routing at shared boundaries
        auto it = std::find_if(clusters.begin(), clusters.end(),
                               [&](const ClusterSpec& c) { return c.admits(server.memory_capacity); });
        server.cluster = it->id;
        it->servers.push_back(server);
    }
    return clusters;
}

} // namespace hetlb
