#pragma once

// Controller -> cluster -> server routing of new jobs. Placement checks the
// ability matrix (nominal capacity), not memory_left, so a server may be
// over-committed; the balancer corrects that on its next cycle.

#include <hetlb/instrumentation.hpp>
#include <hetlb/model.hpp>
#include <hetlb/trace.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace hetlb {

struct AssignmentOutcome {
    JobId job;
    ClusterId cluster;
    ServerId server;
    std::uint64_t comparisons_cluster = 0;
    std::uint64_t comparisons_server = 0;

    friend bool operator==(const AssignmentOutcome&, const AssignmentOutcome&) = default;
};

using AssignResult = std::variant<AssignmentOutcome, PendingJob>;

/// Index permutation putting entries in ascending (memory_capacity, speed)
/// order, full ties kept in input order. Exchange sort over all pairs, so
/// exactly m(m-1)/2 comparisons are added to `comparisons`.
std::vector<std::size_t> capability_order(std::span<const ReviewEntry> entries, std::uint64_t& comparisons);

std::vector<ReviewEntry> sort_servers(std::span<const ReviewEntry> entries, std::uint64_t* comparisons = nullptr);

/// First cluster whose inclusive range admits the job's memory demand.
/// Clusters must be ordered by ascending memory_high.
std::optional<std::size_t> match_cluster(const JobSpec& job, std::span<const ClusterSpec> clusters,
                                         std::uint64_t& comparisons);

/// First server in `order` whose nominal memory and speed both suffice.
/// Dead servers are skipped without being compared.
std::optional<std::size_t> select_server(const JobSpec& job, const SystemState& state, std::size_t cluster,
                                         std::span<const std::size_t> order, std::uint64_t& comparisons);

/// Scan order for every cluster, recomputed once per arrival batch.
struct AssignmentOrder {
    std::vector<std::vector<std::size_t>> per_cluster;
};

AssignmentOrder sort_all_servers(const SystemState& state, Meter& meter);

/// Routes and places one new job, or parks it in the pending queue.
AssignResult assign_job(SystemState& state, const AssignmentOrder& order, const JobSpec& job, Tick tick,
                        Trace& trace, Meter& meter);

/// Groups a flat server list into `count` clusters by memory quantiles.
/// Ranges are contiguous: the first starts at 0 and each later one starts
/// at the previous upper bound. Servers keep their input order within a
/// cluster. Throws ModelError if count is 0 or exceeds the number of
/// distinct memory capacities.
std::vector<ClusterSpec> build_clusters(std::vector<ServerSpec> servers, std::size_t count);

} // namespace hetlb
