#pragma once

// Periodic correction of over-committed (UNEVEN) servers. Evicted jobs are
// re-placed using current memory_left: first later in the origin cluster's
// load order, then in subsequent clusters. Jobs that path cannot place, and
// pending jobs, then go through settle sweeps over every living server
// until a sweep makes no progress.

#include <hetlb/instrumentation.hpp>
#include <hetlb/model.hpp>
#include <hetlb/trace.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hetlb {

enum class MoveScope { Within, Cross, Retry };

std::string_view to_string(MoveScope scope) noexcept;

struct Move {
    JobId job;
    std::optional<ServerId> from; // empty when the job came out of pending
    ServerId to;
    MoveScope scope = MoveScope::Within;

    friend bool operator==(const Move&, const Move&) = default;
};

enum class UnresolvedReason { NoTarget, Pending };

struct Unresolved {
    JobId job;
    UnresolvedReason reason = UnresolvedReason::NoTarget;
    std::optional<ServerId> host; // origin server the job stays on

    friend bool operator==(const Unresolved&, const Unresolved&) = default;
};

struct RebalanceReport {
    Tick tick = 0;
    std::vector<Move> moves;
    std::vector<Unresolved> unresolved;
    std::uint64_t comparisons = 0;
};

/// Ascending memory_left, ties by server_id. Exchange sort, m(m-1)/2
/// comparisons.
std::vector<std::size_t> load_order(std::span<const ReviewEntry> entries, std::uint64_t& comparisons);

std::vector<ReviewEntry> sort_by_load(std::span<const ReviewEntry> entries, std::uint64_t* comparisons = nullptr);

/// Most recent jobs first, as few as needed to bring memory_left back to
/// zero or above. Empty for an EVEN entry.
std::vector<JobSpec> pick_evictions(const ReviewEntry& entry);

/// The three placement predicates used while balancing.
struct HostCheck {
    bool memory_left = false;
    bool speed = false;
    bool capacity = false;

    bool ok() const noexcept { return memory_left && speed && capacity; }
};

HostCheck check_host(const ReviewEntry& entry, const JobSpec& job) noexcept;

struct LoadOrder {
    std::vector<std::vector<std::size_t>> per_cluster;
};

LoadOrder sort_all_by_load(const SystemState& state, Meter& meter);

struct BalanceOutcome {
    std::optional<ServerRef> target;
    std::uint64_t within = 0;
    std::uint64_t cross = 0;
};

/// Places a job that is currently off-server (evicted or orphaned). Scans
/// `origin_cluster` from `origin_position` in `order`, then every later
/// cluster; dead servers and `skip` are passed over uncounted. On success
/// the job is placed on the returned target.
BalanceOutcome balance_job(SystemState& state, const LoadOrder& order, const JobSpec& job, std::size_t origin_cluster,
                           std::size_t origin_position, std::optional<ServerRef> skip, Tick tick, Trace& trace);

/// One full balancing pass at `tick`.
RebalanceReport rebalance_cycle(SystemState& state, Tick tick, Trace& trace, Meter& meter);

} // namespace hetlb
