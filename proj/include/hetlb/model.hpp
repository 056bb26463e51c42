#pragma once

// Domain types and the live system state: ability matrices (ClusterSpec /
// ServerSpec), the review matrix (one ReviewEntry per server), the load
// matrix (one LoadSummary per cluster) and the pending queue.

#include <hetlb/ids.hpp>

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace hetlb {

using Memory = std::int64_t; // GB
using Speed = std::int64_t;  // MHz
using Tick = std::int64_t;

/// Violation of a model invariant (duplicate job, removal of an absent job,
/// inconsistent configuration). Signals a corrupt scenario or a logic bug.
class ModelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct JobSpec {
    JobId id;
    Memory memory_req = 0;
    Speed speed_req = 0;

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct ServerSpec {
    ServerId id;
    ClusterId cluster;
    Memory memory_capacity = 0;
    Speed speed = 0;

    friend bool operator==(const ServerSpec&, const ServerSpec&) = default;
};

/// A cluster admits jobs whose memory demand lies in [memory_low, memory_high].
struct ClusterSpec {
    ClusterId id;
    Memory memory_low = 0;
    Memory memory_high = 0;
    std::vector<ServerSpec> servers;

    bool admits(Memory memory) const noexcept {
        return memory_low <= memory && memory <= memory_high;
    }

    friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

enum class LoadStatus { Even, Uneven };

std::string_view to_string(LoadStatus status) noexcept;

/// One row of the review matrix. Speed is a threshold capability and is
/// never consumed; memory is subtractive and may go negative (over-commit).
struct ReviewEntry {
    ServerId server;
    Memory memory_capacity = 0;
    Speed speed = 0;
    Memory memory_left = 0;
    std::vector<JobSpec> jobs; // assignment order
    LoadStatus status = LoadStatus::Even;
    Tick last_refresh = 0; // tick of the last heartbeat that refreshed this row

    static ReviewEntry fresh(const ServerSpec& server);

    bool holds(const JobId& job) const noexcept;

    friend bool operator==(const ReviewEntry&, const ReviewEntry&) = default;
};

/// Appends a job and debits its memory. Throws ModelError if the entry
/// already holds the job.
void apply_assignment(ReviewEntry& entry, const JobSpec& job);

/// Removes a job, credits its memory and returns it. Throws ModelError if
/// the job is not on this entry.
JobSpec remove_assignment(ReviewEntry& entry, const JobId& job);

/// Load-matrix row for one cluster.
struct LoadSummary {
    ClusterId cluster;
    Memory total_memory_left = 0;
    std::size_t uneven_count = 0;
    Tick last_update_tick = 0;

    friend bool operator==(const LoadSummary&, const LoadSummary&) = default;
};

struct LivenessRecord {
    ServerId server;
    Tick last_heartbeat = 0;
    bool alive = true;

    friend bool operator==(const LivenessRecord&, const LivenessRecord&) = default;
};

struct SystemConfig {
    Tick heartbeat_period = 1;
    std::vector<ClusterSpec> clusters; // ascending by memory_high

    Tick dead_after() const noexcept { return 2 * heartbeat_period; }

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Checks the structural invariants of a configuration and returns one
/// message per violation (empty when valid).
std::vector<std::string> check_config(const SystemConfig& config);

struct ServerRef {
    std::size_t cluster = 0;
    std::size_t entry = 0;

    friend auto operator<=>(const ServerRef&, const ServerRef&) = default;
};

enum class PendingReason { NoCluster, NoServer, Orphaned, Unplaceable };

std::string_view to_string(PendingReason reason) noexcept;

struct PendingJob {
    JobSpec job;
    PendingReason reason = PendingReason::NoServer;
    Tick since = 0;

    friend bool operator==(const PendingJob&, const PendingJob&) = default;
};

struct InPending {
    friend bool operator==(const InPending&, const InPending&) = default;
};

using JobLocation = std::variant<ServerRef, InPending>;

/// Whole-system state owned by one simulation instance. Review entries are
/// kept in ability-matrix (declaration) order; sorted views are index
/// permutations computed by the assignment and balancer modules.
class SystemState {
public:
    explicit SystemState(SystemConfig config);

    const SystemConfig& config() const noexcept { return config_; }
    std::size_t cluster_count() const noexcept { return clusters_.size(); }
    std::size_t server_count() const noexcept;

    const ClusterSpec& cluster_spec(std::size_t cluster) const { return config_.clusters.at(cluster); }
    std::span<const ReviewEntry> review(std::size_t cluster) const { return clusters_.at(cluster).review; }
    const ReviewEntry& entry(ServerRef ref) const { return clusters_.at(ref.cluster).review.at(ref.entry); }
    const LoadSummary& load(std::size_t cluster) const { return clusters_.at(cluster).load; }

    const LivenessRecord& liveness(ServerRef ref) const { return clusters_.at(ref.cluster).liveness.at(ref.entry); }
    LivenessRecord& liveness(ServerRef ref) { return clusters_.at(ref.cluster).liveness.at(ref.entry); }
    bool is_dead(ServerRef ref) const { return !liveness(ref).alive; }

    std::optional<ServerRef> find_server(const ServerId& id) const;
    /// Every server in cluster order, then declaration order.
    std::vector<ServerRef> all_servers() const;

    /// Places a job on a server. Throws ModelError if the job is already
    /// placed or pending anywhere in the system.
    void place(ServerRef target, const JobSpec& job);
    /// Takes a job off a server. Throws ModelError if it is not there.
    JobSpec unplace(ServerRef source, const JobId& job);

    void push_pending(PendingJob pending);
    /// Removes and returns the whole pending queue in FIFO order.
    std::vector<PendingJob> take_pending();
    const std::deque<PendingJob>& pending() const noexcept { return pending_; }

    std::optional<JobLocation> locate(const JobId& job) const;
    std::optional<JobSpec> find_job(const JobId& job) const;
    /// Removes a job from wherever it is. Returns false if unknown.
    bool forget(const JobId& job);
    std::size_t job_count() const noexcept { return locations_.size(); }

    void stamp_refresh(ServerRef ref, Tick tick);
    void refresh_load(Tick tick);

    /// Full invariant audit; returns one message per violation.
    std::vector<std::string> audit() const;

    friend bool operator==(const SystemState&, const SystemState&) = default;

private:
    struct ClusterState {
        std::vector<ReviewEntry> review;
        std::vector<LivenessRecord> liveness;
        LoadSummary load;

        friend bool operator==(const ClusterState&, const ClusterState&) = default;
    };

    SystemConfig config_;
    std::vector<ClusterState> clusters_;
    std::deque<PendingJob> pending_;
    std::unordered_map<JobId, JobLocation> locations_;
    std::unordered_map<ServerId, ServerRef> index_;
};

} // namespace hetlb
