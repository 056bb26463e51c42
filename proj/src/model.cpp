#include <hetlb/model.hpp>

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace hetlb {

bool is_valid_identifier(std::string_view text) noexcept {
    if (text.empty())
        return false;
    return std::all_of(text.begin(), text.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '.' || c == '-';
    });
}

std::string_view to_string(LoadStatus status) noexcept {
    return status == LoadStatus::Even ? "EVEN" : "UNEVEN";
}

std::string_view to_string(PendingReason reason) noexcept {
    switch (reason) {
    case PendingReason::NoCluster:
        return "no_cluster";
    case PendingReason::NoServer:
        return "no_server";
    case PendingReason::Orphaned:
        return "orphaned";
    case PendingReason::Unplaceable:
        return "unplaceable";
    }
    return "unknown";
}

namespace {

LoadStatus status_for(Memory memory_left) noexcept {
    return memory_left < 0 ? LoadStatus::Uneven : LoadStatus::Even;
}

} // namespace

ReviewEntry ReviewEntry::fresh(const ServerSpec& server) {
    ReviewEntry entry;
    entry.server = server.id;
    entry.memory_capacity = server.memory_capacity;
    entry.speed = server.speed;
    entry.memory_left = server.memory_capacity;
    entry.status = LoadStatus::Even;
    return entry;
}

bool ReviewEntry::holds(const JobId& job) const noexcept {
    return std::any_of(jobs.begin(), jobs.end(), [&](const JobSpec& j) { return j.id == job; });
}

void apply_assignment(ReviewEntry& entry, const JobSpec& job) {
    if (entry.holds(job.id))
        throw ModelError("job " + job.id.str() + " already assigned to " + entry.server.str());
    entry.jobs.push_back(job);
    entry.memory_left -= job.memory_req;
    entry.status = status_for(entry.memory_left);
}

JobSpec remove_assignment(ReviewEntry& entry, const JobId& job) {
    auto it = std::find_if(entry.jobs.begin(), entry.jobs.end(), [&](const JobSpec& j) { return j.id == job; });
    if (it == entry.jobs.end())
        throw ModelError("job " + job.str() + " is not assigned to " + entry.server.str());
    JobSpec removed = *it;
    entry.jobs.erase(it);
    entry.memory_left += removed.memory_req;
    entry.status = status_for(entry.memory_left);
    return removed;
}

std::vector<std::string> check_config(const SystemConfig& config) {
    std::vector<std::string> problems;
    if (config.heartbeat_period < 1)
        problems.push_back("heartbeat period must be >= 1 tick");
    if (config.clusters.empty())
        problems.push_back("no clusters defined");

    std::unordered_set<std::string> cluster_ids;
    std::unordered_set<std::string> server_ids;
    const ClusterSpec* previous = nullptr;
    for (const auto& cluster : config.clusters) {
        if (!cluster_ids.insert(cluster.id.str()).second)
            problems.push_back("duplicate cluster id " + cluster.id.str());
        if (cluster.memory_low < 0 || cluster.memory_low >= cluster.memory_high)
            problems.push_back("cluster " + cluster.id.str() + " needs 0 <= memory_low < memory_high");
        if (previous && (cluster.memory_high <= previous->memory_high || cluster.memory_low < previous->memory_high))
            problems.push_back("cluster " + cluster.id.str() + " range overlaps or precedes cluster " +
                               previous->id.str());
        previous = &cluster;
        for (const auto& server : cluster.servers) {
            if (!server_ids.insert(server.id.str()).second)
                problems.push_back("duplicate server id " + server.id.str());
            if (server.cluster != cluster.id)
                problems.push_back("server " + server.id.str() + " names cluster " + server.cluster.str() +
                                   " but is listed under " + cluster.id.str());
            if (server.memory_capacity <= 0 || server.speed <= 0)
                problems.push_back("server " + server.id.str() + " needs positive memory and speed");
            if (!cluster.admits(server.memory_capacity))
                problems.push_back("server " + server.id.str() + " memory " + std::to_string(server.memory_capacity) +
                                   " outside cluster " + cluster.id.str() + " range");
        }
    }
    return problems;
}

SystemState::SystemState(SystemConfig config) : config_(std::move(config)) {
    auto problems = check_config(config_);
    if (!problems.empty())
        throw ModelError("invalid system configuration: " + problems.front());

    clusters_.reserve(config_.clusters.size());
    for (std::size_t c = 0; c < config_.clusters.size(); ++c) {
        const auto& spec = config_.clusters[c];
        ClusterState state;
        state.load.cluster = spec.id;
        for (std::size_t s = 0; s < spec.servers.size(); ++s) {
            state.review.push_back(ReviewEntry::fresh(spec.servers[s]));
            state.liveness.push_back(LivenessRecord{spec.servers[s].id, 0, true});
            index_.emplace(spec.servers[s].id, ServerRef{c, s});
        }
        clusters_.push_back(std::move(state));
    }
    refresh_load(0);
}

std::size_t SystemState::server_count() const noexcept {
    return index_.size();
}

std::optional<ServerRef> SystemState::find_server(const ServerId& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<ServerRef> SystemState::all_servers() const {
    std::vector<ServerRef> refs;
    refs.reserve(server_count());
    for (std::size_t c = 0; c < clusters_.size(); ++c)
        for (std::size_t s = 0; s < clusters_[c].review.size(); ++s)
            refs.push_back({c, s});
    return refs;
}

void SystemState::place(ServerRef target, const JobSpec& job) {
    if (locations_.contains(job.id))
        throw ModelError("job " + job.id.str() + " is already in the system");
    apply_assignment(clusters_.at(target.cluster).review.at(target.entry), job);
    locations_.emplace(job.id, target);
}

JobSpec SystemState::unplace(ServerRef source, const JobId& job) {
    auto it = locations_.find(job);
    if (it == locations_.end() || !std::holds_alternative<ServerRef>(it->second) ||
        std::get<ServerRef>(it->second) != source)
        throw ModelError("job " + job.str() + " is not on server " + entry(source).server.str());
    JobSpec removed = remove_assignment(clusters_[source.cluster].review[source.entry], job);
    locations_.erase(it);
    return removed;
}

void SystemState::push_pending(PendingJob pending) {
    if (locations_.contains(pending.job.id))
        throw ModelError("job " + pending.job.id.str() + " is already in the system");
    locations_.emplace(pending.job.id, InPending{});
    pending_.push_back(std::move(pending));
}

std::vector<PendingJob> SystemState::take_pending() {
    std::vector<PendingJob> taken(pending_.begin(), pending_.end());
    pending_.clear();
    for (const auto& p : taken)
        locations_.erase(p.job.id);
    return taken;
}

std::optional<JobLocation> SystemState::locate(const JobId& job) const {
    auto it = locations_.find(job);
    if (it == locations_.end())
        return std::nullopt;
    return it->second;
}

std::optional<JobSpec> SystemState::find_job(const JobId& job) const {
    auto where = locate(job);
    if (!where)
        return std::nullopt;
    if (const auto* ref = std::get_if<ServerRef>(&*where)) {
        for (const auto& j : entry(*ref).jobs)
            if (j.id == job)
                return j;
        return std::nullopt;
    }
    for (const auto& p : pending_)
        if (p.job.id == job)
            return p.job;
    return std::nullopt;
}

bool SystemState::forget(const JobId& job) {
    auto where = locate(job);
    if (!where)
        return false;
    if (const auto* ref = std::get_if<ServerRef>(&*where)) {
        unplace(*ref, job);
        return true;
    }
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const PendingJob& p) { return p.job.id == job; });
    pending_.erase(it);
    locations_.erase(job);
    return true;
}

void SystemState::stamp_refresh(ServerRef ref, Tick tick) {
    clusters_.at(ref.cluster).review.at(ref.entry).last_refresh = tick;
}

void SystemState::refresh_load(Tick tick) {
    for (auto& cluster : clusters_) {
        cluster.load.total_memory_left = 0;
        cluster.load.uneven_count = 0;
        for (const auto& entry : cluster.review) {
            cluster.load.total_memory_left += entry.memory_left;
            if (entry.status == LoadStatus::Uneven)
                ++cluster.load.uneven_count;
        }
        cluster.load.last_update_tick = tick;
    }
}

std::vector<std::string> SystemState::audit() const {
    std::vector<std::string> violations;
    std::unordered_map<JobId, int> seen;

    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        const auto& cluster = clusters_[c];
        Memory total_left = 0;
        std::size_t uneven = 0;
        for (std::size_t s = 0; s < cluster.review.size(); ++s) {
            const auto& entry = cluster.review[s];
            Memory used = 0;
            for (const auto& job : entry.jobs) {
                used += job.memory_req;
                ++seen[job.id];
                auto where = locate(job.id);
                if (!where || !std::holds_alternative<ServerRef>(*where) ||
                    std::get<ServerRef>(*where) != ServerRef{c, s})
                    violations.push_back("job " + job.id.str() + " on " + entry.server.str() +
                                         " disagrees with the location index");
            }
            if (entry.memory_capacity - used != entry.memory_left)
                violations.push_back("conservation broken on " + entry.server.str());
            if ((entry.status == LoadStatus::Uneven) != (entry.memory_left < 0))
                violations.push_back("status inconsistent on " + entry.server.str());
            if (!cluster.liveness[s].alive && !entry.jobs.empty())
                violations.push_back("dead server " + entry.server.str() + " still holds jobs");
            total_left += entry.memory_left;
            if (entry.status == LoadStatus::Uneven)
                ++uneven;
        }
        if (cluster.load.total_memory_left != total_left || cluster.load.uneven_count != uneven)
            violations.push_back("load summary stale for cluster " + cluster.load.cluster.str());
    }
    for (const auto& p : pending_) {
        ++seen[p.job.id];
        auto where = locate(p.job.id);
        if (!where || !std::holds_alternative<InPending>(*where))
            violations.push_back("pending job " + p.job.id.str() + " disagrees with the location index");
    }
    for (const auto& [job, count] : seen)
        if (count != 1)
            violations.push_back("job " + job.str() + " appears " + std::to_string(count) + " times");
    if (seen.size() != locations_.size())
        violations.push_back("location index tracks " + std::to_string(locations_.size()) + " jobs but " +
                             std::to_string(seen.size()) + " are present");
    return violations;
}

} // namespace hetlb
