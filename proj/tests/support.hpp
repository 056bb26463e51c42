#pragma once

// Test fixtures and independent oracles. Nothing here calls into the
// placement or balancing code it is used to check.

#include <hetlb/model.hpp>
#include <hetlb/scenario.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hetlb::testing {

inline ServerSpec server(const char* id, const char* cluster, Memory memory, Speed speed) {
    return ServerSpec{ServerId(id), ClusterId(cluster), memory, speed};
}

inline JobSpec job(const char* id, Memory memory, Speed speed) {
    return JobSpec{JobId(id), memory, speed};
}

/// Two clusters of three servers, written out by hand.
inline SystemConfig example_config(Tick period = 5) {
    SystemConfig config;
    config.heartbeat_period = period;
    config.clusters.push_back(ClusterSpec{ClusterId("C1"),
                                          0,
                                          1000,
                                          {server("WS1.1", "C1", 500, 60), server("WS1.2", "C1", 700, 70),
                                           server("WS1.3", "C1", 1000, 100)}});
    config.clusters.push_back(ClusterSpec{ClusterId("C2"),
                                          1000,
                                          2000,
                                          {server("WS2.1", "C2", 1200, 50), server("WS2.2", "C2", 1500, 70),
                                           server("WS2.3", "C2", 1800, 80)}});
    return config;
}

inline std::vector<JobSpec> example_jobs() {
    return {job("J1", 1500, 80), job("J2", 500, 50), job("J3", 1000, 90), job("J4", 1200, 40),
            job("J5", 600, 50),  job("J6", 700, 60), job("J7", 500, 60)};
}

inline Scenario example_scenario_by_hand() {
    Scenario s;
    s.config = example_config();
    for (const auto& j : example_jobs())
        s.events.push_back({0, JobArrival{j}});
    s.horizon = 5;
    return s;
}

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// n clusters of m servers; cluster c admits [c*span, (c+1)*span].
inline SystemConfig random_config(std::mt19937_64& rng, std::size_t n, std::size_t m, Memory span = 1000,
                                  Tick period = 5) {
    SystemConfig config;
    config.heartbeat_period = period;
    for (std::size_t c = 0; c < n; ++c) {
        ClusterSpec cluster;
        cluster.id = ClusterId("C" + std::to_string(c + 1));
        cluster.memory_low = static_cast<Memory>(c) * span;
        cluster.memory_high = static_cast<Memory>(c + 1) * span;
        for (std::size_t s = 0; s < m; ++s) {
            Memory low = std::max<Memory>(1, cluster.memory_low);
            cluster.servers.push_back(ServerSpec{ServerId("WS" + std::to_string(c + 1) + "." + std::to_string(s + 1)),
                                                 cluster.id, uniform(rng, low, cluster.memory_high),
                                                 uniform(rng, 10, 100)});
        }
        config.clusters.push_back(std::move(cluster));
    }
    return config;
}

inline std::vector<JobSpec> random_jobs(std::mt19937_64& rng, std::size_t k, Memory max_memory,
                                        const std::string& prefix = "J") {
    std::vector<JobSpec> jobs;
    for (std::size_t i = 0; i < k; ++i)
        jobs.push_back(JobSpec{JobId(prefix + std::to_string(i + 1)), uniform(rng, 1, max_memory), uniform(rng, 1, 100)});
    return jobs;
}

/// Brute force: every living server other than `host` that could accept
/// the job right now on memory_left, speed and nominal capacity.
inline std::vector<ServerId> feasible_targets(const SystemState& state, const JobSpec& j,
                                              const std::optional<ServerId>& host) {
    std::vector<ServerId> out;
    for (std::size_t c = 0; c < state.cluster_count(); ++c) {
        auto review = state.review(c);
        for (std::size_t s = 0; s < review.size(); ++s) {
            const auto& e = review[s];
            if (state.is_dead({c, s}) || (host && e.server == *host))
                continue;
            if (e.memory_left >= j.memory_req && e.speed >= j.speed_req && e.memory_capacity >= j.memory_req)
                out.push_back(e.server);
        }
    }
    return out;
}

/// Sum of min(memory_left, 0) across all servers.
inline Memory total_overflow(const SystemState& state) {
    Memory total = 0;
    for (std::size_t c = 0; c < state.cluster_count(); ++c)
        for (const auto& e : state.review(c))
            total += std::min<Memory>(e.memory_left, 0);
    return total;
}

/// All job ids in the system: on servers and in pending.
inline std::vector<std::string> all_job_ids(const SystemState& state) {
    std::vector<std::string> ids;
    for (std::size_t c = 0; c < state.cluster_count(); ++c)
        for (const auto& e : state.review(c))
            for (const auto& j : e.jobs)
                ids.push_back(j.id.str());
    for (const auto& p : state.pending())
        ids.push_back(p.job.id.str());
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline const ReviewEntry& entry_of(const SystemState& state, const char* server) {
    return state.entry(*state.find_server(ServerId(server)));
}

inline std::vector<std::string> job_ids(const ReviewEntry& e) {
    std::vector<std::string> ids;
    for (const auto& j : e.jobs)
        ids.push_back(j.id.str());
    return ids;
}

} // namespace hetlb::testing
