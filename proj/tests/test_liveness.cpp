#include <hetlb/liveness.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

using namespace hetlb;
using namespace hetlb::testing;

namespace {

void put(SystemState& state, const char* server, const JobSpec& j) {
    state.place(*state.find_server(ServerId(server)), j);
}

/// The balanced matrix reached after one cycle, by direct placement.
SystemState balanced() {
    SystemState state(example_config());
    auto jobs = example_jobs();
    put(state, "WS2.3", jobs[0]);
    put(state, "WS1.1", jobs[1]);
    put(state, "WS1.3", jobs[2]);
    put(state, "WS2.1", jobs[3]);
    put(state, "WS1.2", jobs[4]);
    put(state, "WS2.2", jobs[5]);
    put(state, "WS2.2", jobs[6]);
    return state;
}

void kill(SystemState& state, const char* server) {
    state.liveness(*state.find_server(ServerId(server))).alive = false;
}

} // namespace

TEST(IsStale, TwoPeriodBoundary) {
    auto config = example_config(5);
    LivenessRecord record{ServerId("WS1.1"), 10, true};
    EXPECT_FALSE(is_stale(config, record, 14));
    EXPECT_FALSE(is_stale(config, record, 19));
    EXPECT_TRUE(is_stale(config, record, 20));
    EXPECT_TRUE(is_stale(config, record, 21));
}

TEST(RecordHeartbeat, UpdatesLivenessAndRefreshStamp) {
    SystemState state(example_config());
    Trace trace;
    const auto& record = record_heartbeat(state, ServerId("WS2.2"), 15, trace);
    EXPECT_EQ(record.last_heartbeat, 15);
    EXPECT_TRUE(record.alive);
    EXPECT_EQ(entry_of(state, "WS2.2").last_refresh, 15);
    EXPECT_EQ(trace.events().size(), 0u);
}

TEST(RecordHeartbeat, UnknownServerThrows) {
    SystemState state(example_config());
    Trace trace;
    EXPECT_THROW(record_heartbeat(state, ServerId("WS9.9"), 0, trace), UnknownServerError);
}

TEST(RecordHeartbeat, RevivesDeadServer) {
    SystemState state(example_config());
    kill(state, "WS1.2");
    Trace trace;
    record_heartbeat(state, ServerId("WS1.2"), 30, trace);
    EXPECT_FALSE(state.is_dead(*state.find_server(ServerId("WS1.2"))));
    ASSERT_EQ(trace.count(TraceKind::ServerRevived), 1u);
}

TEST(DetectDead, ReportsSimultaneousDeathsInIdOrder) {
    SystemState state(example_config());
    Trace trace;
    for (auto ref : state.all_servers())
        record_heartbeat(state, state.entry(ref).server, 5, trace);
    record_heartbeat(state, ServerId("WS2.1"), 0, trace);
    record_heartbeat(state, ServerId("WS1.3"), 0, trace);

    EXPECT_TRUE(detect_dead(state, 9, trace).empty());
    auto dead = detect_dead(state, 10, trace);
    EXPECT_EQ(dead, (std::vector<ServerId>{ServerId("WS1.3"), ServerId("WS2.1")}));
    EXPECT_TRUE(detect_dead(state, 11, trace).empty()) << "reported once only";
    EXPECT_EQ(format_event(trace.events()[0]), "10 server_dead last_heartbeat=0 server=WS1.3");
    auto later = detect_dead(state, 15, trace);
    EXPECT_EQ(later.size(), 4u);
}

TEST(MigrateDeadJobs, MovesJobWithinClusterWhenItFits) {
    SystemState state(example_config());
    put(state, "WS1.1", job("J2", 500, 50));
    kill(state, "WS1.1");
    Trace trace;
    Meter meter;
    auto report = migrate_dead_jobs(state, ServerId("WS1.1"), 20, trace, meter);
    ASSERT_EQ(report.moves.size(), 1u);
    EXPECT_EQ(report.moves[0], (Move{JobId("J2"), ServerId("WS1.1"), ServerId("WS1.2"), MoveScope::Within}));
    EXPECT_TRUE(entry_of(state, "WS1.1").jobs.empty());
    EXPECT_EQ(format_event(trace.events().back()), "20 job_migrated from=WS1.1 job=J2 to=WS1.2");
    EXPECT_TRUE(state.audit().empty());
}

TEST(MigrateDeadJobs, LargeJobWithNoRoomGoesPending) {
    auto state = balanced();
    kill(state, "WS2.3");
    Trace trace;
    Meter meter;
    auto report = migrate_dead_jobs(state, ServerId("WS2.3"), 20, trace, meter);
    EXPECT_TRUE(report.moves.empty());
    ASSERT_EQ(state.pending().size(), 1u);
    EXPECT_EQ(state.pending().front().job.id, JobId("J1"));
    EXPECT_EQ(state.pending().front().reason, PendingReason::Orphaned);
    EXPECT_EQ(state.pending().front().since, 20);
    EXPECT_EQ(trace.count(TraceKind::JobOrphanedPending), 1u);
    EXPECT_TRUE(state.audit().empty());
}

TEST(MigrateDeadJobs, ScansLaterClustersBeforeGivingUp) {
    auto state = balanced();
    kill(state, "WS1.1");
    Trace trace;
    Meter meter;
    auto report = migrate_dead_jobs(state, ServerId("WS1.1"), 20, trace, meter);
    EXPECT_TRUE(report.moves.empty());
    ASSERT_EQ(state.pending().size(), 1u);
    EXPECT_EQ(state.pending().front().job.id, JobId("J2"));
    // WS1.3, WS1.2 in cluster one; all three of cluster two
    EXPECT_EQ(meter.counters().within, 2u);
    EXPECT_EQ(meter.counters().cross, 3u);
}

TEST(MigrateDeadJobs, EmptyDeadServerProducesEmptyReport) {
    SystemState state(example_config());
    kill(state, "WS2.2");
    Trace trace;
    Meter meter;
    auto report = migrate_dead_jobs(state, ServerId("WS2.2"), 20, trace, meter);
    EXPECT_TRUE(report.moves.empty());
    EXPECT_TRUE(report.unresolved.empty());
    EXPECT_EQ(report.comparisons, 0u);
    EXPECT_TRUE(trace.events().empty());
}

TEST(MigrateDeadJobs, RefusesLiveServer) {
    auto state = balanced();
    Trace trace;
    Meter meter;
    EXPECT_THROW(migrate_dead_jobs(state, ServerId("WS1.1"), 20, trace, meter), ModelError);
    EXPECT_THROW(migrate_dead_jobs(state, ServerId("nope"), 20, trace, meter), UnknownServerError);
}

TEST(MigrateDeadJobs, NeverTargetsAnotherDeadServer) {
    SystemState state(example_config());
    put(state, "WS1.1", job("a", 300, 10));
    kill(state, "WS1.1");
    kill(state, "WS1.2");
    Trace trace;
    Meter meter;
    auto report = migrate_dead_jobs(state, ServerId("WS1.1"), 20, trace, meter);
    ASSERT_EQ(report.moves.size(), 1u);
    EXPECT_EQ(report.moves[0].to, ServerId("WS1.3"));
}
